#include <doctest.h>

#include <set>

#include "realcalc/calculus.hpp"
#include "realcalc/classify1d.hpp"
#include "realcalc/errors.hpp"
#include "realcalc/iso_nd.hpp"
#include "support/fixtures.hpp"

using namespace realcalc;
using fixtures::diag;
using fixtures::row;

namespace {
const Tolerance tol{};

ZeroPattern pattern(std::initializer_list<std::uint8_t> bits) { return ZeroPattern{std::vector<std::uint8_t>(bits)}; }

// Orbit count of nonzero k-bit patterns under reversal (Burnside).
std::uint64_t burnside_count(std::size_t k, bool anti) {
    const std::uint64_t all = std::uint64_t{1} << k;
    if (!anti) return all - 1;
    const std::uint64_t fixed = std::uint64_t{1} << ((k + 1) / 2);
    return (all + fixed) / 2 - 1;
}

// Relabels the canonical basis: conjugating by a random unitary that mixes each
// eigenspace, then by a random global unitary.
CalculusInstance scrambled(fixtures::Rng& rng, const CalculusInstance& c) {
    const auto N = static_cast<Eigen::Index>(c.N());
    const ComplexMatrix V = fixtures::random_unitary(rng, N);
    CalculusInstance out = c;
    out.rep.dhat[0] = V.adjoint() * c.rep.dhat[0] * V;
    out.phi[0] = c.phi[0] * V;
    return out;
}
}  // namespace

TEST_CASE("anti_selfsimilar examples") {
    CHECK(anti_selfsimilar(diag({kI, 0, -kI}), tol));
    CHECK_FALSE(anti_selfsimilar(diag({2.0 * kI, -kI, -kI}), tol));
    CHECK(anti_selfsimilar(diag({kI, -kI}), tol));
    CHECK(anti_selfsimilar(diag({kI, kI, -kI, -kI}), tol));
    CHECK_FALSE(anti_selfsimilar(diag({3.0 * kI, kI, 0, -kI, -2.0 * kI, -kI}), tol));
    CHECK_THROWS_AS((void)anti_selfsimilar(diag({kI, kI}), tol), ArgumentError);
    CHECK_THROWS_AS((void)anti_selfsimilar(diag({1, -1}), tol), NotAntiHermitianError);
}

TEST_CASE("anti_selfsimilar is invariant under conjugation") {
    fixtures::Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        const bool sym = t % 2 == 0;
        const std::vector<std::size_t> mult = sym ? std::vector<std::size_t>{1, 2, 1} : std::vector<std::size_t>{2, 1, 1};
        const ComplexMatrix d = fixtures::imaginary_diag(fixtures::random_spectrum(rng, mult, sym));
        const ComplexMatrix U = fixtures::random_unitary(rng, d.rows());
        CHECK(anti_selfsimilar(ComplexMatrix(U.adjoint() * d * U), tol) == sym);
    }
}

TEST_CASE("zero_pattern examples") {
    CHECK(zero_pattern(fixtures::line(diag({2.0 * kI, -kI, -kI}), row({1, 0, 5})), tol) == pattern({1, 1}));
    CHECK(zero_pattern(fixtures::line(diag({2.0 * kI, -kI, -kI}), row({0, 1, 0})), tol) == pattern({0, 1}));
    CHECK(zero_pattern(fixtures::line(diag({kI, -kI}), row({1, 0})), tol) == pattern({1, 0}));
    CHECK(pattern({1, 0, 0}).to_string() == "(1,0,0)");
    CHECK(pattern({1, 1, 0}).reversed() == pattern({0, 1, 1}));
    CHECK(pattern({1, 0, 1}).is_palindrome());
    CHECK_FALSE(pattern({0, 0}).any());
    CHECK_THROWS_AS((void)zero_pattern(fixtures::line(diag({-kI, kI}), row({1, 0})), tol), NonCanonicalError);
    CHECK_THROWS_AS((void)zero_pattern(fixtures::line(fixtures::mat({{0, 1}, {-1, 0}}), row({1, 0})), tol),
                    NonCanonicalError);
}

TEST_CASE("quasi_equivalent_1d examples") {
    auto qe = quasi_equivalent_1d(diag({kI, -kI}), diag({3.0 * kI, -3.0 * kI}), tol);
    REQUIRE(qe.mu_candidates.size() == 2);
    CHECK(qe.mu_candidates[0] == doctest::Approx(-3.0));
    CHECK(qe.mu_candidates[1] == doctest::Approx(3.0));

    qe = quasi_equivalent_1d(diag({2.0 * kI, -kI, -kI}), diag({kI, kI, -2.0 * kI}), tol);
    REQUIRE(qe.mu_candidates.size() == 1);
    CHECK(qe.mu_candidates[0] == doctest::Approx(-1.0));
    CHECK(qe.has_negative());
    CHECK_FALSE(qe.has_positive());

    CHECK(quasi_equivalent_1d(diag({2.0 * kI, -kI, -kI}), diag({kI, 0, -kI}), tol).empty());
    CHECK_THROWS_AS((void)quasi_equivalent_1d(diag({0, 0}), diag({kI, -kI}), tol), DegenerateError);
    CHECK_THROWS_AS((void)quasi_equivalent_1d(diag({kI, -kI}), diag({kI, 0, -kI}), tol), ShapeError);
}

TEST_CASE("quasi_equivalent_1d against a brute-force ratio test") {
    fixtures::Rng rng(8);
    for (int t = 0; t < 40; ++t) {
        const bool sym = t % 2 == 0;
        const std::vector<std::size_t> mult = sym ? std::vector<std::size_t>{1, 2, 1} : std::vector<std::size_t>{2, 1, 1};
        const auto spec = fixtures::random_spectrum(rng, mult, sym);
        const double mu = (t % 4 < 2 ? 1.0 : -1.0) * fixtures::uniform(rng, 0.3, 3.0);
        std::vector<double> scaled = spec;
        for (auto& x : scaled) x *= mu;
        const ComplexMatrix U = fixtures::random_unitary(rng, static_cast<Eigen::Index>(spec.size()));
        const ComplexMatrix da = fixtures::imaginary_diag(spec);
        const ComplexMatrix db = U.adjoint() * fixtures::imaginary_diag(scaled) * U;
        const auto qe = quasi_equivalent_1d(da, db, tol);
        // oracle: every candidate sign s*|mu| for which the sorted multisets agree
        std::set<int> expected_signs;
        for (const double s : {-1.0, 1.0}) {
            std::vector<double> lhs = spec, rhs = scaled;
            for (auto& x : lhs) x *= s * std::abs(mu);
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            bool ok = true;
            for (std::size_t i = 0; i < lhs.size(); ++i) ok = ok && std::abs(lhs[i] - rhs[i]) < 1e-8;
            if (ok) expected_signs.insert(s > 0 ? 1 : -1);
        }
        std::set<int> got;
        for (double m : qe.mu_candidates) {
            CHECK(std::abs(std::abs(m) - std::abs(mu)) < 1e-8);
            got.insert(m > 0 ? 1 : -1);
        }
        CHECK(got == expected_signs);
    }
}

TEST_CASE("is_isomorphic_1d examples") {
    const auto a = fixtures::line(diag({kI, -kI}), row({1, 0}));
    const auto b = fixtures::line(diag({2.0 * kI, -2.0 * kI}), row({0, 1}));
    CHECK(is_isomorphic_1d(a, b, tol));
    const auto c = fixtures::line(diag({2.0 * kI, -kI, -kI}), row({1, 0, 0}));
    const auto d = fixtures::line(diag({2.0 * kI, -kI, -kI}), row({0, 1, 0}));
    CHECK_FALSE(is_isomorphic_1d(c, d, tol));
    CHECK(is_isomorphic_1d(c, c, tol));
    // only a negative mu relates the representations
    const auto e = fixtures::line(diag({kI, kI, -2.0 * kI}), row({0, 0, 1}));
    CHECK(is_isomorphic_1d(c, e, tol));
    CHECK_FALSE(is_isomorphic_1d(c, fixtures::line(diag({kI, kI, -2.0 * kI}), row({1, 0, 0})), tol));
    CHECK_FALSE(is_isomorphic_1d(c, fixtures::line(diag({kI, 0, -kI}), row({1, 1, 1})), tol));
    CHECK_THROWS_AS((void)is_isomorphic_1d(a, c, tol), ShapeError);
}

TEST_CASE("is_isomorphic_1d properties") {
    fixtures::Rng rng(99);
    const std::vector<std::vector<std::size_t>> shapes{{1, 1}, {1, 2}, {2, 1, 1}, {1, 2, 1}, {1, 1, 1, 1}};
    for (int t = 0; t < 60; ++t) {
        const auto& mult = shapes[fixtures::pick(rng, 0, shapes.size() - 1)];
        bool sym = t % 2 == 0;
        for (std::size_t j = 0; j < mult.size(); ++j) sym = sym && mult[j] == mult[mult.size() - 1 - j];
        const auto spec = fixtures::random_spectrum(rng, mult, sym);
        const ComplexMatrix d = fixtures::imaginary_diag(spec);
        const auto N = d.rows();
        std::vector<CalculusInstance> inst;
        for (int r = 0; r < 3; ++r) {
            RowVector v = fixtures::random_row(rng, N);
            Eigen::Index at = 0;
            bool any = false;
            for (std::size_t j = 0; j < mult.size(); ++j) {
                const auto len = static_cast<Eigen::Index>(mult[j]);
                if (fixtures::pick(rng, 0, 1) == 0) v.segment(at, len).setZero();
                else any = true;
                at += len;
            }
            if (!any) v(0) = 1.0;
            inst.push_back(scrambled(rng, fixtures::line(d, v)));
        }
        const auto& a = inst[0];
        const auto& b = inst[1];
        const auto& c = inst[2];
        CHECK(is_isomorphic_1d(a, a, tol));
        const bool ab = is_isomorphic_1d(a, b, tol);
        CHECK(ab == is_isomorphic_1d(b, a, tol));
        const bool bc = is_isomorphic_1d(b, c, tol);
        if (ab && bc) CHECK(is_isomorphic_1d(a, c, tol));

        // scaling Dhat and phi by nonzero reals keeps the answer
        CalculusInstance b2 = b;
        const double s = (t % 3 == 0 ? -1.0 : 1.0) * fixtures::uniform(rng, 0.5, 2.0);
        b2.rep.dhat[0] *= s;
        b2.phi[0] *= fixtures::uniform(rng, -2.0, -0.5);
        CHECK(is_isomorphic_1d(a, b2, tol) == ab);

        // witness soundness
        const auto w = construct_witness_1d(a, b, tol);
        CHECK(w.has_value() == ab);
        if (w) CHECK(check_isomorphism_witness(a, b, *w, tol));

        // oracle from the canonical patterns; a two-point trace-free spectrum is always symmetric
        std::vector<double> neg = spec;
        for (auto& x : neg) x = -x;
        std::sort(neg.begin(), neg.end(), std::greater<>());
        bool mirror = true;
        for (std::size_t j = 0; j < spec.size(); ++j) mirror = mirror && std::abs(neg[j] - spec[j]) < 1e-9;
        const auto pa = zero_pattern(canonical_diag_1d(a, tol), tol);
        const auto pb = zero_pattern(canonical_diag_1d(b, tol), tol);
        CHECK(ab == (pa == pb || (mirror && pa.reversed() == pb)));
    }
}

TEST_CASE("count_classes examples") {
    CHECK(count_classes(3, false) == 7);
    CHECK(count_classes(3, true) == 5);
    CHECK(count_classes(4, true) == 9);
    CHECK(count_classes(1, true) == 1);
    CHECK(count_classes(1, false) == 1);
    CHECK_THROWS_AS((void)count_classes(0, false), ArgumentError);
    CHECK_THROWS_AS((void)count_classes(64, false), ResourceError);
}

TEST_CASE("count_classes agrees with enumeration and orbit counting") {
    for (std::size_t k = 1; k <= 20; ++k) {
        for (const bool anti : {false, true}) {
            CAPTURE(k);
            CAPTURE(anti);
            const auto count = count_classes(k, anti);
            CHECK(count == burnside_count(k, anti));
            CHECK(enumerate_classes(k, anti).size() == count);
        }
    }
    for (std::size_t k = 21; k <= 62; ++k) {
        CHECK(count_classes(k, false) == burnside_count(k, false));
        CHECK(count_classes(k, true) == burnside_count(k, true));
    }
}

TEST_CASE("enumerate_classes examples") {
    CHECK(enumerate_classes(2, true) == std::vector<ZeroPattern>{pattern({0, 1}), pattern({1, 1})});
    CHECK(enumerate_classes(1, true) == std::vector<ZeroPattern>{pattern({1})});
    CHECK(enumerate_classes(1, false) == std::vector<ZeroPattern>{pattern({1})});
    const auto all = enumerate_classes(3, false);
    CHECK(all.size() == 7);
    CHECK(std::set<ZeroPattern>(all.begin(), all.end()).size() == 7);
    CHECK_THROWS_AS((void)enumerate_classes(0, true), ArgumentError);
    CHECK_THROWS_AS((void)enumerate_classes(kMaxEnumerationK + 1, true), ResourceError);
}

TEST_CASE("enumerate_classes representatives") {
    for (std::size_t k = 1; k <= 10; ++k) {
        const auto reps = enumerate_classes(k, true);
        CHECK(std::is_sorted(reps.begin(), reps.end()));
        std::set<ZeroPattern> seen;
        for (const auto& p : reps) {
            CHECK(p.any());
            CHECK(p.size() == k);
            CHECK(class_representative(p, true) == p);
            CHECK_FALSE(p.reversed() < p);
            CHECK(seen.insert(p).second);
            CHECK(seen.count(p.reversed()) == (p.is_palindrome() ? 1u : 0u));
        }
    }
    CHECK(class_representative(pattern({1, 0, 0}), true) == pattern({0, 0, 1}));
    CHECK(class_representative(pattern({1, 0, 0}), false) == pattern({1, 0, 0}));
}
