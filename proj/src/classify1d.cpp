#include "realcalc/classify1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "realcalc/errors.hpp"

namespace realcalc {

ZeroPattern ZeroPattern::reversed() const {
    return ZeroPattern{{bits.rbegin(), bits.rend()}};
}

bool ZeroPattern::is_palindrome() const {
    return std::equal(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(bits.size() / 2), bits.rbegin());
}

bool ZeroPattern::any() const {
    return std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
}

std::string ZeroPattern::to_string() const {
    std::ostringstream out;
    out << '(';
    for (std::size_t j = 0; j < bits.size(); ++j) out << (j ? "," : "") << int(bits[j]);
    out << ')';
    return out.str();
}

bool QuasiEquivalence1D::has_positive() const {
    return std::any_of(mu_candidates.begin(), mu_candidates.end(), [](double mu) { return mu > 0.0; });
}

bool QuasiEquivalence1D::has_negative() const {
    return std::any_of(mu_candidates.begin(), mu_candidates.end(), [](double mu) { return mu < 0.0; });
}

namespace {

void require_trace_free(const ComplexMatrix& d, const Tolerance& tol) {
    if (!is_square(d)) throw ShapeError("expected a square matrix");
    if (std::abs(d.trace()) > tol.threshold(max_abs(d))) {
        throw ArgumentError("matrix representation must be trace-free");
    }
}

void require_1d_line(const CalculusInstance& c) {
    require_consistent_shapes(c);
    if (c.dim() != 1 || c.module_rank != 1) {
        throw UnsupportedError("requires dim g = 1 and module C^N");
    }
}

}  // namespace

bool anti_selfsimilar(const SpectrumBlocks& spectrum, const Tolerance& tol) {
    const auto& b = spectrum.blocks;
    double radius = 0.0;
    for (const auto& blk : b) radius = std::max(radius, std::abs(blk.eigenvalue));
    const double thr = tol.threshold(radius);
    const std::size_t k = b.size();
    for (std::size_t j = 0; j < k; ++j) {
        const auto& mirror = b[k - 1 - j];
        if (b[j].multiplicity != mirror.multiplicity) return false;
        if (std::abs(b[j].eigenvalue + mirror.eigenvalue) > thr) return false;
    }
    return true;
}

bool anti_selfsimilar(const ComplexMatrix& d, const Tolerance& tol) {
    require_trace_free(d, tol);
    return anti_selfsimilar(eig_antihermitian_sorted(d, tol), tol);
}

ZeroPattern zero_pattern(const RowVector& v, const SpectrumBlocks& spectrum, const Tolerance& tol) {
    if (v.size() != static_cast<Eigen::Index>(spectrum.dimension())) {
        throw ShapeError("zero_pattern: vector length does not match the spectrum");
    }
    const double thr = tol.eps * (1.0 + v.norm());
    ZeroPattern out;
    Eigen::Index at = 0;
    for (const auto& blk : spectrum.blocks) {
        const auto len = static_cast<Eigen::Index>(blk.multiplicity);
        out.bits.push_back(v.segment(at, len).norm() > thr ? 1 : 0);
        at += len;
    }
    return out;
}

ZeroPattern zero_pattern(const CalculusInstance& c, const Tolerance& tol) {
    require_1d_line(c);
    const ComplexMatrix& d = c.rep.dhat[0];
    const double scale = max_abs(d);
    const double thr = tol.threshold(scale);
    ComplexMatrix off = d;
    off.diagonal().setZero();
    if (max_abs(off) > thr) throw NonCanonicalError("zero_pattern: Dhat is not diagonal; canonicalize first");
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        if (std::abs(d(i, i).real()) > thr) throw NonCanonicalError("zero_pattern: eigenvalues must be imaginary");
        if (i > 0 && d(i, i).imag() > d(i - 1, i - 1).imag() + thr) {
            throw NonCanonicalError("zero_pattern: eigenvalues must be in descending order; canonicalize first");
        }
    }
    // Block structure of an already diagonal matrix: the identity diagonalizer is kept.
    SpectrumBlocks spectrum;
    spectrum.diagonalizer = ComplexMatrix::Identity(d.rows(), d.cols());
    double radius = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) radius = std::max(radius, std::abs(d(i, i).imag()));
    const double merge = tol.threshold(radius);
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        const double mu = d(i, i).imag();
        if (i > 0 && d(i - 1, i - 1).imag() - mu <= merge) {
            ++spectrum.blocks.back().multiplicity;
        } else {
            spectrum.blocks.push_back({Complex{0.0, mu}, 1});
        }
    }
    return zero_pattern(c.phi[0], spectrum, tol);
}

QuasiEquivalence1D quasi_equivalent_1d(const ComplexMatrix& da, const ComplexMatrix& db, const Tolerance& tol) {
    require_valid(tol);
    if (!is_square(da) || !is_square(db) || da.rows() != db.rows()) {
        throw ShapeError("quasi_equivalent_1d: matrices must be square of equal size");
    }
    require_trace_free(da, tol);
    require_trace_free(db, tol);
    if (max_abs(da) <= tol.threshold() || max_abs(db) <= tol.threshold()) {
        throw DegenerateError("quasi_equivalent_1d: zero representation is not faithful");
    }
    const auto a = eig_antihermitian_sorted(da, tol).imaginary_parts();
    const auto b = eig_antihermitian_sorted(db, tol).imaginary_parts();
    const std::size_t n = a.size();

    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(a[i]) > std::abs(a[pivot])) pivot = i;
    }
    double bmax = 0.0;
    for (double x : b) bmax = std::max(bmax, std::abs(x));
    const double thr = tol.threshold(bmax);

    QuasiEquivalence1D out;
    // mu > 0 keeps the descending order; mu < 0 reverses it.
    for (const bool flip : {true, false}) {
        const double mu = (flip ? b[n - 1 - pivot] : b[pivot]) / a[pivot];
        if (flip ? !(mu < 0.0) : !(mu > 0.0)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const double expected = mu * a[flip ? n - 1 - i : i];
            ok = std::abs(b[i] - expected) <= thr;
        }
        if (ok) out.mu_candidates.push_back(mu);
    }
    return out;
}

bool is_isomorphic_1d(const CalculusInstance& a, const CalculusInstance& b, const Tolerance& tol) {
    require_1d_line(a);
    require_1d_line(b);
    if (a.N() != b.N()) throw ShapeError("is_isomorphic_1d: instances must have the same N");
    const auto ca = canonicalize_1d(a, tol);
    const auto cb = canonicalize_1d(b, tol);
    const auto qe = quasi_equivalent_1d(ca.instance.rep.dhat[0], cb.instance.rep.dhat[0], tol);
    if (qe.empty()) return false;
    const auto pa = zero_pattern(ca.instance, tol);
    const auto pb = zero_pattern(cb.instance, tol);
    // A positive mu maps block j to block j; a negative mu maps block j to block k+1-j.
    if (qe.has_positive() && pa == pb) return true;
    if (qe.has_negative() && pa.reversed() == pb) return true;
    return false;
}

std::uint64_t count_classes(std::size_t k, bool anti) {
    if (k == 0) throw ArgumentError("count_classes: k must be at least 1");
    if (k > 63) throw ResourceError("count_classes: k too large for 64-bit counts");
    const auto pow2 = [](std::size_t e) { return std::uint64_t{1} << e; };
    if (!anti) return pow2(k) - 1;
    if (k % 2 == 1) {
        const std::size_t m = (k - 1) / 2;
        return pow2(m) * (1 + pow2(m)) - 1;
    }
    const std::size_t m = k / 2;
    return pow2(m - 1) * (1 + pow2(m)) - 1;
}

ZeroPattern class_representative(const ZeroPattern& pattern, bool anti) {
    if (!anti) return pattern;
    return std::min(pattern, pattern.reversed());
}

std::vector<ZeroPattern> enumerate_classes(std::size_t k, bool anti) {
    if (k == 0) throw ArgumentError("enumerate_classes: k must be at least 1");
    if (k > kMaxEnumerationK) throw ResourceError("enumerate_classes: k exceeds the enumeration bound");
    std::vector<ZeroPattern> out;
    const std::uint64_t total = std::uint64_t{1} << k;
    ZeroPattern p{std::vector<std::uint8_t>(k)};
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        // bit j of the pattern is bit (k-1-j) of the mask so that mask order is lexicographic
        for (std::size_t j = 0; j < k; ++j) p.bits[j] = static_cast<std::uint8_t>((mask >> (k - 1 - j)) & 1U);
        if (!anti || p <= p.reversed()) out.push_back(p);
    }
    return out;
}

}  // namespace realcalc
