#include <doctest.h>

#include <cmath>

#include "realcalc/errors.hpp"
#include "realcalc/metric_conn.hpp"
#include "realcalc/projection.hpp"
#include "support/fixtures.hpp"

using namespace realcalc;
using fixtures::diag;
using fixtures::mat;
using fixtures::row;

namespace {
const Tolerance tol{};

ComplexMatrix coefficient_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return a - b; }

// Aligned abelian instance whose anchor v0 is a common eigenvector.
struct AlignedCase {
    CalculusInstance c;
    AlignedMetric h;
};

AlignedCase random_aligned(fixtures::Rng& rng, std::size_t n, std::size_t N) {
    const ComplexMatrix U = fixtures::random_unitary(rng, static_cast<Eigen::Index>(N));
    std::vector<ComplexMatrix> ds;
    for (std::size_t i = 0; i < n; ++i) {
        const auto spec = fixtures::random_spectrum(rng, std::vector<std::size_t>(N, 1), false);
        ds.push_back(U.adjoint() * fixtures::imaginary_diag(spec) * U);
    }
    const RowVector v0 = U.row(0);
    std::vector<double> alphas;
    for (std::size_t i = 0; i < n; ++i) alphas.push_back(fixtures::uniform(rng, 0.5, 2.0));
    RealMatrix m = RealMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) m(i, j) = m(j, i) = fixtures::uniform(rng, -0.3, 0.3);
    return {fixtures::aligned(ds, v0, alphas), AlignedMetric{m, v0, alphas}};
}
}  // namespace

TEST_CASE("projection_from_anchor examples") {
    CHECK(approx_equal(projection_from_anchor(row({1, 0})), unit_matrix(2, 2, 0, 0), tol));
    CHECK(approx_equal(projection_from_anchor(row({1, 1})), mat({{0.5, 0.5}, {0.5, 0.5}}), tol));
    const double s = 1.0 / std::sqrt(2.0);
    const RowVector v = row({s, kI * s});
    const ComplexMatrix p = projection_from_anchor(v);
    CHECK(approx_equal(p, mat({{0.5, 0.5 * kI}, {-0.5 * kI, 0.5}}), tol));
    CHECK(approx_equal(ComplexMatrix(v * p), ComplexMatrix(v), tol));
    // the transposed matrix annihilates v instead of fixing it
    CHECK(max_abs(ComplexMatrix(v * mat({{0.5, -0.5 * kI}, {0.5 * kI, 0.5}}))) < 1e-15);
    CHECK_THROWS_AS((void)projection_from_anchor(row({0, 0})), DegenerateError);

    fixtures::Rng rng(1);
    for (int t = 0; t < 10; ++t) {
        const RowVector w = fixtures::random_row(rng, 4);
        const ComplexMatrix q = projection_from_anchor(w);
        CHECK(approx_equal(ComplexMatrix(q * q), q, Tolerance{1e-12}));
        CHECK(is_hermitian(q, Tolerance{1e-12}));
        CHECK(approx_equal(ComplexMatrix(w * q), ComplexMatrix(w), Tolerance{1e-12}));
        CHECK(std::abs(q.trace() - 1.0) < 1e-12);
    }
}

TEST_CASE("build_split_realization examples") {
    SUBCASE("first row already v0") {
        const auto s = build_split_realization(fixtures::line(diag({kI, -kI}), row({1, 0})), tol);
        CHECK(approx_equal(s.A, ComplexMatrix::Identity(2, 2), tol));
        const ComplexMatrix pe = s.free.basis_images[0][0] * s.P.pblocks[0][0];
        CHECK(approx_equal(pe, unit_matrix(2, 2, 0, 0), tol));
    }
    SUBCASE("Gram-Schmidt completion") {
        const double r = 1.0 / std::sqrt(2.0);
        const auto s = build_split_realization(fixtures::line(diag({kI, -kI}), row({r, r})), tol);
        CHECK(is_unitary(s.A, tol));
        CHECK(approx_equal(ComplexMatrix(s.A.row(0)), ComplexMatrix(row({r, r})), tol));
        CHECK(std::abs(std::abs(s.A(1, 0)) - r) < 1e-15);
        CHECK(std::abs(s.A(1, 0) + s.A(1, 1)) < 1e-15);
        const ComplexMatrix pe = s.free.basis_images[0][0] * s.P.pblocks[0][0];
        CHECK(approx_equal(ComplexMatrix(pe.row(0)), ComplexMatrix(row({r, r})), tol));
        CHECK(max_abs(ComplexMatrix(pe.row(1))) < 1e-15);
    }
    SUBCASE("aligned n = 2") {
        const auto c = fixtures::aligned({diag({kI, -kI}), diag({2.0 * kI, -2.0 * kI})}, row({1, 0}), {2.0, 3.0});
        const auto s = build_split_realization(c, tol);
        REQUIRE(s.free.basis_images.size() == 2);
        CHECK(approx_equal(s.free.basis_images[0][0], ComplexMatrix(2.0 * s.A), tol));
        CHECK(approx_equal(s.free.basis_images[1][1], ComplexMatrix(3.0 * s.A), tol));
        CHECK(max_abs(s.free.basis_images[0][1]) == 0.0);
        CHECK(approx_equal(s.P.pblocks[0][0], unit_matrix(2, 2, 0, 0), tol));
        CHECK(approx_equal(s.P.pblocks[1][1], unit_matrix(2, 2, 0, 0), tol));
        CHECK(max_abs(s.P.pblocks[0][1]) == 0.0);
        CHECK(validate_free_calculus(s.free, tol).find("basis")->passed);
    }
    SUBCASE("unsupported") {
        CalculusInstance skew{fixtures::abelian_rep({diag({kI, -kI}), diag({2.0 * kI, -2.0 * kI})}), 2,
                              {row({1, 0, 1, 0}), row({0, 0, 1, 0})}};
        CHECK_THROWS_AS((void)build_split_realization(skew, tol), UnsupportedError);
    }
}

TEST_CASE("split realization reproduces the anchors") {
    fixtures::Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = fixtures::pick(rng, 1, 3);
        const std::size_t N = fixtures::pick(rng, 2, 4);
        const auto [c, h] = random_aligned(rng, n, N);
        const auto s = build_split_realization(c, tol);
        CHECK(s.P.idempotence_residual() < 1e-12);
        CHECK(is_unitary(s.A, Tolerance{1e-12}));
        const ComplexMatrix p = s.P.assemble();
        // Theta(phi(d_i)) = P(e^_i), both as elements and in coefficients
        for (std::size_t i = 0; i < n; ++i) {
            const ComplexMatrix rows = to_block_rows(c.phi[i], N);
            const ComplexMatrix elem = theta(s, rows);
            const ComplexMatrix e = s.free.basis_element(i);
            ComplexMatrix pe = ComplexMatrix::Zero(e.rows(), e.cols());
            for (std::size_t k = 0; k < n; ++k) {
                const auto Ni = static_cast<Eigen::Index>(N);
                pe.middleRows(static_cast<Eigen::Index>(k) * Ni, Ni) =
                    s.free.basis_images[k][k] * s.P.pblocks[k][i];
            }
            CHECK(approx_equal(elem, pe, Tolerance{1e-12}));
            const ComplexMatrix coeff = theta_coefficients(s, rows);
            CHECK(approx_equal(coeff, ComplexMatrix(p.middleCols(static_cast<Eigen::Index>(i * N), N)), Tolerance{1e-12}));
        }
        // the coefficients of Theta(v) recombine to Theta(v)
        const ComplexMatrix rows = fixtures::random_complex(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(N));
        const ComplexMatrix coeff = theta_coefficients(s, rows);
        ComplexMatrix recombined = ComplexMatrix::Zero(static_cast<Eigen::Index>(n * N), static_cast<Eigen::Index>(N));
        for (std::size_t k = 0; k < n; ++k) {
            const auto Ni = static_cast<Eigen::Index>(N);
            recombined.middleRows(static_cast<Eigen::Index>(k) * Ni, Ni) =
                s.free.basis_images[k][k] * coeff.middleRows(static_cast<Eigen::Index>(k) * Ni, Ni);
        }
        CHECK(approx_equal(recombined, theta(s, rows), Tolerance{1e-12}));
    }
}

TEST_CASE("is_orthogonal_projection examples") {
    const auto c = fixtures::aligned({diag({kI, -kI}), diag({2.0 * kI, -2.0 * kI})}, row({1, 0}), {1.0, 1.0});
    const auto s = build_split_realization(c, tol);
    RealMatrix m(2, 2);
    m << 1, 0.4, 0.4, -2;
    const FreeMetric lifted = lift_metric(s, AlignedMetric{m, row({1, 0}), {1.0, 1.0}});
    CHECK(is_orthogonal_projection(s.P, lifted, tol));

    const ProjectionSpec skew{{{mat({{1, 1}, {0, 0}})}}};
    CHECK(skew.idempotence_residual() < 1e-15);
    CHECK_FALSE(is_orthogonal_projection(skew, FreeMetric{{{ComplexMatrix::Identity(2, 2)}}}, tol));
    fixtures::Rng rng(3);
    const FreeMetric any{{{ComplexMatrix(fixtures::random_hermitian(rng, 3) + 4.0 * ComplexMatrix::Identity(3, 3))}}};
    CHECK(is_orthogonal_projection(ProjectionSpec::identity(1, 3), any, tol));
    CHECK_THROWS_AS((void)is_orthogonal_projection(ProjectionSpec::identity(2, 3), any, tol), ShapeError);
}

TEST_CASE("restrict_metric examples") {
    const auto c = fixtures::aligned({diag({kI, -kI}), diag({2.0 * kI, -2.0 * kI})}, row({1, 0}), {1.0, 1.0});
    const auto s = build_split_realization(c, tol);
    RealMatrix m(2, 2);
    m << 1, 0.4, 0.4, -2;
    const AlignedMetric h{m, row({1, 0}), {1.0, 1.0}};
    const auto r = restrict_metric(s.P, lift_metric(s, h), tol);
    const ComplexMatrix v0v0 = row({1, 0}).adjoint() * row({1, 0});
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            CHECK(approx_equal(r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], ComplexMatrix(m(i, j) * v0v0),
                               tol));

    fixtures::Rng rng(4);
    const ComplexMatrix g = fixtures::random_hermitian(rng, 3) + 4.0 * ComplexMatrix::Identity(3, 3);
    const auto same = restrict_metric(ProjectionSpec::identity(1, 3), FreeMetric{{{g}}}, tol);
    CHECK(approx_equal(same[0][0], g, tol));

    const auto line = build_split_realization(fixtures::line(diag({kI, 0, -kI}), row({0, 1, 0})), tol);
    const auto rx = restrict_metric(line.P, lift_metric(line, ScalarMetric{2.5}), tol);
    CHECK(approx_equal(rx[0][0], ComplexMatrix(2.5 * projection_from_anchor(row({0, 1, 0}))), tol));

    const ProjectionSpec skew{{{mat({{1, 1}, {0, 0}})}}};
    CHECK_THROWS_AS((void)restrict_metric(skew, FreeMetric{{{ComplexMatrix::Identity(2, 2)}}}, tol),
                    InvalidMetricError);
    // an orthogonal projection onto an isotropic subspace gives a degenerate restriction
    const ComplexMatrix z = ComplexMatrix::Zero(2, 2), id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix e11 = unit_matrix(2, 2, 0, 0);
    const ProjectionSpec first{{{id, z}, {z, z}}};
    const FreeMetric hyperbolic{{{z, id}, {id, z}}};
    CHECK_FALSE(is_orthogonal_projection(first, hyperbolic, tol));
    const ProjectionSpec half{{{e11, z}, {z, z}}};
    const FreeMetric degenerate_on_image{{{ComplexMatrix(unit_matrix(2, 2, 1, 1)), z}, {z, id}}};
    CHECK(is_orthogonal_projection(half, degenerate_on_image, tol));
    CHECK_THROWS_AS((void)restrict_metric(half, degenerate_on_image, tol), SingularMetricError);
}

TEST_CASE("metric_symmetry_condition examples") {
    const auto one = build_split_realization(fixtures::line(diag({kI, -kI}), row({1, 1})), tol);
    CHECK(metric_symmetry_condition(one.P, lift_metric(one, ScalarMetric{3.0}), tol));

    const auto c = fixtures::aligned({diag({kI, -kI}), diag({2.0 * kI, -2.0 * kI})}, row({1, 0}), {1.0, 2.0});
    const auto s = build_split_realization(c, tol);
    RealMatrix m(2, 2);
    m << 1, 0.4, 0.4, 2;
    CHECK(metric_symmetry_condition(s.P, lift_metric(s, AlignedMetric{m, row({1, 0}), {1.0, 2.0}}), tol));

    const ComplexMatrix id = ComplexMatrix::Identity(2, 2), z = ComplexMatrix::Zero(2, 2);
    const ProjectionSpec split{{{unit_matrix(2, 2, 0, 0), z}, {z, unit_matrix(2, 2, 1, 1)}}};
    CHECK_FALSE(metric_symmetry_condition(split, FreeMetric{{{id, id}, {id, id}}}, tol));

    const FreeMetric asym{{{id, ComplexMatrix(0.5 * kI * id)}, {ComplexMatrix(-0.5 * kI * id), id}}};
    CHECK_THROWS_AS((void)metric_symmetry_condition(ProjectionSpec::identity(2, 2), asym, tol), ArgumentError);
}

TEST_CASE("project_connection examples") {
    const auto c = fixtures::aligned({diag({kI, -kI}), diag({2.0 * kI, -2.0 * kI})}, row({1, 0}), {1.0, 1.0});
    const auto s = build_split_realization(c, tol);
    const Christoffel zero(2, 2);
    CHECK(project_connection(s.P, zero, s.free).max_abs() < 1e-15);

    fixtures::Rng rng(5);
    Christoffel g(2, 2);
    for (auto& b : g.gamma) b = fixtures::random_complex(rng, 2, 2);
    const auto same = project_connection(ProjectionSpec::identity(2, 2), g, s.free);
    for (std::size_t q = 0; q < g.gamma.size(); ++q) CHECK(approx_equal(same.gamma[q], g.gamma[q], tol));

    // the projected symbols satisfy nabla_i P(e^_j) = sum_k e^_k Gamma^k_ij
    const auto projected = project_connection(s.P, g, s.free);
    const auto nabla = projected_connection_map(s.P, g, s.free.rep);
    const HermitianModule pm = projected_module(s.P, FreeMetric{{{ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)},
                                                                 {ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2)}}});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            ComplexMatrix expected(4, 2);
            for (std::size_t k = 0; k < 2; ++k) expected.middleRows(static_cast<Eigen::Index>(2 * k), 2) = projected.at(k, i, j);
            // nabla of P(e^_j) then projected again
            CHECK(approx_equal(nabla(i, pm.generators[j]), ComplexMatrix(s.P.assemble() * expected), Tolerance{1e-12}));
        }
}

TEST_CASE("n = 1 projected connections have the form v0 (lambda - Dhat)") {
    fixtures::Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        const std::size_t N = fixtures::pick(rng, 2, 5);
        const ComplexMatrix d = fixtures::random_anti_hermitian(rng, static_cast<Eigen::Index>(N));
        const auto c = fixtures::line(d, fixtures::random_row(rng, static_cast<Eigen::Index>(N)));
        const auto s = build_split_realization(c, tol);
        Christoffel g(1, N);
        g.gamma[0] = fixtures::random_complex(rng, static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
        const auto nabla = projected_connection_map(s.P, g, c.rep);
        const RowVector& v0 = c.phi[0];
        const ComplexMatrix got = nabla(0, theta_coefficients(s, v0));
        // fit lambda in got = lambda T(v0) - T(v0 Dhat) and check the residual
        const ComplexMatrix tv = theta_coefficients(s, v0);
        const ComplexMatrix td = theta_coefficients(s, RowVector(v0 * d));
        const ComplexMatrix target = got + td;
        const Complex lambda = (tv.adjoint() * target).trace() / (tv.adjoint() * tv).trace();
        CHECK(max_abs(coefficient_diff(got, ComplexMatrix(lambda * tv - td))) < 1e-10 * (1.0 + max_abs(got)));
        // and lambda = v0 Gamma v0^dagger / |v0|^2 + v0 Dhat v0^dagger / |v0|^2 in coefficients of the unit anchor
        const RowVector u = s.v0;
        const Complex expected = (u * g.gamma[0] * u.adjoint())(0, 0) + (v0 * d * v0.adjoint())(0, 0) / v0.squaredNorm();
        CHECK(std::abs(lambda - expected) < 1e-10);
    }
}

TEST_CASE("projected metric transport and agreement with the closed form") {
    fixtures::Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = fixtures::pick(rng, 1, 3);
        const std::size_t N = fixtures::pick(rng, n + 1, 4);
        const auto [c, h] = random_aligned(rng, n, N);
        const auto s = build_split_realization(c, tol);
        const FreeMetric lifted = lift_metric(s, h);
        REQUIRE(is_orthogonal_projection(s.P, lifted, tol));
        CHECK(metric_symmetry_condition(s.P, lifted, tol));
        const auto gamma = christoffel_free(s.free, lifted, tol);
        CHECK(verify_pseudo_riemannian(s.free, lifted, gamma, tol).passed());

        const auto projected = project_connection(s.P, gamma, s.free);
        CHECK(projected.max_abs() < 1e-10);

        const HermitianModule pm = projected_module(s.P, lifted);
        const auto nabla = projected_connection_map(s.P, gamma, s.free.rep);
        const auto report = verify_pseudo_riemannian(s.free.rep, pm, nabla, tol, {16, static_cast<std::uint64_t>(t)});
        CHECK(report.find("metric")->passed);

        const auto lc = lc_abelian(c, h, tol);
        for (int k = 0; k < 5; ++k) {
            const ComplexMatrix rows =
                fixtures::random_complex(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(N));
            for (std::size_t i = 0; i < n; ++i) {
                const ComplexMatrix lhs = nabla(i, theta_coefficients(s, rows));
                const ComplexMatrix rhs = theta_coefficients(s, lc.apply(i, rows));
                CHECK(approx_equal(lhs, rhs, Tolerance{1e-10}));
            }
        }
        // restricted metric agrees with h on the anchors
        const auto r = restrict_metric(s.P, lifted, tol);
        const HermitianModule direct = hermitian_module(c, h);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const ComplexMatrix hij = direct.form(direct.generators[i], direct.generators[j]);
                CHECK(approx_equal(r[i][j], hij, Tolerance{1e-10}));
            }
    }
}
