#pragma once

#include <cstddef>
#include <vector>

#include "realcalc/calculus.hpp"
#include "realcalc/matrix_core.hpp"
#include "realcalc/metric_conn.hpp"

namespace realcalc {

/// Projection P on Mat(N)^n with P(e^_j) = sum_k e^_k p^k_j; pblocks[k][j] = p^k_j.
struct ProjectionSpec {
    std::vector<std::vector<ComplexMatrix>> pblocks;

    [[nodiscard]] std::size_t n() const { return pblocks.size(); }
    [[nodiscard]] std::size_t N() const;
    /// (Nn) x (Nn) coefficient matrix with block (k, j) = p^k_j.
    [[nodiscard]] ComplexMatrix assemble() const;
    /// max |sum_l p^k_l p^l_j - p^k_j|
    [[nodiscard]] double idempotence_residual() const;

    [[nodiscard]] static ProjectionSpec identity(std::size_t n, std::size_t N);
    /// p^k_j = delta^k_j p
    [[nodiscard]] static ProjectionSpec diagonal(std::size_t n, const ComplexMatrix& p);
};

/// v0^dagger v0 / |v0|^2. Throws DegenerateError for v0 = 0.
[[nodiscard]] ComplexMatrix projection_from_anchor(const RowVector& v0);

/// Free calculus with e^_i = (0, ..., alphas[i] A, ..., 0), A unitary with first row
/// v0, and P = diag(p, ..., p). Theta sends (v_1, ..., v_n) to the element whose
/// slot k has first row v_k and zeros elsewhere, so Theta(phi(d_i)) = P(e^_i).
struct SplitRealization {
    FreeCalculusInstance free;
    ProjectionSpec P;
    ComplexMatrix A;
    RowVector v0;
    std::vector<double> alphas;
};

/// Supports module C^N over a 1-dimensional g and aligned (C^N)^n; throws
/// UnsupportedError otherwise.
[[nodiscard]] SplitRealization build_split_realization(const CalculusInstance& c, const Tolerance& tol = {});

/// Theta(v) as an element of Mat(N)^n, stacked (Nn) x N. `rows` is n x N.
[[nodiscard]] ComplexMatrix theta(const SplitRealization& s, const ComplexMatrix& rows);
/// Coefficients a with Theta(v) = sum_k e^_k a_k, stacked (Nn) x N.
[[nodiscard]] ComplexMatrix theta_coefficients(const SplitRealization& s, const ComplexMatrix& rows);

/// Free metric whose restriction to P(A^n) corresponds to h under Theta.
[[nodiscard]] FreeMetric lift_metric(const SplitRealization& s, const ScalarMetric& h);
[[nodiscard]] FreeMetric lift_metric(const SplitRealization& s, const AlignedMetric& h);

/// (p^k_i)^dagger h_kj = h_ik p^k_j for all i, j.
[[nodiscard]] bool is_orthogonal_projection(const ProjectionSpec& P, const FreeMetric& h, const Tolerance& tol = {});

/// Components h(P(e^_i), P(e^_j)) = sum_k h_ik p^k_j. Throws InvalidMetricError for a
/// non-orthogonal P and SingularMetricError when the restriction is degenerate.
[[nodiscard]] std::vector<std::vector<ComplexMatrix>> restrict_metric(const ProjectionSpec& P, const FreeMetric& h,
                                                                      const Tolerance& tol = {});

/// h_jk p^k_i = h_ik p^k_j for all i, j. Throws ArgumentError unless h_ij = h_ji.
[[nodiscard]] bool metric_symmetry_condition(const ProjectionSpec& P, const FreeMetric& h, const Tolerance& tol = {});

/// Christoffel symbols of P o nabla~ for the generators P(e^_j):
/// Gamma^k_ij = sum_l Gamma~^k_il p^l_j + d_i(p^k_j).
[[nodiscard]] Christoffel project_connection(const ProjectionSpec& P, const Christoffel& gamma,
                                             const FreeCalculusInstance& f);

/// P o nabla~ on coefficient stacks of elements of P(A^n).
[[nodiscard]] ConnectionMap projected_connection_map(const ProjectionSpec& P, const Christoffel& gamma,
                                                     const MatrixRep& rep);

/// P(A^n) in coefficient form: generators P(e^_j) and the ambient metric.
[[nodiscard]] HermitianModule projected_module(const ProjectionSpec& P, const FreeMetric& h);

}  // namespace realcalc
