#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "realcalc/calculus.hpp"
#include "realcalc/lie_rep.hpp"
#include "realcalc/matrix_core.hpp"
#include "realcalc/report.hpp"

namespace realcalc {

// --- metrics -----------------------------------------------------------------

/// h_x(u, v) = x u^dagger v on C^N.
struct ScalarMetric {
    double x = 1.0;
};

/// Metric on (C^N)^n with h(e_i, e_j) = mtilde(i, j) v0^dagger v0 for the aligned
/// generators e_i = (0, ..., alphas[i] v0, ..., 0).
struct AlignedMetric {
    RealMatrix mtilde;
    RowVector v0;
    std::vector<double> alphas;
};

/// Metric on the free module Mat(N)^n given by hblocks[i][j] = h(e^_i, e^_j).
struct FreeMetric {
    std::vector<std::vector<ComplexMatrix>> hblocks;

    [[nodiscard]] std::size_t n() const { return hblocks.size(); }
    /// (Nn) x (Nn) matrix H with block (i, j) = hblocks[i][j].
    [[nodiscard]] ComplexMatrix assemble() const;
};

using Metric = std::variant<ScalarMetric, AlignedMetric, FreeMetric>;

// --- connections -------------------------------------------------------------

/// nabla v0 = v0 (lambda 1 + [Dhat, p]) on C^N.
struct LambdaScalar {
    Complex lambda;
};

/// nabla_i e_j = sum_k e_k lambda^k_ij + e_j [Dhat_i, p] on aligned (C^N)^n.
struct LambdaTensor {
    std::size_t n = 0;
    std::vector<Complex> values;  ///< lambda^k_ij at (k * n + i) * n + j

    explicit LambdaTensor(std::size_t dim = 0) : n(dim), values(dim * dim * dim) {}
    [[nodiscard]] Complex& at(std::size_t k, std::size_t i, std::size_t j) { return values[(k * n + i) * n + j]; }
    [[nodiscard]] Complex at(std::size_t k, std::size_t i, std::size_t j) const { return values[(k * n + i) * n + j]; }
};

/// nabla_i e^_j = sum_k e^_k Gamma^k_ij on the free module.
struct Christoffel {
    std::size_t n = 0;
    std::size_t N = 0;
    std::vector<ComplexMatrix> gamma;  ///< Gamma^k_ij at (k * n + i) * n + j

    Christoffel() = default;
    Christoffel(std::size_t dim, std::size_t size);
    [[nodiscard]] ComplexMatrix& at(std::size_t k, std::size_t i, std::size_t j) { return gamma[(k * n + i) * n + j]; }
    [[nodiscard]] const ComplexMatrix& at(std::size_t k, std::size_t i, std::size_t j) const {
        return gamma[(k * n + i) * n + j];
    }
    /// (Nn) x (Nn) matrix with block (k, j) = Gamma^k_ij.
    [[nodiscard]] ComplexMatrix slice(std::size_t i) const;
    [[nodiscard]] double max_abs() const;
};

using ConnectionSpec = std::variant<LambdaScalar, LambdaTensor, Christoffel>;

/// Covariant derivative (i, v) -> nabla_i v on module elements in block-row form.
using ConnectionMap = std::function<ComplexMatrix(std::size_t, const ComplexMatrix&)>;

// --- modules with a hermitian form -------------------------------------------

/// A module whose elements are R x N matrices acted on from the right, with
/// h(u, v) = u^dagger G v. For (C^N)^m the rows are the slots; for the free module
/// the rows are the stacked coefficient blocks with respect to e^_1, ..., e^_n.
struct HermitianModule {
    ComplexMatrix gram;
    std::vector<ComplexMatrix> generators;  ///< phi(d_i)

    [[nodiscard]] ComplexMatrix form(const ComplexMatrix& u, const ComplexMatrix& v) const {
        return u.adjoint() * gram * v;
    }
};

[[nodiscard]] HermitianModule hermitian_module(const CalculusInstance& c, const ScalarMetric& h);
[[nodiscard]] HermitianModule hermitian_module(const CalculusInstance& c, const AlignedMetric& h);
[[nodiscard]] HermitianModule hermitian_module(const FreeCalculusInstance& f, const FreeMetric& h);

// --- metric operations -------------------------------------------------------

/// x u^dagger v.
[[nodiscard]] ComplexMatrix eval_scalar_metric(const ScalarMetric& h, const RowVector& u, const RowVector& v);

/// Returns x when H = x E_11 with x real and nonzero. Throws InvalidMetricError for any
/// other shape and DegenerateError when x vanishes or is not real.
[[nodiscard]] double validate_metric_on_CN(const ComplexMatrix& H, const Tolerance& tol = {});

/// Anchor data of an aligned module: phi(d_i) has alphas[i] v0 in slot i and zeros
/// elsewhere, with |v0| = 1 and alphas[0] > 0.
struct Alignment {
    RowVector v0;
    std::vector<double> alphas;
};

/// Empty unless module_rank == dim g and the anchors are aligned.
[[nodiscard]] std::optional<Alignment> detect_alignment(const CalculusInstance& c, const Tolerance& tol = {});

/// Metric invariants plus hermiticity of h(phi(d_i), phi(d_j)).
[[nodiscard]] bool is_real_metric_calculus(const CalculusInstance& c, const ScalarMetric& h,
                                           const Tolerance& tol = {});
[[nodiscard]] bool is_real_metric_calculus(const CalculusInstance& c, const AlignedMetric& h,
                                           const Tolerance& tol = {});
[[nodiscard]] bool is_real_metric_calculus(const FreeCalculusInstance& f, const FreeMetric& h,
                                           const Tolerance& tol = {});

// --- connections on C^N ------------------------------------------------------

/// nabla(v0 B) = v0 (lambda 1 + [Dhat, p]) B + v0 [Dhat, B] with v0 = phi(d).
[[nodiscard]] RowVector connection_on_CN(const CalculusInstance& c, Complex lambda, const RowVector& v);
[[nodiscard]] ConnectionMap connection_on_CN_map(const CalculusInstance& c, Complex lambda);

/// |v0 Dhat (1 - p)|, zero iff v0 is an eigenvector of Dhat.
[[nodiscard]] double eigenvector_residual_1d(const CalculusInstance& c);

/// Eigenvalue (v0 Dhat v0^dagger) / |v0|^2 when v0 is an eigenvector of Dhat.
[[nodiscard]] std::optional<Complex> lc_exists_1d(const CalculusInstance& c, const Tolerance& tol = {});

/// nabla v = lambda v - v Dhat.
struct LeviCivita1D {
    Complex lambda;
    ComplexMatrix dhat;

    [[nodiscard]] RowVector apply(const RowVector& v) const { return lambda * v - v * dhat; }
    [[nodiscard]] ConnectionMap map() const;
};

/// Throws NoLeviCivitaError when v0 is not an eigenvector of Dhat.
[[nodiscard]] LeviCivita1D lc_connection_1d(const CalculusInstance& c, const Tolerance& tol = {});

// --- aligned (C^N)^n over abelian g ------------------------------------------

[[nodiscard]] ConnectionMap lambda_tensor_map(const CalculusInstance& c, const Alignment& a, const LambdaTensor& t);

/// Levi-Civita connection nabla_i v = lambda_i v - v Dhat_i with the tensor part
/// obtained from the Koszul formula.
struct AbelianLeviCivita {
    LambdaTensor tensor;
    std::vector<Complex> eigenvalues;
    std::vector<ComplexMatrix> dhat;

    [[nodiscard]] ComplexMatrix apply(std::size_t i, const ComplexMatrix& rows) const;
    [[nodiscard]] ConnectionMap map() const;
};

/// Throws UnsupportedError for non-abelian g or non-aligned anchors, InvalidMetricError
/// for an invalid metric and NoLeviCivitaError when v0 is not a common eigenvector.
[[nodiscard]] AbelianLeviCivita lc_abelian(const CalculusInstance& c, const AlignedMetric& h,
                                           const Tolerance& tol = {});

// --- free modules --------------------------------------------------------------

/// Right-hand side of the Koszul formula for 2 h(nabla_i e_j, e_k).
[[nodiscard]] ComplexMatrix koszul_rhs(const MatrixRep& rep, const HermitianModule& m, std::size_t i,
                                       std::size_t j, std::size_t k);
[[nodiscard]] ComplexMatrix koszul_rhs(const FreeCalculusInstance& f, const FreeMetric& h, std::size_t i,
                                       std::size_t j, std::size_t k);

/// Unique Levi-Civita Christoffel symbols. Throws ShapeError on inconsistent input,
/// SingularMetricError when H is not invertible and ArgumentError when (f, h) is not a
/// free real metric calculus.
[[nodiscard]] Christoffel christoffel_free(const FreeCalculusInstance& f, const FreeMetric& h,
                                           const Tolerance& tol = {});

/// nabla_i on coefficient stacks: block k of the result is sum_j Gamma^k_ij a_j + [Dhat_i, a_k].
[[nodiscard]] ConnectionMap christoffel_map(const MatrixRep& rep, const Christoffel& gamma);

// --- verification --------------------------------------------------------------

struct VerifyOptions {
    std::size_t random_elements = 16;
    std::uint64_t seed = 0;
};

/// Checks "real_metric", "symmetry", "metric", "torsion" and "leibniz". Residuals are
/// maximum absolute deviations; each check passes iff its residual is within
/// tol.threshold of the magnitude of the compared terms.
[[nodiscard]] ValidationReport verify_pseudo_riemannian(const MatrixRep& rep, const HermitianModule& m,
                                                        const ConnectionMap& nabla, const Tolerance& tol = {},
                                                        const VerifyOptions& opts = {});
[[nodiscard]] ValidationReport verify_pseudo_riemannian(const CalculusInstance& c, const ScalarMetric& h,
                                                        const ConnectionMap& nabla, const Tolerance& tol = {},
                                                        const VerifyOptions& opts = {});
[[nodiscard]] ValidationReport verify_pseudo_riemannian(const CalculusInstance& c, const AlignedMetric& h,
                                                        const ConnectionMap& nabla, const Tolerance& tol = {},
                                                        const VerifyOptions& opts = {});
[[nodiscard]] ValidationReport verify_pseudo_riemannian(const FreeCalculusInstance& f, const FreeMetric& h,
                                                        const Christoffel& gamma, const Tolerance& tol = {},
                                                        const VerifyOptions& opts = {});

}  // namespace realcalc
