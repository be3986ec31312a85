#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "realcalc/matrix_core.hpp"
#include "realcalc/report.hpp"

namespace realcalc {

/// Real Lie algebra of dimension n given by structure constants
/// [d_i, d_j] = sum_k c_{ij}^k d_k.
class LieAlgebraSpec {
public:
    LieAlgebraSpec() = default;
    /// Abelian algebra of the given dimension.
    explicit LieAlgebraSpec(std::size_t dim);
    /// `constants` is c flattened as c[(i * dim + j) * dim + k]; size must be dim^3.
    LieAlgebraSpec(std::size_t dim, std::vector<double> constants);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] double constant(std::size_t i, std::size_t j, std::size_t k) const;
    void set_constant(std::size_t i, std::size_t j, std::size_t k, double value);
    [[nodiscard]] const std::vector<double>& constants() const { return constants_; }

    /// Coefficients of [d_i, d_j] in the basis.
    [[nodiscard]] std::vector<double> bracket(std::size_t i, std::size_t j) const;
    /// Bracket of two general elements given by coefficient vectors.
    [[nodiscard]] std::vector<double> bracket(std::span<const double> x, std::span<const double> y) const;

    [[nodiscard]] bool is_abelian(double eps = 0.0) const;
    [[nodiscard]] double antisymmetry_residual() const;
    [[nodiscard]] double jacobi_residual() const;

    /// True iff psi (column i = image of d_i) is invertible and preserves brackets.
    [[nodiscard]] bool is_automorphism(const RealMatrix& psi, const Tolerance& tol) const;
    [[nodiscard]] double automorphism_residual(const RealMatrix& psi) const;

    [[nodiscard]] bool approx_equal(const LieAlgebraSpec& other, const Tolerance& tol) const;

private:
    std::size_t dim_ = 0;
    std::vector<double> constants_;
};

/// Lie algebra together with trace-free anti-hermitian matrices Dhat[i] = D^(d_i)
/// representing d_i as the inner derivation [Dhat[i], .] of Mat(N).
struct MatrixRep {
    LieAlgebraSpec lie;
    std::size_t N = 0;
    std::vector<ComplexMatrix> dhat;

    [[nodiscard]] std::size_t dim() const { return lie.dim(); }
    /// sum_i coeffs[i] * Dhat[i]
    [[nodiscard]] ComplexMatrix element(std::span<const double> coeffs) const;
};

/// Throws ShapeError when the number or size of matrices does not match dim and N.
void require_consistent_shapes(const MatrixRep& rep);

/// Checks trace-free, anti-hermitian, bracket compatibility, faithfulness and the
/// structure constants themselves. Failures are report entries; shape
/// inconsistencies throw ShapeError.
[[nodiscard]] ValidationReport validate_rep(const MatrixRep& rep, const Tolerance& tol = {});

/// [sum_i coeffs[i] Dhat[i], A]: the hermitian derivation of the Lie element applied to A.
[[nodiscard]] ComplexMatrix derivation_apply(const MatrixRep& rep, std::span<const double> coeffs,
                                             const ComplexMatrix& a);

/// Derivation of the i-th basis element applied to A.
[[nodiscard]] ComplexMatrix derivation_apply(const MatrixRep& rep, std::size_t i, const ComplexMatrix& a);

/// Result of removing the trace part from each generator.
struct TraceCorrection {
    MatrixRep rep;
    std::vector<Complex> removed;  ///< trace(Dhat[i]) / N subtracted from generator i
};

/// Subtracts (trace / N) * identity from every generator. The derivations are unchanged.
[[nodiscard]] TraceCorrection remove_trace(const MatrixRep& rep);

}  // namespace realcalc
