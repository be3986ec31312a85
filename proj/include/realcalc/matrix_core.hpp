#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace realcalc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RowVector = Eigen::RowVectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Absolute comparison threshold, scaled by the magnitude of the data being compared.
struct Tolerance {
    double eps = 1e-9;

    /// eps * max(1, magnitude)
    [[nodiscard]] double threshold(double magnitude = 0.0) const;
};

/// Throws ArgumentError unless tol.eps > 0.
void require_valid(const Tolerance& tol);

// --- elementary helpers ------------------------------------------------------

[[nodiscard]] double max_abs(const ComplexMatrix& a);
[[nodiscard]] double max_abs(const RealMatrix& a);

/// max |a - b| <= tol.threshold(max(max_abs(a), max_abs(b))). Shapes must agree.
[[nodiscard]] bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol);
[[nodiscard]] bool exactly_equal(const ComplexMatrix& a, const ComplexMatrix& b);

[[nodiscard]] bool is_square(const ComplexMatrix& a);
[[nodiscard]] bool is_anti_hermitian(const ComplexMatrix& a, const Tolerance& tol);
[[nodiscard]] bool is_hermitian(const ComplexMatrix& a, const Tolerance& tol);
[[nodiscard]] bool is_unitary(const ComplexMatrix& a, const Tolerance& tol);

/// Unit matrix with a single 1 at (row, col), zero-based.
[[nodiscard]] ComplexMatrix unit_matrix(std::size_t rows, std::size_t cols, std::size_t row, std::size_t col);

/// Number of singular values above tol.threshold(largest singular value).
[[nodiscard]] std::size_t numerical_rank(const ComplexMatrix& a, const Tolerance& tol);

/// Smallest singular value divided by the largest one (0 for the zero matrix).
[[nodiscard]] double inverse_condition(const ComplexMatrix& a);

/// Square and inverse_condition(a) > tol.eps.
[[nodiscard]] bool is_invertible(const ComplexMatrix& a, const Tolerance& tol);

// --- algebra -----------------------------------------------------------------

/// AB - BA. Throws ShapeError unless both are square of the same size.
[[nodiscard]] ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
[[nodiscard]] ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Block-diagonal matrix with the given square blocks in order.
[[nodiscard]] ComplexMatrix direct_sum(std::span<const ComplexMatrix> blocks);

/// Unitary matrix whose first row is row / |row|, completed by Gram-Schmidt
/// over the standard basis (candidates nearly parallel to the span so far are skipped).
[[nodiscard]] ComplexMatrix complete_unitary(const RowVector& row);

// --- spectra -----------------------------------------------------------------

struct SpectrumBlock {
    Complex eigenvalue;
    std::size_t multiplicity = 0;
};

/// Clustered spectrum of an anti-hermitian matrix. Blocks are ordered by strictly
/// descending imaginary part; column range [offset(j), offset(j) + multiplicity) of
/// the unitary diagonalizer spans the eigenspace of block j.
struct SpectrumBlocks {
    std::vector<SpectrumBlock> blocks;
    ComplexMatrix diagonalizer;

    [[nodiscard]] std::size_t size() const { return blocks.size(); }
    [[nodiscard]] std::size_t dimension() const;
    [[nodiscard]] std::size_t offset(std::size_t block) const;
    /// The canonical form (+)_j lambda_j I_{n_j}.
    [[nodiscard]] ComplexMatrix block_diagonal() const;
    /// Eigenvalue multiset as a list of length dimension(), descending imaginary part.
    [[nodiscard]] std::vector<double> imaginary_parts() const;
};

/// Diagonalizes an anti-hermitian matrix. Eigenvalues whose imaginary parts differ by
/// at most tol.threshold(spectral radius) are merged into one block; real parts are
/// set to exactly zero. Throws ShapeError for non-square input and
/// NotAntiHermitianError when max|D + D^dagger| exceeds tol.threshold(max_abs(D)).
[[nodiscard]] SpectrumBlocks eig_antihermitian_sorted(const ComplexMatrix& d, const Tolerance& tol = {});

}  // namespace realcalc
