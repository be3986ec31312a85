#pragma once

#include <cstddef>
#include <vector>

#include "realcalc/lie_rep.hpp"
#include "realcalc/matrix_core.hpp"
#include "realcalc/report.hpp"

namespace realcalc {

/// Real calculus (Mat(N), g_D, (C^N)^m, phi). Module elements are row vectors of
/// length N*m made of m blocks of length N; phi[i] is the image of the i-th basis
/// element of g.
struct CalculusInstance {
    MatrixRep rep;
    std::size_t module_rank = 0;
    std::vector<RowVector> phi;

    [[nodiscard]] std::size_t N() const { return rep.N; }
    [[nodiscard]] std::size_t dim() const { return rep.dim(); }
};

/// Free real calculus (Mat(N), g_D, Mat(N)^n, phi~) with phi~(d_i) = basis_images[i],
/// an element of Mat(N)^n given as its n blocks.
struct FreeCalculusInstance {
    MatrixRep rep;
    std::vector<std::vector<ComplexMatrix>> basis_images;

    [[nodiscard]] std::size_t N() const { return rep.N; }
    [[nodiscard]] std::size_t dim() const { return rep.dim(); }
    /// (Nn) x (Nn) matrix whose block (s, i) is block s of basis element i.
    [[nodiscard]] ComplexMatrix basis_matrix() const;
    /// Basis element i as an (Nn) x N column of blocks.
    [[nodiscard]] ComplexMatrix basis_element(std::size_t i) const;
};

void require_consistent_shapes(const CalculusInstance& c);
void require_consistent_shapes(const FreeCalculusInstance& f);

/// m x (N n) matrix V with block (s, j) equal to block s of phi[j]. phi(g) generates
/// (C^N)^m iff rank V = m.
[[nodiscard]] ComplexMatrix generation_matrix(const CalculusInstance& c);

/// Representation validity (prefixed "rep.") plus the generation rank check.
[[nodiscard]] ValidationReport validate_calculus(const CalculusInstance& c, const Tolerance& tol = {});

/// Representation validity plus invertibility of the basis matrix.
[[nodiscard]] ValidationReport validate_free_calculus(const FreeCalculusInstance& f, const Tolerance& tol = {});

/// Right action (v_1, ..., v_m) . A = (v_1 A, ..., v_m A).
[[nodiscard]] RowVector module_action(const RowVector& v, const ComplexMatrix& a);

/// Reshapes a length N*m row vector into the m x N matrix with rows v_1, ..., v_m.
[[nodiscard]] ComplexMatrix to_block_rows(const RowVector& v, std::size_t N);
/// Inverse of to_block_rows.
[[nodiscard]] RowVector from_block_rows(const ComplexMatrix& rows);

/// Canonical diagonal form of a calculus with dim g = 1 together with the spectrum
/// used to obtain it; spectrum.diagonalizer is the conjugating unitary U.
struct Canonical1D {
    CalculusInstance instance;
    SpectrumBlocks spectrum;
};

/// Conjugates Dhat to (+)_j lambda_j I_{n_j} (descending imaginary parts) and maps
/// phi to phi (1_m (x) U). Throws UnsupportedError when dim g != 1 and
/// ArgumentError when the calculus is invalid.
[[nodiscard]] Canonical1D canonicalize_1d(const CalculusInstance& c, const Tolerance& tol = {});

/// The instance part of canonicalize_1d.
[[nodiscard]] CalculusInstance canonical_diag_1d(const CalculusInstance& c, const Tolerance& tol = {});

}  // namespace realcalc
