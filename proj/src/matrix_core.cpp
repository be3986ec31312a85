#include "realcalc/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "realcalc/errors.hpp"

namespace realcalc {

double Tolerance::threshold(double magnitude) const {
    return eps * std::max(1.0, magnitude);
}

void require_valid(const Tolerance& tol) {
    if (!(tol.eps > 0.0) || !std::isfinite(tol.eps)) {
        throw ArgumentError("tolerance eps must be a positive finite number");
    }
}

double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double max_abs(const RealMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("approx_equal: shape mismatch");
    }
    const double scale = std::max(max_abs(a), max_abs(b));
    return max_abs(ComplexMatrix(a - b)) <= tol.threshold(scale);
}

bool exactly_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool is_square(const ComplexMatrix& a) {
    return a.rows() == a.cols() && a.rows() > 0;
}

bool is_anti_hermitian(const ComplexMatrix& a, const Tolerance& tol) {
    if (!is_square(a)) return false;
    return max_abs(ComplexMatrix(a + a.adjoint())) <= tol.threshold(max_abs(a));
}

bool is_hermitian(const ComplexMatrix& a, const Tolerance& tol) {
    if (!is_square(a)) return false;
    return max_abs(ComplexMatrix(a - a.adjoint())) <= tol.threshold(max_abs(a));
}

bool is_unitary(const ComplexMatrix& a, const Tolerance& tol) {
    if (!is_square(a)) return false;
    const ComplexMatrix gram = a.adjoint() * a;
    return max_abs(ComplexMatrix(gram - ComplexMatrix::Identity(a.rows(), a.cols()))) <= tol.threshold();
}

ComplexMatrix unit_matrix(std::size_t rows, std::size_t cols, std::size_t row, std::size_t col) {
    if (row >= rows || col >= cols) {
        throw ShapeError("unit_matrix: index out of range");
    }
    ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    e(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
    return e;
}

std::size_t numerical_rank(const ComplexMatrix& a, const Tolerance& tol) {
    if (a.size() == 0) return 0;
    const Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double cutoff = tol.threshold(s(0));
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++rank;
    }
    return rank;
}

double inverse_condition(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    const Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

bool is_invertible(const ComplexMatrix& a, const Tolerance& tol) {
    return is_square(a) && inverse_condition(a) > tol.eps;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!is_square(a) || !is_square(b) || a.rows() != b.rows()) {
        throw ShapeError("commutator: operands must be square matrices of the same size");
    }
    return a * b - b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix direct_sum(std::span<const ComplexMatrix> blocks) {
    if (blocks.empty()) {
        throw ArgumentError("direct_sum: empty block list");
    }
    Eigen::Index total = 0;
    for (const auto& b : blocks) {
        if (!is_square(b)) throw ShapeError("direct_sum: blocks must be square");
        total += b.rows();
    }
    ComplexMatrix out = ComplexMatrix::Zero(total, total);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

ComplexMatrix complete_unitary(const RowVector& row) {
    const double norm = row.norm();
    if (row.size() == 0 || norm == 0.0) {
        throw DegenerateError("complete_unitary: zero vector");
    }
    const Eigen::Index n = row.size();
    ComplexMatrix q(n, n);
    q.row(0) = row / norm;
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    for (Eigen::Index filled = 1; filled < n; ++filled) {
        // Pivot: the standard basis vector with the largest component outside the span.
        Eigen::Index best = -1;
        double best_norm = -1.0;
        RowVector best_residual;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            RowVector w = RowVector::Unit(n, k);
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index j = 0; j < filled; ++j) {
                    const Complex c = w.dot(q.row(j));  // conj(w) . q_j
                    w -= std::conj(c) * q.row(j);
                }
            }
            const double wn = w.norm();
            if (wn > best_norm) {
                best_norm = wn;
                best = k;
                best_residual = w;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        q.row(filled) = best_residual / best_norm;
    }
    return q;
}

std::size_t SpectrumBlocks::dimension() const {
    return std::accumulate(blocks.begin(), blocks.end(), std::size_t{0},
                           [](std::size_t acc, const SpectrumBlock& b) { return acc + b.multiplicity; });
}

std::size_t SpectrumBlocks::offset(std::size_t block) const {
    if (block > blocks.size()) throw ArgumentError("SpectrumBlocks::offset: block index out of range");
    std::size_t at = 0;
    for (std::size_t j = 0; j < block; ++j) at += blocks[j].multiplicity;
    return at;
}

ComplexMatrix SpectrumBlocks::block_diagonal() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.multiplicity; ++r, ++at) out(at, at) = b.eigenvalue;
    }
    return out;
}

std::vector<double> SpectrumBlocks::imaginary_parts() const {
    std::vector<double> out;
    out.reserve(dimension());
    for (const auto& b : blocks) out.insert(out.end(), b.multiplicity, b.eigenvalue.imag());
    return out;
}

SpectrumBlocks eig_antihermitian_sorted(const ComplexMatrix& d, const Tolerance& tol) {
    require_valid(tol);
    if (!is_square(d)) {
        throw ShapeError("eig_antihermitian_sorted: matrix must be square");
    }
    const double skew = max_abs(ComplexMatrix(d + d.adjoint()));
    if (skew > tol.threshold(max_abs(d))) {
        throw NotAntiHermitianError("eig_antihermitian_sorted: |D + D^dagger|_max = " + std::to_string(skew));
    }
    // D = i H with H = -i D hermitian; eigenvalues of D are i times those of H.
    ComplexMatrix h = -kI * d;
    h = (0.5 * (h + h.adjoint())).eval();
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const Eigen::VectorXd& mu = solver.eigenvalues();  // ascending
    const ComplexMatrix& vecs = solver.eigenvectors();
    const Eigen::Index n = d.rows();

    const double radius = mu.cwiseAbs().maxCoeff();
    const double merge = tol.threshold(radius);

    SpectrumBlocks out;
    out.diagonalizer.resize(n, n);
    std::vector<double> members;
    Eigen::Index column = 0;
    Eigen::Index block_start = 0;
    auto close_block = [&]() {
        const double mean = std::accumulate(members.begin(), members.end(), 0.0) / static_cast<double>(members.size());
        out.blocks.push_back({Complex{0.0, mean}, members.size()});
        // Re-orthonormalize the columns of the block (modified Gram-Schmidt).
        for (Eigen::Index c = block_start; c < column; ++c) {
            for (Eigen::Index p = block_start; p < c; ++p) {
                const Complex proj = out.diagonalizer.col(p).dot(out.diagonalizer.col(c));
                out.diagonalizer.col(c) -= proj * out.diagonalizer.col(p);
            }
            out.diagonalizer.col(c).normalize();
        }
        members.clear();
        block_start = column;
    };
    for (Eigen::Index idx = n - 1; idx >= 0; --idx) {  // descending
        if (!members.empty() && members.back() - mu(idx) > merge) close_block();
        members.push_back(mu(idx));
        out.diagonalizer.col(column++) = vecs.col(idx);
    }
    close_block();
    return out;
}

}  // namespace realcalc
