#include "realcalc/calculus.hpp"

#include <sstream>

#include "realcalc/errors.hpp"

namespace realcalc {

namespace {

std::string failed_checks(const ValidationReport& report) {
    std::ostringstream out;
    for (const auto& c : report.checks()) {
        if (!c.passed) out << ' ' << c.name;
    }
    return out.str();
}

}  // namespace

ComplexMatrix FreeCalculusInstance::basis_matrix() const {
    const auto n = static_cast<Eigen::Index>(dim());
    const auto N_ = static_cast<Eigen::Index>(N());
    ComplexMatrix b(N_ * n, N_ * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index s = 0; s < n; ++s) {
            b.block(s * N_, i * N_, N_, N_) = basis_images[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
        }
    }
    return b;
}

ComplexMatrix FreeCalculusInstance::basis_element(std::size_t i) const {
    if (i >= basis_images.size()) throw ArgumentError("basis_element: index out of range");
    const auto N_ = static_cast<Eigen::Index>(N());
    const auto n = static_cast<Eigen::Index>(basis_images[i].size());
    ComplexMatrix e(N_ * n, N_);
    for (Eigen::Index s = 0; s < n; ++s) e.block(s * N_, 0, N_, N_) = basis_images[i][static_cast<std::size_t>(s)];
    return e;
}

void require_consistent_shapes(const CalculusInstance& c) {
    require_consistent_shapes(c.rep);
    if (c.module_rank == 0) throw ShapeError("CalculusInstance: module rank must be at least 1");
    if (c.phi.size() != c.dim()) throw ShapeError("CalculusInstance: expected one phi vector per basis element");
    const auto len = static_cast<Eigen::Index>(c.N() * c.module_rank);
    for (const auto& v : c.phi) {
        if (v.size() != len) throw ShapeError("CalculusInstance: phi vectors must have length N * module_rank");
    }
}

void require_consistent_shapes(const FreeCalculusInstance& f) {
    require_consistent_shapes(f.rep);
    const std::size_t n = f.dim();
    if (f.basis_images.size() != n) throw ShapeError("FreeCalculusInstance: expected n basis images");
    for (const auto& e : f.basis_images) {
        if (e.size() != n) throw ShapeError("FreeCalculusInstance: each basis image needs n blocks");
        for (const auto& b : e) {
            if (b.rows() != static_cast<Eigen::Index>(f.N()) || b.cols() != static_cast<Eigen::Index>(f.N())) {
                throw ShapeError("FreeCalculusInstance: blocks must be N x N");
            }
        }
    }
}

ComplexMatrix generation_matrix(const CalculusInstance& c) {
    require_consistent_shapes(c);
    const auto m = static_cast<Eigen::Index>(c.module_rank);
    const auto N_ = static_cast<Eigen::Index>(c.N());
    const auto n = static_cast<Eigen::Index>(c.dim());
    ComplexMatrix v(m, N_ * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index s = 0; s < m; ++s) {
            v.block(s, j * N_, 1, N_) = c.phi[static_cast<std::size_t>(j)].segment(s * N_, N_);
        }
    }
    return v;
}

ValidationReport validate_calculus(const CalculusInstance& c, const Tolerance& tol) {
    require_valid(tol);
    require_consistent_shapes(c);
    ValidationReport report;
    report.merge(validate_rep(c.rep, tol), "rep.");
    const ComplexMatrix v = generation_matrix(c);
    const std::size_t rank = numerical_rank(v, tol);
    std::ostringstream detail;
    detail << "rank " << rank << " of " << c.module_rank;
    // Residual: the m-th singular value, i.e. distance from losing generation.
    const Eigen::JacobiSVD<ComplexMatrix> svd(v);
    const auto& s = svd.singularValues();
    const double sigma = static_cast<Eigen::Index>(c.module_rank) <= s.size()
                             ? s(static_cast<Eigen::Index>(c.module_rank) - 1)
                             : 0.0;
    report.add("generation", rank == c.module_rank, sigma, detail.str());
    return report;
}

ValidationReport validate_free_calculus(const FreeCalculusInstance& f, const Tolerance& tol) {
    require_valid(tol);
    require_consistent_shapes(f);
    ValidationReport report;
    report.merge(validate_rep(f.rep, tol), "rep.");
    const double rcond = inverse_condition(f.basis_matrix());
    report.add("basis", rcond > tol.eps, rcond, "inverse condition number of the basis matrix");
    return report;
}

RowVector module_action(const RowVector& v, const ComplexMatrix& a) {
    if (!is_square(a) || v.size() % a.rows() != 0) {
        throw ShapeError("module_action: vector length must be a multiple of the matrix size");
    }
    const Eigen::Index N_ = a.rows();
    RowVector out(v.size());
    for (Eigen::Index s = 0; s < v.size() / N_; ++s) out.segment(s * N_, N_) = v.segment(s * N_, N_) * a;
    return out;
}

ComplexMatrix to_block_rows(const RowVector& v, std::size_t N) {
    const auto N_ = static_cast<Eigen::Index>(N);
    if (N_ == 0 || v.size() % N_ != 0) throw ShapeError("to_block_rows: length must be a multiple of N");
    ComplexMatrix rows(v.size() / N_, N_);
    for (Eigen::Index s = 0; s < rows.rows(); ++s) rows.row(s) = v.segment(s * N_, N_);
    return rows;
}

RowVector from_block_rows(const ComplexMatrix& rows) {
    RowVector v(rows.size());
    for (Eigen::Index s = 0; s < rows.rows(); ++s) v.segment(s * rows.cols(), rows.cols()) = rows.row(s);
    return v;
}

Canonical1D canonicalize_1d(const CalculusInstance& c, const Tolerance& tol) {
    require_consistent_shapes(c);
    if (c.dim() != 1) throw UnsupportedError("canonical_diag_1d: requires a one-dimensional Lie algebra");
    const auto report = validate_calculus(c, tol);
    if (!report.passed()) throw ArgumentError("canonical_diag_1d: invalid calculus, failed:" + failed_checks(report));

    Canonical1D out{c, eig_antihermitian_sorted(c.rep.dhat[0], tol)};
    const ComplexMatrix& u = out.spectrum.diagonalizer;
    out.instance.rep.dhat[0] = out.spectrum.block_diagonal();
    const auto m = static_cast<Eigen::Index>(c.module_rank);
    out.instance.phi[0] = c.phi[0] * kron(ComplexMatrix::Identity(m, m), u);
    return out;
}

CalculusInstance canonical_diag_1d(const CalculusInstance& c, const Tolerance& tol) {
    return canonicalize_1d(c, tol).instance;
}

}  // namespace realcalc
