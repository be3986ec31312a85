#include "realcalc/lie_rep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "realcalc/errors.hpp"

namespace realcalc {

LieAlgebraSpec::LieAlgebraSpec(std::size_t dim) : dim_(dim), constants_(dim * dim * dim, 0.0) {}

LieAlgebraSpec::LieAlgebraSpec(std::size_t dim, std::vector<double> constants)
    : dim_(dim), constants_(std::move(constants)) {
    if (constants_.size() != dim_ * dim_ * dim_) {
        throw ShapeError("LieAlgebraSpec: expected dim^3 structure constants");
    }
}

double LieAlgebraSpec::constant(std::size_t i, std::size_t j, std::size_t k) const {
    if (i >= dim_ || j >= dim_ || k >= dim_) throw ArgumentError("LieAlgebraSpec: index out of range");
    return constants_[(i * dim_ + j) * dim_ + k];
}

void LieAlgebraSpec::set_constant(std::size_t i, std::size_t j, std::size_t k, double value) {
    if (i >= dim_ || j >= dim_ || k >= dim_) throw ArgumentError("LieAlgebraSpec: index out of range");
    constants_[(i * dim_ + j) * dim_ + k] = value;
}

std::vector<double> LieAlgebraSpec::bracket(std::size_t i, std::size_t j) const {
    std::vector<double> out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = constant(i, j, k);
    return out;
}

std::vector<double> LieAlgebraSpec::bracket(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != dim_ || y.size() != dim_) throw ShapeError("LieAlgebraSpec::bracket: coefficient length");
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            const double w = x[i] * y[j];
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < dim_; ++k) out[k] += w * constant(i, j, k);
        }
    }
    return out;
}

bool LieAlgebraSpec::is_abelian(double eps) const {
    return std::all_of(constants_.begin(), constants_.end(), [&](double c) { return std::abs(c) <= eps; });
}

double LieAlgebraSpec::antisymmetry_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = 0; k < dim_; ++k)
                worst = std::max(worst, std::abs(constant(i, j, k) + constant(j, i, k)));
    return worst;
}

double LieAlgebraSpec::jacobi_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = 0; k < dim_; ++k)
                for (std::size_t m = 0; m < dim_; ++m) {
                    double sum = 0.0;
                    for (std::size_t l = 0; l < dim_; ++l) {
                        sum += constant(i, j, l) * constant(l, k, m) + constant(j, k, l) * constant(l, i, m) +
                               constant(k, i, l) * constant(l, j, m);
                    }
                    worst = std::max(worst, std::abs(sum));
                }
    return worst;
}

double LieAlgebraSpec::automorphism_residual(const RealMatrix& psi) const {
    if (psi.rows() != static_cast<Eigen::Index>(dim_) || psi.cols() != static_cast<Eigen::Index>(dim_)) {
        throw ShapeError("automorphism_residual: psi must be dim x dim");
    }
    // psi([d_i, d_j]) - [psi d_i, psi d_j]
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            std::vector<double> lhs(dim_, 0.0);
            for (std::size_t k = 0; k < dim_; ++k) {
                const double c = constant(i, j, k);
                for (std::size_t l = 0; l < dim_; ++l) lhs[l] += c * psi(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
            }
            std::vector<double> xi(dim_), xj(dim_);
            for (std::size_t l = 0; l < dim_; ++l) {
                xi[l] = psi(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i));
                xj[l] = psi(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
            }
            const auto rhs = bracket(xi, xj);
            for (std::size_t l = 0; l < dim_; ++l) worst = std::max(worst, std::abs(lhs[l] - rhs[l]));
        }
    }
    return worst;
}

bool LieAlgebraSpec::is_automorphism(const RealMatrix& psi, const Tolerance& tol) const {
    if (!is_invertible(ComplexMatrix(psi.cast<Complex>()), tol)) return false;
    double cmax = 0.0;
    for (double c : constants_) cmax = std::max(cmax, std::abs(c));
    const double scale = std::max(1.0, max_abs(psi) * max_abs(psi)) * std::max(1.0, cmax);
    return automorphism_residual(psi) <= tol.threshold(scale);
}

bool LieAlgebraSpec::approx_equal(const LieAlgebraSpec& other, const Tolerance& tol) const {
    if (dim_ != other.dim_) return false;
    for (std::size_t idx = 0; idx < constants_.size(); ++idx) {
        const double scale = std::max(std::abs(constants_[idx]), std::abs(other.constants_[idx]));
        if (std::abs(constants_[idx] - other.constants_[idx]) > tol.threshold(scale)) return false;
    }
    return true;
}

ComplexMatrix MatrixRep::element(std::span<const double> coeffs) const {
    if (coeffs.size() != dhat.size()) throw ShapeError("MatrixRep::element: coefficient length must equal dim");
    const auto n = static_cast<Eigen::Index>(N);
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < coeffs.size(); ++i) out += coeffs[i] * dhat[i];
    return out;
}

void require_consistent_shapes(const MatrixRep& rep) {
    if (rep.N == 0) throw ShapeError("MatrixRep: N must be at least 1");
    if (rep.lie.dim() == 0) throw ShapeError("MatrixRep: Lie algebra dimension must be at least 1");
    if (rep.dhat.size() != rep.lie.dim()) {
        throw ShapeError("MatrixRep: expected one matrix per Lie algebra basis element");
    }
    for (const auto& d : rep.dhat) {
        if (d.rows() != static_cast<Eigen::Index>(rep.N) || d.cols() != static_cast<Eigen::Index>(rep.N)) {
            throw ShapeError("MatrixRep: every Dhat must be N x N");
        }
    }
}

ValidationReport validate_rep(const MatrixRep& rep, const Tolerance& tol) {
    require_valid(tol);
    require_consistent_shapes(rep);
    ValidationReport report;
    const std::size_t n = rep.dim();

    {
        const double anti = rep.lie.antisymmetry_residual();
        const double jac = rep.lie.jacobi_residual();
        double cmax = 0.0;
        for (double c : rep.lie.constants()) cmax = std::max(cmax, std::abs(c));
        const bool ok = anti <= tol.threshold(cmax) && jac <= tol.threshold(cmax * cmax);
        report.add("structure_constants", ok, std::max(anti, jac));
    }

    double trace_worst = 0.0, skew_worst = 0.0, dmax = 0.0;
    bool trace_ok = true, skew_ok = true;
    for (const auto& d : rep.dhat) {
        const double scale = max_abs(d);
        dmax = std::max(dmax, scale);
        const double tr = std::abs(d.trace());
        const double skew = max_abs(ComplexMatrix(d + d.adjoint()));
        trace_worst = std::max(trace_worst, tr);
        skew_worst = std::max(skew_worst, skew);
        trace_ok = trace_ok && tr <= tol.threshold(scale);
        skew_ok = skew_ok && skew <= tol.threshold(scale);
    }
    report.add("trace_free", trace_ok, trace_worst);
    report.add("anti_hermitian", skew_ok, skew_worst);

    double bracket_worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const ComplexMatrix lhs = commutator(rep.dhat[i], rep.dhat[j]);
            const ComplexMatrix rhs = rep.element(rep.lie.bracket(i, j));
            bracket_worst = std::max(bracket_worst, max_abs(ComplexMatrix(lhs - rhs)));
        }
    }
    report.add("bracket", bracket_worst <= tol.threshold(dmax * dmax), bracket_worst);

    // Real-linear independence: realified n x 2N^2 coefficient matrix must have rank n.
    const auto nn = static_cast<Eigen::Index>(rep.N * rep.N);
    RealMatrix realified(static_cast<Eigen::Index>(n), 2 * nn);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& d = rep.dhat[i];
        for (Eigen::Index idx = 0; idx < nn; ++idx) {
            const Complex z = d(idx / d.cols(), idx % d.cols());
            realified(static_cast<Eigen::Index>(i), 2 * idx) = z.real();
            realified(static_cast<Eigen::Index>(i), 2 * idx + 1) = z.imag();
        }
    }
    const Eigen::JacobiSVD<RealMatrix> svd(realified);
    const auto& s = svd.singularValues();
    const double smin = s.size() < static_cast<Eigen::Index>(n) ? 0.0 : s(s.size() - 1);
    const double smax = s.size() == 0 ? 0.0 : s(0);
    std::ostringstream detail;
    detail << "smallest singular value " << smin;
    report.add("faithful", smin > tol.threshold(smax), smin, detail.str());
    return report;
}

ComplexMatrix derivation_apply(const MatrixRep& rep, std::span<const double> coeffs, const ComplexMatrix& a) {
    if (a.rows() != static_cast<Eigen::Index>(rep.N) || a.cols() != static_cast<Eigen::Index>(rep.N)) {
        throw ShapeError("derivation_apply: A must be N x N");
    }
    return commutator(rep.element(coeffs), a);
}

ComplexMatrix derivation_apply(const MatrixRep& rep, std::size_t i, const ComplexMatrix& a) {
    if (i >= rep.dhat.size()) throw ArgumentError("derivation_apply: generator index out of range");
    if (a.rows() != static_cast<Eigen::Index>(rep.N) || a.cols() != static_cast<Eigen::Index>(rep.N)) {
        throw ShapeError("derivation_apply: A must be N x N");
    }
    return commutator(rep.dhat[i], a);
}

TraceCorrection remove_trace(const MatrixRep& rep) {
    require_consistent_shapes(rep);
    TraceCorrection out{rep, {}};
    const auto n = static_cast<Eigen::Index>(rep.N);
    for (auto& d : out.rep.dhat) {
        const Complex shift = d.trace() / static_cast<double>(rep.N);
        d -= shift * ComplexMatrix::Identity(n, n);
        out.removed.push_back(shift);
    }
    return out;
}

}  // namespace realcalc
