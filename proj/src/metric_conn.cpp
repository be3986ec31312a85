#include "realcalc/metric_conn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "realcalc/errors.hpp"

namespace realcalc {

namespace {

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

/// Worst residual together with the magnitude of the compared terms.
struct Residual {
    double value = 0.0;
    double scale = 0.0;

    void add(double r, double s) {
        value = std::max(value, r);
        scale = std::max(scale, s);
    }
    [[nodiscard]] bool ok(const Tolerance& tol) const { return value <= tol.threshold(scale); }
};

/// Coefficient stack of e^_j: identity in block j, zero elsewhere.
ComplexMatrix free_generator(std::size_t n, std::size_t N, std::size_t j) {
    const auto sn = static_cast<Eigen::Index>(N);
    ComplexMatrix g = ComplexMatrix::Zero(static_cast<Eigen::Index>(n) * sn, sn);
    g.block(static_cast<Eigen::Index>(j) * sn, 0, sn, sn) = identity(sn);
    return g;
}

/// [Dhat, a_k] for every N x N block a_k of a stacked matrix.
ComplexMatrix blockwise_commutator(const ComplexMatrix& d, const ComplexMatrix& stack) {
    const Eigen::Index N = d.rows();
    ComplexMatrix out(stack.rows(), stack.cols());
    for (Eigen::Index r = 0; r < stack.rows(); r += N) {
        out.middleRows(r, N) = d * stack.middleRows(r, N) - stack.middleRows(r, N) * d;
    }
    return out;
}

void require_1d_cn(const CalculusInstance& c) {
    require_consistent_shapes(c);
    if (c.dim() != 1 || c.module_rank != 1) throw UnsupportedError("operation requires dim g = 1 and module C^N");
}

ComplexMatrix anchor_projection(const RowVector& v0) {
    const double nrm2 = v0.squaredNorm();
    if (nrm2 == 0.0) throw DegenerateError("anchor vector v0 is zero");
    return v0.adjoint() * v0 / nrm2;
}

void require_metric_shape(const CalculusInstance& c, const AlignedMetric& h) {
    const auto n = static_cast<Eigen::Index>(c.dim());
    if (c.module_rank != c.dim()) throw ShapeError("aligned metric requires module (C^N)^n with n = dim g");
    if (h.mtilde.rows() != n || h.mtilde.cols() != n) throw ShapeError("Mtilde must be n x n");
    if (h.alphas.size() != c.dim()) throw ShapeError("alphas must have n entries");
    if (h.v0.size() != static_cast<Eigen::Index>(c.N())) throw ShapeError("v0 must have length N");
}

bool values_hermitian(const HermitianModule& m, const Tolerance& tol) {
    for (const auto& a : m.generators) {
        for (const auto& b : m.generators) {
            const ComplexMatrix v = m.form(a, b);
            if (max_abs(ComplexMatrix(v - v.adjoint())) > tol.threshold(max_abs(v))) return false;
        }
    }
    return true;
}

}  // namespace

// --- types -------------------------------------------------------------------

ComplexMatrix FreeMetric::assemble() const {
    const std::size_t nn = n();
    if (nn == 0) return {};
    const Eigen::Index N = hblocks[0].empty() ? 0 : hblocks[0][0].rows();
    ComplexMatrix H(static_cast<Eigen::Index>(nn) * N, static_cast<Eigen::Index>(nn) * N);
    for (std::size_t i = 0; i < nn; ++i) {
        if (hblocks[i].size() != nn) throw ShapeError("hblocks must be n x n");
        for (std::size_t j = 0; j < nn; ++j) {
            const auto& b = hblocks[i][j];
            if (b.rows() != N || b.cols() != N) throw ShapeError("metric blocks must all be N x N");
            H.block(static_cast<Eigen::Index>(i) * N, static_cast<Eigen::Index>(j) * N, N, N) = b;
        }
    }
    return H;
}

Christoffel::Christoffel(std::size_t dim, std::size_t size)
    : n(dim), N(size),
      gamma(dim * dim * dim, ComplexMatrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size))) {}

ComplexMatrix Christoffel::slice(std::size_t i) const {
    const auto sN = static_cast<Eigen::Index>(N);
    ComplexMatrix out(static_cast<Eigen::Index>(n) * sN, static_cast<Eigen::Index>(n) * sN);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            out.block(static_cast<Eigen::Index>(k) * sN, static_cast<Eigen::Index>(j) * sN, sN, sN) = at(k, i, j);
    return out;
}

double Christoffel::max_abs() const {
    double m = 0.0;
    for (const auto& g : gamma) m = std::max(m, realcalc::max_abs(g));
    return m;
}

// --- modules -----------------------------------------------------------------

HermitianModule hermitian_module(const CalculusInstance& c, const ScalarMetric& h) {
    require_consistent_shapes(c);
    if (c.module_rank != 1) throw ShapeError("scalar metric requires the module C^N");
    HermitianModule m;
    m.gram = ComplexMatrix::Constant(1, 1, Complex{h.x, 0.0});
    for (const auto& p : c.phi) m.generators.push_back(to_block_rows(p, c.N()));
    return m;
}

HermitianModule hermitian_module(const CalculusInstance& c, const AlignedMetric& h) {
    require_consistent_shapes(c);
    require_metric_shape(c, h);
    const auto n = static_cast<Eigen::Index>(c.dim());
    HermitianModule m;
    m.gram.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double ai = h.alphas[static_cast<std::size_t>(i)];
            const double aj = h.alphas[static_cast<std::size_t>(j)];
            if (ai == 0.0 || aj == 0.0) throw InvalidMetricError("alphas must be nonzero");
            m.gram(i, j) = h.mtilde(i, j) / (ai * aj);
        }
    }
    for (const auto& p : c.phi) m.generators.push_back(to_block_rows(p, c.N()));
    return m;
}

HermitianModule hermitian_module(const FreeCalculusInstance& f, const FreeMetric& h) {
    require_consistent_shapes(f);
    if (h.n() != f.dim()) throw ShapeError("free metric must have n x n blocks");
    HermitianModule m;
    m.gram = h.assemble();
    if (m.gram.rows() != static_cast<Eigen::Index>(f.dim() * f.N())) throw ShapeError("metric blocks must be N x N");
    for (std::size_t j = 0; j < f.dim(); ++j) m.generators.push_back(free_generator(f.dim(), f.N(), j));
    return m;
}

// --- metrics -----------------------------------------------------------------

ComplexMatrix eval_scalar_metric(const ScalarMetric& h, const RowVector& u, const RowVector& v) {
    if (u.size() != v.size()) throw ShapeError("eval_scalar_metric: vectors must have equal length");
    return h.x * (u.adjoint() * v);
}

double validate_metric_on_CN(const ComplexMatrix& H, const Tolerance& tol) {
    if (!is_square(H) || H.rows() == 0) throw ShapeError("metric value must be a nonempty square matrix");
    const double scale = max_abs(H);
    ComplexMatrix rest = H;
    rest(0, 0) = 0.0;
    if (scale > tol.threshold(0.0) && max_abs(rest) > tol.threshold(scale)) {
        throw InvalidMetricError("h(e_1, e_1) must be a multiple of E_11");
    }
    const Complex x = H(0, 0);
    if (std::abs(x) <= tol.threshold(0.0)) throw DegenerateError("h(e_1, e_1) vanishes, so h is identically zero");
    if (std::abs(x.imag()) > tol.threshold(std::abs(x))) throw DegenerateError("h(e_1, e_1)_11 is not real");
    return x.real();
}

std::optional<Alignment> detect_alignment(const CalculusInstance& c, const Tolerance& tol) {
    require_consistent_shapes(c);
    if (c.module_rank != c.dim() || c.dim() == 0) return std::nullopt;
    const auto N = static_cast<Eigen::Index>(c.N());
    double scale = 0.0;
    for (const auto& p : c.phi) scale = std::max(scale, max_abs(ComplexMatrix(p)));
    const double thr = tol.threshold(scale);

    const RowVector first = c.phi[0].segment(0, N);
    if (first.norm() <= thr) return std::nullopt;
    Alignment out;
    out.v0 = first / first.norm();
    for (std::size_t i = 0; i < c.dim(); ++i) {
        for (std::size_t s = 0; s < c.module_rank; ++s) {
            const RowVector seg = c.phi[i].segment(static_cast<Eigen::Index>(s) * N, N);
            if (s != i) {
                if (max_abs(ComplexMatrix(seg)) > thr) return std::nullopt;
                continue;
            }
            const Complex a = (seg * out.v0.adjoint())(0, 0);
            if (std::abs(a.imag()) > thr || std::abs(a.real()) <= thr) return std::nullopt;
            if (max_abs(ComplexMatrix(seg - a.real() * out.v0)) > thr) return std::nullopt;
            out.alphas.push_back(a.real());
        }
    }
    return out;
}

bool is_real_metric_calculus(const CalculusInstance& c, const ScalarMetric& h, const Tolerance& tol) {
    const HermitianModule m = hermitian_module(c, h);
    if (!(h.x != 0.0) || !std::isfinite(h.x)) return false;
    return values_hermitian(m, tol);
}

bool is_real_metric_calculus(const CalculusInstance& c, const AlignedMetric& h, const Tolerance& tol) {
    require_consistent_shapes(c);
    require_metric_shape(c, h);
    if (max_abs(RealMatrix(h.mtilde - h.mtilde.transpose())) > tol.threshold(max_abs(h.mtilde))) return false;
    if (!is_invertible(ComplexMatrix(h.mtilde.cast<Complex>()), tol)) return false;
    if (std::abs(h.v0.norm() - 1.0) > tol.threshold(1.0)) return false;
    if (std::any_of(h.alphas.begin(), h.alphas.end(), [](double a) { return a == 0.0; })) return false;
    const auto N = static_cast<Eigen::Index>(c.N());
    for (std::size_t i = 0; i < c.dim(); ++i) {
        RowVector expected = RowVector::Zero(c.phi[i].size());
        expected.segment(static_cast<Eigen::Index>(i) * N, N) = h.alphas[i] * h.v0;
        if (!approx_equal(ComplexMatrix(c.phi[i]), ComplexMatrix(expected), tol)) return false;
    }
    return values_hermitian(hermitian_module(c, h), tol);
}

bool is_real_metric_calculus(const FreeCalculusInstance& f, const FreeMetric& h, const Tolerance& tol) {
    const HermitianModule m = hermitian_module(f, h);
    for (std::size_t i = 0; i < h.n(); ++i) {
        for (std::size_t j = 0; j < h.n(); ++j) {
            const ComplexMatrix adj = h.hblocks[j][i].adjoint();
            if (!approx_equal(h.hblocks[i][j], adj, tol)) return false;
        }
    }
    if (!is_invertible(m.gram, tol)) return false;
    return values_hermitian(m, tol);
}

// --- C^N ---------------------------------------------------------------------

RowVector connection_on_CN(const CalculusInstance& c, Complex lambda, const RowVector& v) {
    require_1d_cn(c);
    if (v.size() != static_cast<Eigen::Index>(c.N())) throw ShapeError("module element must have length N");
    const RowVector& v0 = c.phi[0];
    const ComplexMatrix p = anchor_projection(v0);
    const ComplexMatrix& d = c.rep.dhat[0];
    // v = v0 B with B = v0^dagger v / |v0|^2
    const ComplexMatrix b = v0.adjoint() * v / v0.squaredNorm();
    const ComplexMatrix nabla_v0 = lambda * identity(d.rows()) + commutator(d, p);
    return v0 * nabla_v0 * b + v0 * commutator(d, b);
}

ConnectionMap connection_on_CN_map(const CalculusInstance& c, Complex lambda) {
    require_1d_cn(c);
    return [c, lambda](std::size_t, const ComplexMatrix& rows) -> ComplexMatrix {
        return connection_on_CN(c, lambda, RowVector(rows.row(0)));
    };
}

double eigenvector_residual_1d(const CalculusInstance& c) {
    require_1d_cn(c);
    const RowVector& v0 = c.phi[0];
    const ComplexMatrix p = anchor_projection(v0);
    const ComplexMatrix& d = c.rep.dhat[0];
    return (v0 * d * (identity(d.rows()) - p)).norm();
}

std::optional<Complex> lc_exists_1d(const CalculusInstance& c, const Tolerance& tol) {
    require_valid(tol);
    const double r = eigenvector_residual_1d(c);
    const RowVector& v0 = c.phi[0];
    const ComplexMatrix& d = c.rep.dhat[0];
    if (r > tol.threshold((v0 * d).norm())) return std::nullopt;
    const Complex lambda = (v0 * d * v0.adjoint())(0, 0) / v0.squaredNorm();
    if (std::abs(lambda.real()) > tol.threshold(std::abs(lambda))) {
        throw NotAntiHermitianError("eigenvalue of Dhat is not purely imaginary");
    }
    return Complex{0.0, lambda.imag()};
}

ConnectionMap LeviCivita1D::map() const {
    return [l = lambda, d = dhat](std::size_t, const ComplexMatrix& rows) -> ComplexMatrix {
        return l * rows - rows * d;
    };
}

LeviCivita1D lc_connection_1d(const CalculusInstance& c, const Tolerance& tol) {
    const auto lambda = lc_exists_1d(c, tol);
    if (!lambda) throw NoLeviCivitaError("v0 Dhat (1 - p) != 0: v0 is not an eigenvector of Dhat");
    return LeviCivita1D{*lambda, c.rep.dhat[0]};
}

// --- aligned abelian ---------------------------------------------------------

ConnectionMap lambda_tensor_map(const CalculusInstance& c, const Alignment& a, const LambdaTensor& t) {
    require_consistent_shapes(c);
    if (t.n != c.dim() || a.alphas.size() != c.dim() || c.module_rank != c.dim()) {
        throw ShapeError("lambda tensor, alignment and calculus dimensions differ");
    }
    const ComplexMatrix p = anchor_projection(a.v0);
    return [c, a, t, p](std::size_t i, const ComplexMatrix& rows) -> ComplexMatrix {
        const std::size_t n = c.dim();
        const auto N = static_cast<Eigen::Index>(c.N());
        const ComplexMatrix& d = c.rep.dhat[i];
        const ComplexMatrix dp = commutator(d, p);
        const RowVector v0 = a.v0 / a.v0.norm();
        ComplexMatrix out = ComplexMatrix::Zero(rows.rows(), N);
        for (std::size_t j = 0; j < n; ++j) {
            // slot j = e_j A_j with e_j = alpha_j v0
            const ComplexMatrix aj = v0.adjoint() * rows.row(static_cast<Eigen::Index>(j)) / a.alphas[j];
            for (std::size_t k = 0; k < n; ++k) {
                out.row(static_cast<Eigen::Index>(k)) += t.at(k, i, j) * a.alphas[k] * (v0 * aj);
            }
            out.row(static_cast<Eigen::Index>(j)) += a.alphas[j] * (v0 * (dp * aj + commutator(d, aj)));
        }
        return out;
    };
}

ComplexMatrix AbelianLeviCivita::apply(std::size_t i, const ComplexMatrix& rows) const {
    return eigenvalues.at(i) * rows - rows * dhat.at(i);
}

ConnectionMap AbelianLeviCivita::map() const {
    return [self = *this](std::size_t i, const ComplexMatrix& rows) { return self.apply(i, rows); };
}

AbelianLeviCivita lc_abelian(const CalculusInstance& c, const AlignedMetric& h, const Tolerance& tol) {
    require_valid(tol);
    require_consistent_shapes(c);
    if (!c.rep.lie.is_abelian(tol.eps)) throw UnsupportedError("lc_abelian requires an abelian Lie algebra");
    const auto alignment = detect_alignment(c, tol);
    if (!alignment) throw UnsupportedError("anchors phi(d_i) are not aligned");
    require_metric_shape(c, h);
    if (!is_real_metric_calculus(c, h, tol)) throw InvalidMetricError("aligned metric is invalid for this calculus");

    const std::size_t n = c.dim();
    const RowVector v0 = h.v0 / h.v0.norm();
    const ComplexMatrix p = anchor_projection(v0);
    const ComplexMatrix id = identity(p.rows());
    AbelianLeviCivita out;
    out.tensor = LambdaTensor(n);
    out.dhat = c.rep.dhat;
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix& d = c.rep.dhat[i];
        const double r = (v0 * d * (id - p)).norm();
        if (r > tol.threshold((v0 * d).norm())) {
            throw NoLeviCivitaError("v0 is not an eigenvector of Dhat(d_" + std::to_string(i + 1) + ")");
        }
        const Complex lambda = (v0 * d * v0.adjoint())(0, 0);
        if (std::abs(lambda.real()) > tol.threshold(std::abs(lambda))) {
            throw NotAntiHermitianError("eigenvalue of Dhat is not purely imaginary");
        }
        out.eigenvalues.emplace_back(0.0, lambda.imag());
    }

    // Koszul: sum_l conj(lambda^l_ij) mtilde_lk p = K_ijk / 2 - mtilde_jk [Dhat_i, p] p
    const HermitianModule m = hermitian_module(c, h);
    const Eigen::PartialPivLU<ComplexMatrix> mt(ComplexMatrix(h.mtilde.transpose().cast<Complex>()));
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix dp = commutator(c.rep.dhat[i], p);
        for (std::size_t j = 0; j < n; ++j) {
            Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
            for (std::size_t k = 0; k < n; ++k) {
                const ComplexMatrix kz = koszul_rhs(c.rep, m, i, j, k);
                const double mjk = h.mtilde(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
                rhs(static_cast<Eigen::Index>(k)) = ((0.5 * kz - mjk * dp * p) * p).trace();
            }
            const Eigen::VectorXcd conj_lambda = mt.solve(rhs);
            for (std::size_t l = 0; l < n; ++l) {
                out.tensor.at(l, i, j) = std::conj(conj_lambda(static_cast<Eigen::Index>(l)));
            }
        }
    }
    return out;
}

// --- free modules ------------------------------------------------------------

ComplexMatrix koszul_rhs(const MatrixRep& rep, const HermitianModule& m, std::size_t i, std::size_t j,
                         std::size_t k) {
    const std::size_t n = rep.dim();
    if (i >= n || j >= n || k >= n) throw ArgumentError("koszul_rhs: index out of range");
    if (m.generators.size() != n) throw ShapeError("module must have one generator per Lie algebra basis element");
    const auto& g = m.generators;
    const auto h = [&](std::size_t a, std::size_t b) { return m.form(g[a], g[b]); };
    const auto phi_bracket = [&](std::size_t a, std::size_t b) {
        ComplexMatrix out = ComplexMatrix::Zero(g[0].rows(), g[0].cols());
        for (std::size_t l = 0; l < n; ++l) out += rep.lie.constant(a, b, l) * g[l];
        return out;
    };
    const auto& d = rep.dhat;
    return commutator(d[i], h(j, k)) + commutator(d[j], h(i, k)) - commutator(d[k], h(i, j)) -
           m.form(g[i], phi_bracket(j, k)) + m.form(g[j], phi_bracket(k, i)) + m.form(g[k], phi_bracket(i, j));
}

ComplexMatrix koszul_rhs(const FreeCalculusInstance& f, const FreeMetric& h, std::size_t i, std::size_t j,
                         std::size_t k) {
    return koszul_rhs(f.rep, hermitian_module(f, h), i, j, k);
}

Christoffel christoffel_free(const FreeCalculusInstance& f, const FreeMetric& h, const Tolerance& tol) {
    require_valid(tol);
    const HermitianModule m = hermitian_module(f, h);
    if (!is_invertible(m.gram, tol)) throw SingularMetricError("free metric is not invertible");
    if (!validate_free_calculus(f, tol).passed()) throw ArgumentError("free calculus is invalid");
    if (!is_real_metric_calculus(f, h, tol)) throw ArgumentError("(f, h) is not a free real metric calculus");

    const std::size_t n = f.dim();
    const auto N = static_cast<Eigen::Index>(f.N());
    const Eigen::PartialPivLU<ComplexMatrix> lu(m.gram);
    Christoffel out(n, f.N());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // sum_l h_kl Gamma^l_ij = K_ijk^dagger / 2
            ComplexMatrix rhs(static_cast<Eigen::Index>(n) * N, N);
            for (std::size_t k = 0; k < n; ++k) {
                rhs.middleRows(static_cast<Eigen::Index>(k) * N, N) = 0.5 * koszul_rhs(f.rep, m, i, j, k).adjoint();
            }
            const ComplexMatrix sol = lu.solve(rhs);
            for (std::size_t l = 0; l < n; ++l) out.at(l, i, j) = sol.middleRows(static_cast<Eigen::Index>(l) * N, N);
        }
    }
    return out;
}

ConnectionMap christoffel_map(const MatrixRep& rep, const Christoffel& gamma) {
    if (gamma.n != rep.dim() || gamma.N != rep.N) throw ShapeError("Christoffel symbols do not match the calculus");
    std::vector<ComplexMatrix> slices;
    for (std::size_t i = 0; i < gamma.n; ++i) slices.push_back(gamma.slice(i));
    return [slices = std::move(slices), dhat = rep.dhat](std::size_t i, const ComplexMatrix& a) -> ComplexMatrix {
        return slices.at(i) * a + blockwise_commutator(dhat.at(i), a);
    };
}

// --- verification ------------------------------------------------------------

ValidationReport verify_pseudo_riemannian(const MatrixRep& rep, const HermitianModule& m, const ConnectionMap& nabla,
                                          const Tolerance& tol, const VerifyOptions& opts) {
    require_valid(tol);
    require_consistent_shapes(rep);
    const std::size_t n = rep.dim();
    if (m.generators.size() != n) throw ShapeError("module must have one generator per Lie algebra basis element");
    const auto& g = m.generators;
    const auto& d = rep.dhat;
    const auto N = static_cast<Eigen::Index>(rep.N);
    ValidationReport report;

    const auto hermitian_defect = [](const ComplexMatrix& v, Residual& r) {
        r.add(max_abs(ComplexMatrix(v - v.adjoint())), max_abs(v));
    };

    Residual real_metric;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hermitian_defect(m.form(g[i], g[j]), real_metric);
    report.add("real_metric", real_metric.ok(tol), real_metric.value, "h(phi(d_i), phi(d_j)) hermitian");

    std::vector<std::vector<ComplexMatrix>> nabla_g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) nabla_g[i].push_back(nabla(i, g[j]));

    Residual symmetry;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) hermitian_defect(m.form(nabla_g[i][j], g[k]), symmetry);
    report.add("symmetry", symmetry.ok(tol), symmetry.value, "h(nabla_i phi(d_j), phi(d_k)) hermitian");

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    const auto random_matrix = [&] {
        ComplexMatrix a(N, N);
        for (Eigen::Index t = 0; t < a.size(); ++t) a(t) = Complex{gauss(rng), gauss(rng)};
        return a;
    };
    std::vector<ComplexMatrix> samples;
    for (std::size_t t = 0; t < opts.random_elements; ++t) {
        ComplexMatrix v = ComplexMatrix::Zero(g[0].rows(), N);
        for (std::size_t k = 0; k < n; ++k) v += g[k] * random_matrix();
        samples.push_back(std::move(v));
    }

    Residual metric;
    const auto compat = [&](const ComplexMatrix& u, const ComplexMatrix& v) {
        const ComplexMatrix huv = m.form(u, v);
        for (std::size_t i = 0; i < n; ++i) {
            const ComplexMatrix lhs = commutator(d[i], huv);
            const ComplexMatrix a = m.form(nabla(i, u), v);
            const ComplexMatrix b = m.form(u, nabla(i, v));
            metric.add(max_abs(ComplexMatrix(lhs - a - b)), std::max({max_abs(lhs), max_abs(a), max_abs(b)}));
        }
    };
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) compat(g[j], g[k]);
    for (std::size_t t = 0; t < samples.size(); ++t) compat(samples[t], samples[(t + 1) % samples.size()]);
    report.add("metric", metric.ok(tol), metric.value, "d_i h(u, v) = h(nabla_i u, v) + h(u, nabla_i v)");

    Residual torsion;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ComplexMatrix bracket = ComplexMatrix::Zero(g[0].rows(), N);
            for (std::size_t k = 0; k < n; ++k) bracket += rep.lie.constant(i, j, k) * g[k];
            const ComplexMatrix t = nabla_g[i][j] - nabla_g[j][i] - bracket;
            torsion.add(max_abs(t), std::max({max_abs(nabla_g[i][j]), max_abs(nabla_g[j][i]), max_abs(bracket)}));
        }
    }
    report.add("torsion", torsion.ok(tol), torsion.value, "nabla_i phi(d_j) - nabla_j phi(d_i) = phi([d_i, d_j])");

    Residual leibniz;
    for (const auto& v : samples) {
        const ComplexMatrix a = random_matrix();
        for (std::size_t i = 0; i < n; ++i) {
            const ComplexMatrix lhs = nabla(i, ComplexMatrix(v * a));
            const ComplexMatrix rhs = nabla(i, v) * a + v * commutator(d[i], a);
            leibniz.add(max_abs(ComplexMatrix(lhs - rhs)), std::max(max_abs(lhs), max_abs(rhs)));
        }
    }
    report.add("leibniz", leibniz.ok(tol), leibniz.value, "nabla_i(v a) = (nabla_i v) a + v d_i(a)");
    return report;
}

ValidationReport verify_pseudo_riemannian(const CalculusInstance& c, const ScalarMetric& h, const ConnectionMap& nabla,
                                          const Tolerance& tol, const VerifyOptions& opts) {
    return verify_pseudo_riemannian(c.rep, hermitian_module(c, h), nabla, tol, opts);
}

ValidationReport verify_pseudo_riemannian(const CalculusInstance& c, const AlignedMetric& h, const ConnectionMap& nabla,
                                          const Tolerance& tol, const VerifyOptions& opts) {
    return verify_pseudo_riemannian(c.rep, hermitian_module(c, h), nabla, tol, opts);
}

ValidationReport verify_pseudo_riemannian(const FreeCalculusInstance& f, const FreeMetric& h, const Christoffel& gamma,
                                          const Tolerance& tol, const VerifyOptions& opts) {
    return verify_pseudo_riemannian(f.rep, hermitian_module(f, h), christoffel_map(f.rep, gamma), tol, opts);
}

}  // namespace realcalc
