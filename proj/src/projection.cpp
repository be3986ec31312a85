#include "realcalc/projection.hpp"

#include <cmath>
#include <utility>

#include "realcalc/errors.hpp"

namespace realcalc {

namespace {

void require_compatible(const ProjectionSpec& P, const FreeMetric& h) {
    if (P.n() != h.n()) throw ShapeError("projection and metric have different n");
    if (P.assemble().rows() != h.assemble().rows()) throw ShapeError("projection and metric blocks differ in size");
}

ComplexMatrix block_commutator(const ComplexMatrix& d, const ComplexMatrix& stack) {
    const Eigen::Index N = d.rows();
    ComplexMatrix out(stack.rows(), stack.cols());
    for (Eigen::Index r = 0; r < stack.rows(); r += N) {
        out.middleRows(r, N) = d * stack.middleRows(r, N) - stack.middleRows(r, N) * d;
    }
    return out;
}

}  // namespace

std::size_t ProjectionSpec::N() const {
    return pblocks.empty() || pblocks[0].empty() ? 0 : static_cast<std::size_t>(pblocks[0][0].rows());
}

ComplexMatrix ProjectionSpec::assemble() const {
    const auto nn = static_cast<Eigen::Index>(n());
    const auto sN = static_cast<Eigen::Index>(N());
    ComplexMatrix out(nn * sN, nn * sN);
    for (Eigen::Index k = 0; k < nn; ++k) {
        if (pblocks[static_cast<std::size_t>(k)].size() != n()) throw ShapeError("pblocks must be n x n");
        for (Eigen::Index j = 0; j < nn; ++j) {
            const auto& b = pblocks[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            if (b.rows() != sN || b.cols() != sN) throw ShapeError("projection blocks must all be N x N");
            out.block(k * sN, j * sN, sN, sN) = b;
        }
    }
    return out;
}

double ProjectionSpec::idempotence_residual() const {
    const ComplexMatrix p = assemble();
    return max_abs(ComplexMatrix(p * p - p));
}

ProjectionSpec ProjectionSpec::identity(std::size_t n, std::size_t N) {
    return diagonal(n, ComplexMatrix::Identity(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N)));
}

ProjectionSpec ProjectionSpec::diagonal(std::size_t n, const ComplexMatrix& p) {
    ProjectionSpec out;
    out.pblocks.assign(n, std::vector<ComplexMatrix>(n, ComplexMatrix::Zero(p.rows(), p.cols())));
    for (std::size_t k = 0; k < n; ++k) out.pblocks[k][k] = p;
    return out;
}

ComplexMatrix projection_from_anchor(const RowVector& v0) {
    const double nrm2 = v0.squaredNorm();
    if (nrm2 == 0.0) throw DegenerateError("anchor vector v0 is zero");
    return v0.adjoint() * v0 / nrm2;
}

SplitRealization build_split_realization(const CalculusInstance& c, const Tolerance& tol) {
    require_consistent_shapes(c);
    const auto alignment = detect_alignment(c, tol);
    if (!alignment) throw UnsupportedError("split realization requires C^N over dim g = 1 or aligned anchors");
    const std::size_t n = c.dim();
    const auto N = static_cast<Eigen::Index>(c.N());

    SplitRealization s;
    s.v0 = alignment->v0;
    s.alphas = alignment->alphas;
    s.A = complete_unitary(s.v0);
    s.free.rep = c.rep;
    s.free.basis_images.assign(n, std::vector<ComplexMatrix>(n, ComplexMatrix::Zero(N, N)));
    for (std::size_t i = 0; i < n; ++i) s.free.basis_images[i][i] = s.alphas[i] * s.A;
    s.P = ProjectionSpec::diagonal(n, projection_from_anchor(s.v0));

    const ComplexMatrix b = s.free.basis_matrix();
    const ComplexMatrix pe = b * s.P.assemble();
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix image = pe.middleCols(static_cast<Eigen::Index>(i) * N, N);
        const ComplexMatrix expected = theta(s, to_block_rows(c.phi[i], c.N()));
        if (!approx_equal(image, expected, tol)) throw Error("split realization: P(e^_i) differs from Theta(phi(d_i))");
    }
    return s;
}

ComplexMatrix theta(const SplitRealization& s, const ComplexMatrix& rows) {
    const auto N = static_cast<Eigen::Index>(s.A.rows());
    const auto n = static_cast<Eigen::Index>(s.alphas.size());
    if (rows.rows() != n || rows.cols() != N) throw ShapeError("theta expects an n x N block-row element");
    ComplexMatrix out = ComplexMatrix::Zero(n * N, N);
    for (Eigen::Index k = 0; k < n; ++k) out.row(k * N) = rows.row(k);
    return out;
}

ComplexMatrix theta_coefficients(const SplitRealization& s, const ComplexMatrix& rows) {
    const auto N = static_cast<Eigen::Index>(s.A.rows());
    const auto n = static_cast<Eigen::Index>(s.alphas.size());
    if (rows.rows() != n || rows.cols() != N) throw ShapeError("theta expects an n x N block-row element");
    ComplexMatrix out(n * N, N);
    for (Eigen::Index k = 0; k < n; ++k) {
        // alpha_k A a_k = E_1 v_k  =>  a_k = v0^dagger v_k / alpha_k
        out.middleRows(k * N, N) = s.v0.adjoint() * rows.row(k) / s.alphas[static_cast<std::size_t>(k)];
    }
    return out;
}

FreeMetric lift_metric(const SplitRealization& s, const ScalarMetric& h) {
    if (s.alphas.size() != 1) throw ShapeError("scalar metric lifts only for n = 1");
    const auto N = static_cast<Eigen::Index>(s.A.rows());
    const double a = s.alphas[0];
    return FreeMetric{{{ComplexMatrix(h.x * a * a * ComplexMatrix::Identity(N, N))}}};
}

FreeMetric lift_metric(const SplitRealization& s, const AlignedMetric& h) {
    const std::size_t n = s.alphas.size();
    if (h.mtilde.rows() != static_cast<Eigen::Index>(n) || h.mtilde.cols() != static_cast<Eigen::Index>(n)) {
        throw ShapeError("Mtilde must be n x n");
    }
    const auto N = static_cast<Eigen::Index>(s.A.rows());
    FreeMetric out;
    out.hblocks.assign(n, std::vector<ComplexMatrix>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.hblocks[i][j] = h.mtilde(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                                ComplexMatrix::Identity(N, N);
    return out;
}

bool is_orthogonal_projection(const ProjectionSpec& P, const FreeMetric& h, const Tolerance& tol) {
    require_compatible(P, h);
    const ComplexMatrix p = P.assemble();
    const ComplexMatrix H = h.assemble();
    return approx_equal(ComplexMatrix(p.adjoint() * H), ComplexMatrix(H * p), tol);
}

std::vector<std::vector<ComplexMatrix>> restrict_metric(const ProjectionSpec& P, const FreeMetric& h,
                                                        const Tolerance& tol) {
    if (!is_orthogonal_projection(P, h, tol)) throw InvalidMetricError("projection is not orthogonal for h");
    const ComplexMatrix p = P.assemble();
    const ComplexMatrix hp = h.assemble() * p;
    if (numerical_rank(ComplexMatrix(p.adjoint() * hp), tol) != numerical_rank(p, tol)) {
        throw SingularMetricError("restricted metric is degenerate on P(A^n)");
    }
    const std::size_t n = P.n();
    const auto N = static_cast<Eigen::Index>(P.N());
    std::vector<std::vector<ComplexMatrix>> out(n, std::vector<ComplexMatrix>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[i][j] = hp.block(static_cast<Eigen::Index>(i) * N, static_cast<Eigen::Index>(j) * N, N, N);
    return out;
}

bool metric_symmetry_condition(const ProjectionSpec& P, const FreeMetric& h, const Tolerance& tol) {
    require_compatible(P, h);
    const std::size_t n = P.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!approx_equal(h.hblocks[i][j], h.hblocks[j][i], tol)) {
                throw ArgumentError("metric_symmetry_condition requires h_ij = h_ji");
            }
    const ComplexMatrix hp = h.assemble() * P.assemble();
    const auto N = static_cast<Eigen::Index>(P.N());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto si = static_cast<Eigen::Index>(i) * N;
            const auto sj = static_cast<Eigen::Index>(j) * N;
            if (!approx_equal(ComplexMatrix(hp.block(sj, si, N, N)), ComplexMatrix(hp.block(si, sj, N, N)), tol)) {
                return false;
            }
        }
    }
    return true;
}

Christoffel project_connection(const ProjectionSpec& P, const Christoffel& gamma, const FreeCalculusInstance& f) {
    require_consistent_shapes(f);
    if (P.n() != f.dim() || P.N() != f.N() || gamma.n != f.dim() || gamma.N != f.N()) {
        throw ShapeError("projection, connection and calculus shapes differ");
    }
    const std::size_t n = f.dim();
    Christoffel out(n, f.N());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                ComplexMatrix g = commutator(f.rep.dhat[i], P.pblocks[k][j]);
                for (std::size_t l = 0; l < n; ++l) g += gamma.at(k, i, l) * P.pblocks[l][j];
                out.at(k, i, j) = g;
            }
        }
    }
    return out;
}

ConnectionMap projected_connection_map(const ProjectionSpec& P, const Christoffel& gamma, const MatrixRep& rep) {
    if (P.n() != rep.dim() || P.N() != rep.N || gamma.n != rep.dim() || gamma.N != rep.N) {
        throw ShapeError("projection, connection and calculus shapes differ");
    }
    std::vector<ComplexMatrix> slices;
    for (std::size_t i = 0; i < gamma.n; ++i) slices.push_back(gamma.slice(i));
    return [p = P.assemble(), slices = std::move(slices), dhat = rep.dhat](std::size_t i, const ComplexMatrix& b) {
        return ComplexMatrix(p * (slices.at(i) * b + block_commutator(dhat.at(i), b)));
    };
}

HermitianModule projected_module(const ProjectionSpec& P, const FreeMetric& h) {
    require_compatible(P, h);
    HermitianModule m;
    m.gram = h.assemble();
    const ComplexMatrix p = P.assemble();
    const auto N = static_cast<Eigen::Index>(P.N());
    for (std::size_t j = 0; j < P.n(); ++j) m.generators.push_back(p.middleCols(static_cast<Eigen::Index>(j) * N, N));
    return m;
}

}  // namespace realcalc
