#include "realcalc/iso_nd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "realcalc/classify1d.hpp"
#include "realcalc/errors.hpp"

namespace realcalc {

ComplexMatrix rep_of_image(const MatrixRep& rep, const RealMatrix& psi, std::size_t i) {
    const auto n = static_cast<Eigen::Index>(rep.dim());
    if (psi.rows() != n || psi.cols() != n) throw ShapeError("psi must be dim g x dim g");
    if (i >= rep.dim()) throw ArgumentError("rep_of_image: index out of range");
    std::vector<double> coeffs(rep.dim());
    for (Eigen::Index j = 0; j < n; ++j) coeffs[static_cast<std::size_t>(j)] = psi(j, static_cast<Eigen::Index>(i));
    return rep.element(coeffs);
}

namespace {

RowVector phi_of_image(const CalculusInstance& c, const RealMatrix& psi, std::size_t i) {
    RowVector out = RowVector::Zero(c.phi[0].size());
    for (std::size_t j = 0; j < c.dim(); ++j) {
        out += psi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * c.phi[j];
    }
    return out;
}

void require_same_algebra(const MatrixRep& a, const MatrixRep& b, const Tolerance& tol) {
    require_consistent_shapes(a);
    require_consistent_shapes(b);
    if (a.N != b.N) throw ShapeError("calculi must live over the same Mat(N)");
    if (!a.lie.approx_equal(b.lie, tol)) throw ShapeError("calculi must share the Lie algebra structure constants");
}

}  // namespace

WitnessCheck check_compatible_pair(const MatrixRep& a, const MatrixRep& b, const ComplexMatrix& U,
                                   const RealMatrix& psi, const Tolerance& tol) {
    require_valid(tol);
    require_same_algebra(a, b, tol);
    const auto N = static_cast<Eigen::Index>(a.N);
    const auto n = static_cast<Eigen::Index>(a.dim());
    if (U.rows() != N || U.cols() != N) throw ShapeError("U must be N x N");
    if (psi.rows() != n || psi.cols() != n) throw ShapeError("psi must be dim g x dim g");

    WitnessCheck out;
    if (!is_invertible(U, tol)) {
        out.failure = "U is not invertible";
        return out;
    }
    if (!a.lie.is_automorphism(psi, tol)) {
        out.failure = "psi is not a Lie algebra automorphism";
        return out;
    }
    const Eigen::PartialPivLU<ComplexMatrix> lu(U);
    bool ok = true;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const ComplexMatrix conj = lu.solve(ComplexMatrix(rep_of_image(a, psi, i) * U));
        const ComplexMatrix diff = b.dhat[i] - conj;
        const double r = max_abs(diff);
        out.conjugation_residual = std::max(out.conjugation_residual, r);
        ok = ok && r <= tol.threshold(std::max(max_abs(b.dhat[i]), max_abs(conj)));
    }
    if (!ok) {
        out.failure = "Dhat_b(d) != U^-1 Dhat_a(psi(d)) U";
        return out;
    }
    out.accepted = true;
    return out;
}

bool check_compatible_pair(const CalculusInstance& a, const CalculusInstance& b, const ComplexMatrix& U,
                           const RealMatrix& psi, const Tolerance& tol) {
    return check_compatible_pair(a.rep, b.rep, U, psi, tol).accepted;
}

WitnessCheck verify_isomorphism_witness(const CalculusInstance& a, const CalculusInstance& b, const IsoWitness& w,
                                        const Tolerance& tol) {
    require_consistent_shapes(a);
    require_consistent_shapes(b);
    if (a.module_rank != a.dim() || b.module_rank != b.dim()) {
        throw UnsupportedError("witness verification requires the module (C^N)^n with n = dim g");
    }
    if (a.module_rank != b.module_rank) throw ShapeError("calculi must have the same module rank");
    const auto n = static_cast<Eigen::Index>(a.dim());
    if (w.X.rows() != n || w.X.cols() != n) throw ShapeError("X must be n x n");

    WitnessCheck out = check_compatible_pair(a.rep, b.rep, w.U, w.psi, tol);
    if (!out.accepted) return out;
    out.accepted = false;
    if (!is_invertible(w.X, tol)) {
        out.failure = "X is not invertible";
        return out;
    }
    const ComplexMatrix xu = kron(w.X, w.U);
    bool ok = true;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const RowVector mapped = phi_of_image(a, w.psi, i) * xu;
        const double r = max_abs(ComplexMatrix(b.phi[i] - mapped));
        out.anchor_residual = std::max(out.anchor_residual, r);
        ok = ok && r <= tol.threshold(std::max(max_abs(ComplexMatrix(b.phi[i])), max_abs(ComplexMatrix(mapped))));
    }
    if (!ok) {
        out.failure = "phi_b(d) != phi_a(psi(d)) (X (x) U)";
        return out;
    }
    out.accepted = true;
    return out;
}

bool check_isomorphism_witness(const CalculusInstance& a, const CalculusInstance& b, const IsoWitness& w,
                               const Tolerance& tol) {
    return verify_isomorphism_witness(a, b, w, tol).accepted;
}

bool check_free_isomorphism(const FreeCalculusInstance& a, const FreeCalculusInstance& b, const ComplexMatrix& U,
                            const RealMatrix& psi, const Tolerance& tol) {
    require_consistent_shapes(a);
    require_consistent_shapes(b);
    return check_compatible_pair(a.rep, b.rep, U, psi, tol).accepted;
}

namespace {

/// Invertible W with u W = w for u, w both zero or both nonzero.
ComplexMatrix map_row(const RowVector& u, const RowVector& w, double zero_thr) {
    const auto n = u.size();
    if (u.norm() <= zero_thr || w.norm() <= zero_thr) return ComplexMatrix::Identity(n, n);
    const ComplexMatrix qu = complete_unitary(u);
    const ComplexMatrix qw = complete_unitary(w);
    return (w.norm() / u.norm()) * qu.adjoint() * qw;
}

}  // namespace

std::optional<IsoWitness> construct_witness_1d(const CalculusInstance& a, const CalculusInstance& b,
                                               const Tolerance& tol) {
    if (!is_isomorphic_1d(a, b, tol)) return std::nullopt;
    const auto ca = canonicalize_1d(a, tol);
    const auto cb = canonicalize_1d(b, tol);
    const auto qe = quasi_equivalent_1d(ca.instance.rep.dhat[0], cb.instance.rep.dhat[0], tol);
    const auto pa = zero_pattern(ca.instance, tol);
    const auto pb = zero_pattern(cb.instance, tol);

    const bool positive = qe.has_positive() && pa == pb;
    double mu = 0.0;
    for (double cand : qe.mu_candidates) {
        if ((cand > 0.0) == positive) mu = cand;
    }

    const auto& blocks_a = ca.spectrum.blocks;
    const std::size_t k = blocks_a.size();
    const RowVector& va = ca.instance.phi[0];
    const RowVector& vb = cb.instance.phi[0];
    const double zero_thr = tol.eps * (1.0 + std::max(va.norm(), vb.norm()));
    const auto N = static_cast<Eigen::Index>(a.N());
    ComplexMatrix w = ComplexMatrix::Zero(N, N);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t target = positive ? j : k - 1 - j;
        const auto ra = static_cast<Eigen::Index>(ca.spectrum.offset(j));
        const auto rb = static_cast<Eigen::Index>(cb.spectrum.offset(target));
        const auto len = static_cast<Eigen::Index>(blocks_a[j].multiplicity);
        w.block(ra, rb, len, len) = map_row(va.segment(ra, len), vb.segment(rb, len), zero_thr);
    }

    IsoWitness out;
    out.U = ca.spectrum.diagonalizer * w * cb.spectrum.diagonalizer.adjoint();
    out.psi = RealMatrix::Constant(1, 1, mu);
    out.X = ComplexMatrix::Constant(1, 1, Complex{1.0 / mu, 0.0});
    if (!check_isomorphism_witness(a, b, out, tol)) return std::nullopt;
    return out;
}

namespace {

using Rng = std::mt19937_64;

ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = Complex{g(rng), g(rng)};
    return m;
}

RealMatrix random_orthogonal(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> g;
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = g(rng);
    const Eigen::HouseholderQR<RealMatrix> qr(m);
    RealMatrix q = qr.householderQ();
    const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    return q;
}

/// Signed permutation matrices in a fixed order, identity first.
std::vector<RealMatrix> signed_permutations(Eigen::Index n, std::size_t limit) {
    std::vector<RealMatrix> out;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << n); ++signs) {
            RealMatrix p = RealMatrix::Zero(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                p(perm[static_cast<std::size_t>(j)], j) = ((signs >> j) & 1U) ? -1.0 : 1.0;
            }
            out.push_back(std::move(p));
            if (out.size() >= limit) return out;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Gram matrix of the generators under -Re tr(A B), positive definite for faithful reps.
RealMatrix trace_gram(const MatrixRep& rep) {
    const auto n = static_cast<Eigen::Index>(rep.dim());
    RealMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = -(rep.dhat[static_cast<std::size_t>(i)] * rep.dhat[static_cast<std::size_t>(j)]).trace().real();
    return g;
}

/// Basis of {U : A_i U = U B_i for all i} as N x N matrices.
std::vector<ComplexMatrix> intertwiner_basis(const std::vector<ComplexMatrix>& as, const std::vector<ComplexMatrix>& bs,
                                             const Tolerance& tol) {
    const Eigen::Index N = as.front().rows();
    const Eigen::Index nn = N * N;
    const ComplexMatrix id = ComplexMatrix::Identity(N, N);
    ComplexMatrix k(static_cast<Eigen::Index>(as.size()) * nn, nn);
    for (std::size_t i = 0; i < as.size(); ++i) {
        // column-major vec: vec(A U) = (I (x) A) vec U, vec(U B) = (B^T (x) I) vec U
        k.block(static_cast<Eigen::Index>(i) * nn, 0, nn, nn) = kron(id, as[i]) - kron(bs[i].transpose(), id);
    }
    const Eigen::JacobiSVD<ComplexMatrix> svd(k, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cutoff = tol.threshold(s.size() ? s(0) : 0.0);
    std::vector<ComplexMatrix> basis;
    for (Eigen::Index c = 0; c < nn; ++c) {
        const double sigma = c < s.size() ? s(c) : 0.0;
        if (sigma > cutoff) continue;
        const Eigen::VectorXcd v = svd.matrixV().col(c);
        basis.push_back(Eigen::Map<const ComplexMatrix>(v.data(), N, N));
    }
    return basis;
}

/// Null space of m as columns, singular values at most tol.threshold(largest).
ComplexMatrix null_space(const ComplexMatrix& m, const Tolerance& tol) {
    const Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cutoff = tol.threshold(s.size() ? s(0) : 0.0);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c >= s.size() || s(c) <= cutoff) cols.push_back(c);
    }
    ComplexMatrix out(m.cols(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(cols[j]);
    return out;
}

/// Solves both witness conditions for a fixed psi. With Z = U^-1 ranging over the
/// intertwiners Dhat_b(d_i) Z = Z Dhat_a(psi d_i), the anchor condition
/// phi_b(d_i)_t Z = sum_s X(s, t) phi_a(psi d_i)_s is linear in (Z, X).
std::optional<IsoWitness> solve_for_psi(const CalculusInstance& a, const CalculusInstance& b, const RealMatrix& psi,
                                        Rng& rng, const Tolerance& tol) {
    const auto n = static_cast<Eigen::Index>(a.dim());
    const auto N = static_cast<Eigen::Index>(a.N());
    std::vector<ComplexMatrix> as, bs;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        as.push_back(rep_of_image(a.rep, psi, i));
        bs.push_back(b.rep.dhat[i]);
    }
    const auto zbasis = intertwiner_basis(bs, as, tol);
    if (zbasis.empty()) return std::nullopt;
    const auto r = static_cast<Eigen::Index>(zbasis.size());
    ComplexMatrix sys = ComplexMatrix::Zero(n * n * N, r + n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const RowVector y = phi_of_image(a, psi, static_cast<std::size_t>(i));
        const RowVector& pb = b.phi[static_cast<std::size_t>(i)];
        for (Eigen::Index t = 0; t < n; ++t) {
            const Eigen::Index row = (i * n + t) * N;
            for (Eigen::Index q = 0; q < r; ++q) {
                sys.block(row, q, N, 1) = (pb.segment(t * N, N) * zbasis[static_cast<std::size_t>(q)]).transpose();
            }
            for (Eigen::Index s = 0; s < n; ++s) sys.block(row, r + s * n + t, N, 1) = -y.segment(s * N, N).transpose();
        }
    }
    const ComplexMatrix ns = null_space(sys, tol);
    if (ns.cols() == 0) return std::nullopt;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const Eigen::VectorXcd v = ns * random_complex(ns.cols(), 1, rng);
        ComplexMatrix z = ComplexMatrix::Zero(N, N);
        for (Eigen::Index q = 0; q < r; ++q) z += v(q) * zbasis[static_cast<std::size_t>(q)];
        if (!is_invertible(z, tol)) continue;
        ComplexMatrix x(n, n);
        for (Eigen::Index s = 0; s < n; ++s)
            for (Eigen::Index t = 0; t < n; ++t) x(s, t) = v(r + s * n + t);
        if (!is_invertible(x, tol)) continue;
        return IsoWitness{Eigen::PartialPivLU<ComplexMatrix>(z).inverse(), psi, x};
    }
    return std::nullopt;
}

/// Joint weights of commuting anti-hermitian generators: row k holds the imaginary
/// parts of the eigenvalues of Dhat(d_1), ..., Dhat(d_n) on the k-th common eigenvector.
RealMatrix joint_weights(const MatrixRep& rep, Rng& rng, const Tolerance& tol) {
    const auto N = static_cast<Eigen::Index>(rep.N);
    const auto n = static_cast<Eigen::Index>(rep.dim());
    std::uniform_real_distribution<double> u(0.5, 1.5);
    ComplexMatrix generic = ComplexMatrix::Zero(N, N);
    for (const auto& d : rep.dhat) generic += u(rng) * d;
    const ComplexMatrix v = eig_antihermitian_sorted(generic, tol).diagonalizer;
    RealMatrix w(N, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const ComplexMatrix di = v.adjoint() * rep.dhat[static_cast<std::size_t>(i)] * v;
        for (Eigen::Index k = 0; k < N; ++k) w(k, i) = di(k, k).imag();
    }
    return w;
}

/// True iff the rows of x and y agree as multisets.
bool same_rows(const RealMatrix& x, const RealMatrix& y, double thr) {
    std::vector<bool> used(static_cast<std::size_t>(y.rows()), false);
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        bool found = false;
        for (Eigen::Index l = 0; l < y.rows() && !found; ++l) {
            if (used[static_cast<std::size_t>(l)]) continue;
            if ((x.row(k) - y.row(l)).cwiseAbs().maxCoeff() <= thr) {
                used[static_cast<std::size_t>(l)] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

/// Candidates psi with psi^T w_k = w'_pi(k) for abelian algebras: a set of n independent
/// weights of a is sent to every ordered choice of weights of b.
std::vector<RealMatrix> weight_matchings(const RealMatrix& wa, const RealMatrix& wb, std::size_t limit,
                                         const Tolerance& tol) {
    const Eigen::Index n = wa.cols();
    const double thr = tol.threshold(std::max(wa.cwiseAbs().maxCoeff(), wb.cwiseAbs().maxCoeff()));
    std::vector<Eigen::Index> basis;
    RealMatrix picked(0, n);
    for (Eigen::Index k = 0; k < wa.rows() && static_cast<Eigen::Index>(basis.size()) < n; ++k) {
        RealMatrix trial(picked.rows() + 1, n);
        trial << picked, wa.row(k);
        Eigen::FullPivLU<RealMatrix> lu(trial);
        lu.setThreshold(tol.eps);
        if (lu.rank() == trial.rows()) {
            picked = trial;
            basis.push_back(k);
        }
    }
    std::vector<RealMatrix> out;
    if (static_cast<Eigen::Index>(basis.size()) < n) return out;
    const RealMatrix inv = picked.inverse();
    std::vector<Eigen::Index> choice(static_cast<std::size_t>(n), 0);
    const Eigen::Index M = wb.rows();
    // odometer over ordered n-tuples of distinct rows of wb
    while (out.size() < limit) {
        bool distinct = true;
        for (std::size_t p = 0; p < choice.size() && distinct; ++p)
            for (std::size_t q = p + 1; q < choice.size() && distinct; ++q) distinct = choice[p] != choice[q];
        if (distinct) {
            RealMatrix target(n, n);
            for (Eigen::Index j = 0; j < n; ++j) target.row(j) = wb.row(choice[static_cast<std::size_t>(j)]);
            // rows: picked psi = target, i.e. w_k^T psi = w'^T
            const RealMatrix psi = inv * target;
            if (same_rows(RealMatrix(wa * psi), wb, thr)) {
                bool duplicate = false;
                for (const auto& q : out) duplicate = duplicate || (q - psi).cwiseAbs().maxCoeff() <= thr;
                if (!duplicate) out.push_back(psi);
            }
        }
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == M) choice[pos++] = 0;
        if (pos == choice.size()) break;
    }
    return out;
}

}  // namespace

std::optional<IsoWitness> search_witness(const CalculusInstance& a, const CalculusInstance& b, std::size_t budget,
                                         std::uint64_t seed, const Tolerance& tol) {
    require_valid(tol);
    require_consistent_shapes(a);
    require_consistent_shapes(b);
    if (a.N() != b.N() || a.dim() != b.dim() || a.module_rank != b.module_rank || a.module_rank != a.dim() ||
        !a.rep.lie.approx_equal(b.rep.lie, tol)) {
        return std::nullopt;
    }
    const auto n = static_cast<Eigen::Index>(a.dim());
    const auto N = static_cast<Eigen::Index>(a.N());
    std::size_t trials = 0;

    const auto accept = [&](const IsoWitness& w) {
        try {
            return check_isomorphism_witness(a, b, w, tol);
        } catch (const Error&) {
            return false;
        }
    };

    if (trials++ < budget) {
        const IsoWitness identity{ComplexMatrix::Identity(N, N), RealMatrix::Identity(n, n),
                                  ComplexMatrix::Identity(n, n)};
        if (accept(identity)) return identity;
    }

    if (n == 1) {
        // The spectra decide quasi-equivalence; the block construction is then complete.
        try {
            if (quasi_equivalent_1d(a.rep.dhat[0], b.rep.dhat[0], tol).empty()) return std::nullopt;
            if (trials++ < budget) return construct_witness_1d(a, b, tol);
        } catch (const Error&) {
            return std::nullopt;
        }
        return std::nullopt;
    }

    Rng rng(seed);
    const auto attempt = [&](const RealMatrix& psi) -> std::optional<IsoWitness> {
        if (!a.rep.lie.is_automorphism(psi, tol)) return std::nullopt;
        auto w = solve_for_psi(a, b, psi, rng, tol);
        if (w && accept(*w)) return w;
        return std::nullopt;
    };

    if (a.rep.lie.is_abelian(tol.eps)) {
        try {
            const RealMatrix wa = joint_weights(a.rep, rng, tol);
            const RealMatrix wb = joint_weights(b.rep, rng, tol);
            for (const auto& psi : weight_matchings(wa, wb, budget - std::min(budget, trials), tol)) {
                if (trials++ >= budget) break;
                if (auto w = attempt(psi)) return w;
            }
        } catch (const Error&) {
        }
    }

    const RealMatrix ga = trace_gram(a.rep);
    const RealMatrix gb = trace_gram(b.rep);
    const Eigen::SelfAdjointEigenSolver<RealMatrix> ea(ga), eb(gb);
    const bool whiten = ea.eigenvalues().minCoeff() > 0.0 && eb.eigenvalues().minCoeff() > 0.0;
    const RealMatrix left = whiten ? RealMatrix(ea.operatorInverseSqrt()) : RealMatrix::Identity(n, n);
    const RealMatrix right = whiten ? RealMatrix(eb.operatorSqrt()) : RealMatrix::Identity(n, n);
    const auto structured = signed_permutations(n, budget);

    for (std::size_t t = 0; trials < budget; ++t, ++trials) {
        const RealMatrix o = t < structured.size() ? structured[t] : random_orthogonal(n, rng);
        // psi^T G_a psi = G_b is necessary; psi = G_a^{-1/2} O G_b^{1/2} parametrizes it.
        if (auto w = attempt(RealMatrix(left * o * right))) return w;
    }
    return std::nullopt;
}

}  // namespace realcalc
