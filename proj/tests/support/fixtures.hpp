#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <vector>

#include "realcalc/calculus.hpp"
#include "realcalc/lie_rep.hpp"
#include "realcalc/matrix_core.hpp"

namespace fixtures {

using realcalc::CalculusInstance;
using realcalc::Complex;
using realcalc::ComplexMatrix;
using realcalc::kI;
using realcalc::RowVector;

inline ComplexMatrix diag(std::initializer_list<Complex> d) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (const auto& z : d) {
        m(i, i) = z;
        ++i;
    }
    return m;
}

inline ComplexMatrix diag(const std::vector<Complex>& d) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return m;
}

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    ComplexMatrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (const auto& z : row) m(i, j++) = z;
        ++i;
    }
    return m;
}

inline RowVector row(std::initializer_list<Complex> v) {
    RowVector r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (const auto& z : v) r(i++) = z;
    return r;
}

/// Abelian rep with the given generators.
inline realcalc::MatrixRep abelian_rep(std::vector<ComplexMatrix> dhat) {
    realcalc::MatrixRep rep;
    rep.lie = realcalc::LieAlgebraSpec(dhat.size());
    rep.N = static_cast<std::size_t>(dhat.front().rows());
    rep.dhat = std::move(dhat);
    return rep;
}

/// (Mat(N), <d>, C^N, phi) with phi(d) = v.
inline CalculusInstance line(const ComplexMatrix& d, const RowVector& v) {
    return CalculusInstance{abelian_rep({d}), 1, {v}};
}

/// Aligned (C^N)^n: phi(d_i) = alphas[i] v0 in slot i.
inline CalculusInstance aligned(std::vector<ComplexMatrix> dhat, const RowVector& v0, const std::vector<double>& alphas) {
    const std::size_t n = dhat.size();
    const auto N = v0.size();
    CalculusInstance c{abelian_rep(std::move(dhat)), n, {}};
    for (std::size_t i = 0; i < n; ++i) {
        RowVector p = RowVector::Zero(static_cast<Eigen::Index>(n) * N);
        p.segment(static_cast<Eigen::Index>(i) * N, N) = alphas[i] * v0;
        c.phi.push_back(p);
    }
    return c;
}

/// su(2) in the spin-1/2 representation: [d_1, d_2] = d_3 and cyclic.
inline realcalc::MatrixRep su2_rep() {
    const ComplexMatrix s1 = mat({{0, 1}, {1, 0}});
    const ComplexMatrix s2 = mat({{0, -kI}, {kI, 0}});
    const ComplexMatrix s3 = mat({{1, 0}, {0, -1}});
    std::vector<double> c(27, 0.0);
    const auto set = [&](int i, int j, int k, double v) { c[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = v; };
    set(0, 1, 2, 1.0), set(1, 0, 2, -1.0);
    set(1, 2, 0, 1.0), set(2, 1, 0, -1.0);
    set(2, 0, 1, 1.0), set(0, 2, 1, -1.0);
    realcalc::MatrixRep rep;
    rep.lie = realcalc::LieAlgebraSpec(3, c);
    rep.N = 2;
    rep.dhat = {ComplexMatrix(-0.5 * kI * s1), ComplexMatrix(-0.5 * kI * s2), ComplexMatrix(-0.5 * kI * s3)};
    return rep;
}

// --- random data ---------------------------------------------------------------

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline ComplexMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g;
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = Complex{g(rng), g(rng)};
    return m;
}

inline RowVector random_row(Rng& rng, Eigen::Index n) { return random_complex(rng, 1, n); }

inline ComplexMatrix random_unitary(Rng& rng, Eigen::Index n) {
    const Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(rng, n, n));
    return qr.householderQ();
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n) {
    const ComplexMatrix a = random_complex(rng, n, n);
    return 0.5 * (a + a.adjoint());
}

/// Random trace-free anti-hermitian matrix.
inline ComplexMatrix random_anti_hermitian(Rng& rng, Eigen::Index n) {
    ComplexMatrix a = kI * random_hermitian(rng, n);
    a -= (a.trace() / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
    return a;
}

/// Imaginary parts of a trace-free spectrum with k distinct values and the given
/// multiplicities, in descending order (listed with multiplicity).
inline std::vector<double> random_spectrum(Rng& rng, const std::vector<std::size_t>& mult, bool symmetric) {
    const std::size_t k = mult.size();
    std::vector<double> values(k);
    if (symmetric) {
        for (std::size_t j = 0; j < k / 2; ++j) values[j] = static_cast<double>(k / 2 - j) + uniform(rng, 0.1, 0.4);
        for (std::size_t j = 0; j < k / 2; ++j) values[k - 1 - j] = -values[j];
        if (k % 2 == 1) values[k / 2] = 0.0;
    } else {
        // distinct values, then shift so that the weighted sum vanishes
        double x = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            x -= uniform(rng, 0.5, 1.5);
            values[j] = x;
        }
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < k; ++j) {
            total += values[j] * static_cast<double>(mult[j]);
            count += mult[j];
        }
        for (auto& v : values) v -= total / static_cast<double>(count);
        std::sort(values.begin(), values.end(), std::greater<>());
    }
    std::vector<double> out;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < mult[j]; ++r) out.push_back(values[j]);
    return out;
}

inline ComplexMatrix imaginary_diag(const std::vector<double>& im) {
    std::vector<Complex> d;
    for (double x : im) d.emplace_back(0.0, x);
    return diag(d);
}

}  // namespace fixtures
