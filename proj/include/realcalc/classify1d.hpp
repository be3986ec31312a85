#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "realcalc/calculus.hpp"
#include "realcalc/matrix_core.hpp"

namespace realcalc {

/// Which eigenblock segments of phi(d) are nonzero, indexed by descending eigenvalue.
struct ZeroPattern {
    std::vector<std::uint8_t> bits;

    [[nodiscard]] std::size_t size() const { return bits.size(); }
    [[nodiscard]] ZeroPattern reversed() const;
    [[nodiscard]] bool is_palindrome() const;
    [[nodiscard]] bool any() const;
    /// e.g. "(1,0,1)"
    [[nodiscard]] std::string to_string() const;

    auto operator<=>(const ZeroPattern&) const = default;
};

/// Real scalars mu != 0 with spec(Db) = mu * spec(Da) as multisets, ascending.
struct QuasiEquivalence1D {
    std::vector<double> mu_candidates;

    [[nodiscard]] bool empty() const { return mu_candidates.empty(); }
    [[nodiscard]] bool has_positive() const;
    [[nodiscard]] bool has_negative() const;
};

/// Largest k accepted by enumerate_classes.
inline constexpr std::size_t kMaxEnumerationK = 24;

/// True iff the spectrum is symmetric under negation (D similar to -D). Throws
/// NotAntiHermitianError / ArgumentError when D is not trace-free anti-hermitian.
[[nodiscard]] bool anti_selfsimilar(const ComplexMatrix& d, const Tolerance& tol = {});
[[nodiscard]] bool anti_selfsimilar(const SpectrumBlocks& spectrum, const Tolerance& tol = {});

/// Zero pattern of phi(d) for a canonical (diagonal, descending) calculus with
/// dim g = 1 and module C^N. Throws NonCanonicalError for other input.
[[nodiscard]] ZeroPattern zero_pattern(const CalculusInstance& c, const Tolerance& tol = {});

/// Segment-wise pattern of v against the given block structure.
[[nodiscard]] ZeroPattern zero_pattern(const RowVector& v, const SpectrumBlocks& spectrum, const Tolerance& tol = {});

/// Throws DegenerateError for a zero matrix and ShapeError for size mismatch.
[[nodiscard]] QuasiEquivalence1D quasi_equivalent_1d(const ComplexMatrix& da, const ComplexMatrix& db,
                                                     const Tolerance& tol = {});

/// Complete isomorphism test for calculi (Mat(N), <d>_D, C^N, phi).
[[nodiscard]] bool is_isomorphic_1d(const CalculusInstance& a, const CalculusInstance& b, const Tolerance& tol = {});

/// Number of isomorphism classes for k distinct eigenvalues. Throws ArgumentError
/// for k = 0 and ResourceError when the count does not fit in 64 bits.
[[nodiscard]] std::uint64_t count_classes(std::size_t k, bool anti);

/// Representative of the class of `pattern`: itself, or the lexicographically
/// smaller of pattern and its reversal when anti.
[[nodiscard]] ZeroPattern class_representative(const ZeroPattern& pattern, bool anti);

/// One representative per isomorphism class, sorted lexicographically.
/// Throws ArgumentError for k = 0 and ResourceError for k > kMaxEnumerationK.
[[nodiscard]] std::vector<ZeroPattern> enumerate_classes(std::size_t k, bool anti);

}  // namespace realcalc
