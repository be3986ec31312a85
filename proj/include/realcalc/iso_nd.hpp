#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "realcalc/calculus.hpp"
#include "realcalc/matrix_core.hpp"

namespace realcalc {

/// Claimed isomorphism (phi_U, psi, v -> v (X (x) U)) between two calculi with
/// module (C^N)^n. Column i of psi holds the coefficients of psi(d_i).
struct IsoWitness {
    ComplexMatrix U;
    RealMatrix psi;
    ComplexMatrix X;
};

/// Outcome of a witness check with the worst residual of each condition.
struct WitnessCheck {
    bool accepted = false;
    double conjugation_residual = 0.0;  ///< max_i |Dhat_b(d_i) - U^-1 Dhat_a(psi d_i) U|
    double anchor_residual = 0.0;       ///< max_i |phi_b(d_i) - phi_a(psi d_i)(X (x) U)|
    std::string failure;                ///< first failing condition, empty when accepted
};

/// Dhat_a(psi(d_i)) = sum_j psi(j, i) Dhat_a(d_j).
[[nodiscard]] ComplexMatrix rep_of_image(const MatrixRep& rep, const RealMatrix& psi, std::size_t i);

/// Conjugation condition of a quasi-equivalence realization, with checks that U is
/// invertible and psi is a Lie algebra automorphism.
[[nodiscard]] WitnessCheck check_compatible_pair(const MatrixRep& a, const MatrixRep& b, const ComplexMatrix& U,
                                                 const RealMatrix& psi, const Tolerance& tol = {});
[[nodiscard]] bool check_compatible_pair(const CalculusInstance& a, const CalculusInstance& b, const ComplexMatrix& U,
                                         const RealMatrix& psi, const Tolerance& tol = {});

/// Both conditions for calculi with module (C^N)^n. Throws UnsupportedError when
/// module_rank != dim g and ShapeError on mismatched shapes.
[[nodiscard]] WitnessCheck verify_isomorphism_witness(const CalculusInstance& a, const CalculusInstance& b,
                                                      const IsoWitness& w, const Tolerance& tol = {});
[[nodiscard]] bool check_isomorphism_witness(const CalculusInstance& a, const CalculusInstance& b,
                                             const IsoWitness& w, const Tolerance& tol = {});

/// Free calculi are isomorphic through any compatible pair; phi~ plays no role.
[[nodiscard]] bool check_free_isomorphism(const FreeCalculusInstance& a, const FreeCalculusInstance& b,
                                          const ComplexMatrix& U, const RealMatrix& psi, const Tolerance& tol = {});

/// Explicit witness for two isomorphic calculi with dim g = 1 and module C^N, built
/// from the block forms U_+ / U_- in canonical coordinates. Empty iff not isomorphic.
[[nodiscard]] std::optional<IsoWitness> construct_witness_1d(const CalculusInstance& a, const CalculusInstance& b,
                                                             const Tolerance& tol = {});

/// Bounded randomized search for a witness. Deterministic for a given seed. An empty
/// result does not prove the calculi non-isomorphic.
[[nodiscard]] std::optional<IsoWitness> search_witness(const CalculusInstance& a, const CalculusInstance& b,
                                                       std::size_t budget, std::uint64_t seed,
                                                       const Tolerance& tol = {});

}  // namespace realcalc
