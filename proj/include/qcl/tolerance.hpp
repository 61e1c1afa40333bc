#pragma once

namespace qcl::tol {

// Structural checks: hermiticity, unitarity, orthonormality of basis vectors.
inline constexpr double kStructural = 1e-10;
// End-to-end equalities: logical action, recovery fidelity, KL conditions.
inline constexpr double kEndToEnd = 1e-9;
// Second Schmidt coefficient below this means a product state.
inline constexpr double kSchmidt = 1e-9;
// Eigenvalues above this count toward the numerical rank.
inline constexpr double kRank = 1e-10;
// Exact algebraic identities (gate commutators, trace preservation).
inline constexpr double kExact = 1e-12;

}  // namespace qcl::tol
