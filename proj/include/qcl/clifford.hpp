#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qcl/pauli.hpp"
#include "qcl/stabilizer.hpp"

namespace qcl {

inline constexpr int kMaxCliffordQubits = 4;
inline constexpr int kMaxCliffordLevel = 4;

// Throws on non-unitary or mismatched inputs.
DenseOperator group_commutator(const DenseOperator& a, const DenseOperator& b);

struct PauliMatch {
  PauliString pauli;  // letters with the phase that makes it a 4th root of unity, if any
  cplx global_phase;  // u = global_phase * letters
};

// The Pauli that u equals up to a global phase, if any.
std::optional<PauliMatch> match_pauli(const Matrix& u, double tol);

// Smallest k <= max_k with u in C_k, or nothing if u lies beyond max_k.
std::optional<int> clifford_level(const DenseOperator& u, int max_k = kMaxCliffordLevel);

struct CommutatorCheck {
  int unitary_index = 0;
  char logical = 'X';
  PauliString cleaned;
  Matrix logical_action;  // 2x2 action of [U, cleaned] on the logical basis
  bool preserves_codespace = false;
  bool is_scalar = false;
  cplx scalar{0.0, 0.0};
  // 0 for scalars, otherwise the hierarchy level of the logical action.
  std::optional<int> level;
};

struct TransversalLevelReport {
  int bound = 0;
  std::vector<CommutatorCheck> checks;
  bool all_passed() const;
};

// Level bound |partition| - 1 for logical gates transversal over the
// partition, plus the commutator mechanic checked on each supplied unitary:
// [U, P'] with P' a logical Pauli cleaned off the last subset must act on the
// codespace within one level below the bound.
TransversalLevelReport transversal_level_bound(const StabilizerGroup& s,
                                               std::span<const std::vector<int>> partition,
                                               std::span<const DenseOperator> transversal_logicals = {});

}  // namespace qcl
