#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qcl/pauli.hpp"

namespace qcl {

struct LogicalPair {
  PauliString x;
  PauliString z;
};

// k = 1 stabilizer group with a chosen logical pair.
class StabilizerGroup {
 public:
  StabilizerGroup() = default;
  // Derives the logical pair with logical_operators().
  explicit StabilizerGroup(std::vector<PauliString> generators);
  StabilizerGroup(std::vector<PauliString> generators, PauliString logical_x, PauliString logical_z);

  static StabilizerGroup parse(std::span<const std::string> generators);

  int num_qubits() const { return n_; }
  const std::vector<PauliString>& generators() const { return gens_; }
  const PauliString& logical_x() const { return lx_; }
  const PauliString& logical_z() const { return lz_; }

  // Element of the group with its exact phase.
  bool contains(const PauliString& p) const;
  // Letters lie in the GF(2) span of the generators (phase ignored).
  bool in_span(const PauliString& p) const;
  bool in_normalizer(const PauliString& p) const;
  // Product of the generators selected by bit i of `mask`, in generator order.
  PauliString element(std::uint64_t mask) const;

 private:
  int n_ = 0;
  std::vector<PauliString> gens_;
  PauliString lx_;
  PauliString lz_;
};

// Minimum-weight representatives of the two logical cosets. logical_z is the
// coset holding a pure Z-type element when one exists; logical_x prefers X-type.
LogicalPair logical_operators(std::span<const PauliString> generators);
LogicalPair logical_operators(const StabilizerGroup& s);

// Lowest-weight element of p times the group (ties: type preference, then letters).
PauliString min_weight_representative(const StabilizerGroup& s, const PauliString& p, char prefer = 0);

int code_distance(const StabilizerGroup& s);

bool is_cleanable(const StabilizerGroup& s, std::span<const int> region);
PauliString clean_operator(const StabilizerGroup& s, const PauliString& p, std::span<const int> region);

// |0_L> from projecting onto the +1 eigenspace of generators and logical_z;
// |1_L> = logical_x |0_L>.
std::pair<Vector, Vector> codewords(const StabilizerGroup& s);

std::uint64_t region_mask(int n, std::span<const int> region);

}  // namespace qcl
