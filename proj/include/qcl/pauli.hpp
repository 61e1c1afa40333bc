#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qcl/qla.hpp"

namespace qcl {

// Letter form i^k * P_0 ... P_{n-1} with Y = iXZ. Bit q of each mask is qubit q.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int num_qubits);
  PauliString(int num_qubits, std::uint64_t x_bits, std::uint64_t z_bits, int phase_exponent = 0);

  // Letters over {I,X,Y,Z} with an optional leading +, -, +i or -i.
  static PauliString parse(std::string_view text);
  static PauliString single(int num_qubits, int qubit, char letter);

  int num_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  std::uint64_t support() const { return x_ | z_; }
  // Phase is i^phase_exponent().
  int phase_exponent() const { return k_; }
  cplx phase() const;
  char letter(int q) const;
  int weight() const;
  bool is_identity() const { return support() == 0; }
  bool is_hermitian() const { return k_ % 2 == 0; }

  PauliString with_phase(int phase_exponent) const { return {n_, x_, z_, phase_exponent}; }
  // Same letters, phase dropped.
  PauliString letters_only() const { return {n_, x_, z_, 0}; }
  PauliString restricted(std::uint64_t qubit_mask) const { return {n_, x_ & qubit_mask, z_ & qubit_mask, 0}; }

  std::string str() const;
  DenseOperator to_dense() const;
  Matrix to_matrix() const;

  // P applied to an amplitude vector on num_qubits() qubits.
  Vector apply(const Vector& v) const;
  // <bra| P |ket>
  cplx sandwich(const Vector& bra, const Vector& ket) const;

  friend bool operator==(const PauliString& a, const PauliString& b) = default;

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int k_ = 0;
};

PauliString pauli_mul(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) { return pauli_mul(a, b); }
bool commutes(const PauliString& a, const PauliString& b);
inline int weight(const PauliString& a) { return a.weight(); }

// Fixed enumeration order: weight ascending, then support in lexicographic
// combination order, then letters X < Y < Z with the lowest qubit slowest.
template <class F>
void for_each_pauli_up_to_weight(int n, int max_weight, F&& f);

}  // namespace qcl

#include "qcl/pauli_enum.ipp"
