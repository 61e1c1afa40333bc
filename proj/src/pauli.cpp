#include "qcl/pauli.hpp"

#include <fmt/format.h>

#include <bit>
#include <stdexcept>

namespace qcl {

namespace {

const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::uint64_t full_mask(int n) { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Exponent g with P1 * P2 = i^g * P3 for single-qubit letters.
int letter_product_exponent(bool x1, bool z1, bool x2, bool z2) {
  if (!x1 && !z1) return 0;
  if (x1 && z1) return static_cast<int>(z2) - static_cast<int>(x2);
  if (x1) return static_cast<int>(z2) * (2 * static_cast<int>(x2) - 1);
  return static_cast<int>(x2) * (1 - 2 * static_cast<int>(z2));
}

}  // namespace

PauliString::PauliString(int num_qubits) : PauliString(num_qubits, 0, 0, 0) {}

PauliString::PauliString(int num_qubits, std::uint64_t x_bits, std::uint64_t z_bits, int phase_exponent)
    : n_(num_qubits), x_(x_bits), z_(z_bits), k_(((phase_exponent % 4) + 4) % 4) {
  if (n_ < 0 || n_ > 64) throw std::invalid_argument(fmt::format("Pauli length {} outside [0,64]", n_));
  if ((x_ | z_) & ~full_mask(n_)) throw std::invalid_argument("Pauli bits beyond the qubit count");
}

PauliString PauliString::parse(std::string_view text) {
  int k = 0;
  if (text.starts_with("+i")) {
    k = 1;
    text.remove_prefix(2);
  } else if (text.starts_with("-i")) {
    k = 3;
    text.remove_prefix(2);
  } else if (text.starts_with('+')) {
    text.remove_prefix(1);
  } else if (text.starts_with('-')) {
    k = 2;
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty Pauli string");
  if (text.size() > 64) throw std::invalid_argument("Pauli strings are limited to 64 qubits");
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (std::size_t q = 0; q < text.size(); ++q) {
    const std::uint64_t b = std::uint64_t{1} << q;
    switch (text[q]) {
      case 'I': break;
      case 'X': x |= b; break;
      case 'Y': x |= b; z |= b; break;
      case 'Z': z |= b; break;
      default:
        throw std::invalid_argument(fmt::format("bad Pauli letter '{}' at position {}", text[q], q));
    }
  }
  return {static_cast<int>(text.size()), x, z, k};
}

PauliString PauliString::single(int num_qubits, int qubit, char letter) {
  if (qubit < 0 || qubit >= num_qubits) throw std::out_of_range("Pauli qubit out of range");
  const std::uint64_t b = std::uint64_t{1} << qubit;
  switch (letter) {
    case 'I': return PauliString(num_qubits);
    case 'X': return {num_qubits, b, 0};
    case 'Y': return {num_qubits, b, b};
    case 'Z': return {num_qubits, 0, b};
    default: throw std::invalid_argument(fmt::format("bad Pauli letter '{}'", letter));
  }
}

cplx PauliString::phase() const { return kPhases[k_]; }

char PauliString::letter(int q) const {
  const bool x = (x_ >> q) & 1U;
  const bool z = (z_ >> q) & 1U;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

int PauliString::weight() const { return std::popcount(support()); }

std::string PauliString::str() const {
  static const char* prefix[4] = {"", "+i", "-", "-i"};
  std::string out = prefix[k_];
  for (int q = 0; q < n_; ++q) out.push_back(letter(q));
  return out;
}

Vector PauliString::apply(const Vector& v) const {
  if (v.size() != (Eigen::Index{1} << n_)) throw std::invalid_argument("Pauli applied to wrong-sized vector");
  const std::uint64_t xm = to_index_mask(n_, x_);
  const std::uint64_t zm = to_index_mask(n_, z_);
  const cplx lead = kPhases[(k_ + std::popcount(x_ & z_)) % 4];
  Vector out(v.size());
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(v.size()); ++b) {
    const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(b ^ xm)) = lead * sign * v(static_cast<Eigen::Index>(b));
  }
  return out;
}

cplx PauliString::sandwich(const Vector& bra, const Vector& ket) const {
  if (bra.size() != ket.size() || ket.size() != (Eigen::Index{1} << n_)) {
    throw std::invalid_argument("Pauli sandwich on wrong-sized vectors");
  }
  const std::uint64_t xm = to_index_mask(n_, x_);
  const std::uint64_t zm = to_index_mask(n_, z_);
  cplx acc = 0.0;
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(ket.size()); ++b) {
    const cplx term = std::conj(bra(static_cast<Eigen::Index>(b ^ xm))) * ket(static_cast<Eigen::Index>(b));
    acc += (std::popcount(b & zm) & 1) ? -term : term;
  }
  return kPhases[(k_ + std::popcount(x_ & z_)) % 4] * acc;
}

Matrix PauliString::to_matrix() const {
  check_density_cap(n_);
  const Eigen::Index d = Eigen::Index{1} << n_;
  const std::uint64_t xm = to_index_mask(n_, x_);
  const std::uint64_t zm = to_index_mask(n_, z_);
  const cplx lead = kPhases[(k_ + std::popcount(x_ & z_)) % 4];
  Matrix m = Matrix::Zero(d, d);
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(d); ++b) {
    const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) = lead * sign;
  }
  return m;
}

DenseOperator PauliString::to_dense() const { return {n_, to_matrix()}; }

PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument(
        fmt::format("Pauli length mismatch: {} vs {}", a.num_qubits(), b.num_qubits()));
  }
  int k = a.phase_exponent() + b.phase_exponent();
  const std::uint64_t touched = a.support() & b.support();
  for (int q = 0; q < a.num_qubits(); ++q) {
    if (!((touched >> q) & 1U)) continue;
    k += letter_product_exponent((a.x_bits() >> q) & 1U, (a.z_bits() >> q) & 1U, (b.x_bits() >> q) & 1U,
                                 (b.z_bits() >> q) & 1U);
  }
  return {a.num_qubits(), a.x_bits() ^ b.x_bits(), a.z_bits() ^ b.z_bits(), k};
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument(
        fmt::format("Pauli length mismatch: {} vs {}", a.num_qubits(), b.num_qubits()));
  }
  return ((std::popcount(a.x_bits() & b.z_bits()) + std::popcount(a.z_bits() & b.x_bits())) & 1) == 0;
}

}  // namespace qcl
