#include "qcl/gates.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcl::gates {

namespace {
const cplx kI{0.0, 1.0};

Matrix diag(std::initializer_list<cplx> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (cplx x : d) v(i++) = x;
  return v.asDiagonal();
}
}  // namespace

Matrix I() { return Matrix::Identity(2, 2); }

Matrix X() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix Y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Matrix Z() { return diag({1, -1}); }

Matrix H() {
  Matrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::numbers::sqrt2;
}

Matrix S() { return diag({1, kI}); }

Matrix T() { return diag({1, std::polar(1.0, std::numbers::pi / 4)}); }

Matrix CX() {
  Matrix m = Matrix::Identity(4, 4);
  m.block(2, 2, 2, 2) = X();
  return m;
}

Matrix CZ() { return diag({1, 1, 1, -1}); }

Matrix SWAP() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 1;
  m(1, 2) = m(2, 1) = 1;
  return m;
}

Matrix Toffoli() {
  Matrix m = Matrix::Identity(8, 8);
  m.block(6, 6, 2, 2) = X();
  return m;
}

Matrix CCZ() { return diag({1, 1, 1, 1, 1, 1, 1, -1}); }

Matrix named(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::toupper(c); });
  if (key == "I") return I();
  if (key == "X") return X();
  if (key == "Y") return Y();
  if (key == "Z") return Z();
  if (key == "H") return H();
  if (key == "S") return S();
  if (key == "T") return T();
  if (key == "CX" || key == "CNOT") return CX();
  if (key == "CZ") return CZ();
  if (key == "SWAP") return SWAP();
  if (key == "TOFFOLI" || key == "TOFF" || key == "CCX") return Toffoli();
  if (key == "CCZ") return CCZ();
  throw std::invalid_argument(fmt::format("unknown gate '{}'", name));
}

std::vector<std::string> names() {
  return {"I", "X", "Y", "Z", "H", "S", "T", "CX", "CZ", "SWAP", "Toffoli", "CCZ"};
}

DenseOperator embed(const Matrix& gate, std::span<const int> targets, int n) {
  const int k = static_cast<int>(targets.size());
  if (gate.rows() != (Eigen::Index{1} << k)) throw std::invalid_argument("gate size does not match targets");
  if (k > n) throw std::invalid_argument("more targets than qubits");
  DenseOperator full = tensor(DenseOperator(k, gate), DenseOperator::identity(n - k));
  std::vector<int> perm(n, -1);
  std::vector<bool> used(n, false);
  for (int j = 0; j < k; ++j) {
    if (targets[j] < 0 || targets[j] >= n) throw std::out_of_range("gate target out of range");
    if (used[targets[j]]) throw std::invalid_argument("repeated gate target");
    perm[j] = targets[j];
    used[targets[j]] = true;
  }
  int next = 0;
  for (int j = k; j < n; ++j) {
    while (used[next]) ++next;
    perm[j] = next;
    used[next] = true;
  }
  return permute_qubits(full, perm);
}

}  // namespace qcl::gates
