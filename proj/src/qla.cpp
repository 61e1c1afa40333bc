#include "qcl/qla.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qcl/errors.hpp"
#include "qcl/tolerance.hpp"

namespace qcl {

std::uint64_t to_index_mask(int n, std::uint64_t qubit_mask) {
  std::uint64_t out = 0;
  for (int q = 0; q < n; ++q) {
    if ((qubit_mask >> q) & 1U) out |= qubit_bit(n, q);
  }
  return out;
}

void check_state_cap(int n) {
  if (n < 0) throw std::invalid_argument("negative qubit count");
  if (n > kMaxStateQubits) {
    throw CapExceeded(fmt::format("state on {} qubits exceeds the dense cap of {}", n, kMaxStateQubits));
  }
}

void check_density_cap(int n) {
  if (n < 0) throw std::invalid_argument("negative qubit count");
  if (n > kMaxDensityQubits) {
    throw CapExceeded(
        fmt::format("operator on {} qubits exceeds the dense cap of {}", n, kMaxDensityQubits));
  }
}

int qubits_for_dim(Eigen::Index dim) {
  if (dim < 1 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw std::invalid_argument(fmt::format("dimension {} is not a power of two", dim));
  }
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

DenseState::DenseState(int num_qubits, Vector amplitudes) : n_(num_qubits), amps_(std::move(amplitudes)) {
  check_state_cap(n_);
  if (amps_.size() != (Eigen::Index{1} << n_)) {
    throw std::invalid_argument(
        fmt::format("state has {} amplitudes, expected 2^{}", amps_.size(), n_));
  }
}

DenseState DenseState::basis(int num_qubits, std::uint64_t index) {
  check_state_cap(num_qubits);
  Vector v = Vector::Zero(Eigen::Index{1} << num_qubits);
  if (index >= static_cast<std::uint64_t>(v.size())) throw std::out_of_range("basis index");
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {num_qubits, std::move(v)};
}

DenseOperator::DenseOperator(int num_qubits, Matrix entries) : n_(num_qubits), m_(std::move(entries)) {
  check_density_cap(n_);
  const Eigen::Index d = Eigen::Index{1} << n_;
  if (m_.rows() != d || m_.cols() != d) {
    throw std::invalid_argument(
        fmt::format("operator is {}x{}, expected {}x{}", m_.rows(), m_.cols(), d, d));
  }
}

DenseOperator::DenseOperator(Matrix entries) : n_(qubits_for_dim(entries.rows())), m_(std::move(entries)) {
  check_density_cap(n_);
  if (m_.cols() != m_.rows()) throw std::invalid_argument("operator matrix is not square");
}

DenseOperator DenseOperator::identity(int num_qubits) {
  check_density_cap(num_qubits);
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return {num_qubits, Matrix::Identity(d, d)};
}

DenseOperator DenseOperator::maximally_mixed(int num_qubits) {
  check_density_cap(num_qubits);
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return {num_qubits, Matrix::Identity(d, d) / static_cast<double>(d)};
}

DenseOperator DenseOperator::projector(const DenseState& psi) {
  return {psi.num_qubits(), psi.amplitudes() * psi.amplitudes().adjoint()};
}

bool DenseOperator::is_hermitian(double tol) const { return (m_ - m_.adjoint()).norm() <= tol; }

bool DenseOperator::is_unitary(double tol) const {
  return (m_.adjoint() * m_ - Matrix::Identity(dim(), dim())).norm() <= tol;
}

bool DenseOperator::is_density(double tol) const {
  if (!is_hermitian(tol)) return false;
  if (std::abs(trace() - cplx(1.0)) > tol) return false;
  return hermitian_eigenvalues(m_).minCoeff() >= -tol;
}

namespace {
void require_same_size(const DenseOperator& a, const DenseOperator& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument(
        fmt::format("operator sizes differ: {} vs {} qubits", a.num_qubits(), b.num_qubits()));
  }
}
}  // namespace

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  require_same_size(a, b);
  return {a.n_, a.m_ * b.m_};
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  require_same_size(a, b);
  return {a.n_, a.m_ + b.m_};
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  require_same_size(a, b);
  return {a.n_, a.m_ - b.m_};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DenseState tensor(const DenseState& a, const DenseState& b) {
  const int n = a.num_qubits() + b.num_qubits();
  check_state_cap(n);
  Vector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  }
  return {n, std::move(out)};
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
  const int n = a.num_qubits() + b.num_qubits();
  check_density_cap(n);
  return {n, kron(a.matrix(), b.matrix())};
}

namespace {

void validate_perm(std::span<const int> perm, int n) {
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument(fmt::format("permutation has {} entries for {} qubits", perm.size(), n));
  }
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("not a permutation of the qubits");
    seen[p] = true;
  }
}

std::vector<std::uint64_t> index_map(std::span<const int> perm, int n) {
  std::vector<std::uint64_t> out(std::size_t{1} << n);
  for (std::uint64_t b = 0; b < out.size(); ++b) {
    std::uint64_t t = 0;
    for (int q = 0; q < n; ++q) {
      if (b & qubit_bit(n, q)) t |= qubit_bit(n, perm[q]);
    }
    out[b] = t;
  }
  return out;
}

void validate_subset(std::span<const int> qubits, int n) {
  std::vector<bool> seen(n, false);
  for (int q : qubits) {
    if (q < 0 || q >= n) throw std::out_of_range(fmt::format("qubit {} out of range for {} qubits", q, n));
    if (seen[q]) throw std::invalid_argument(fmt::format("qubit {} listed twice", q));
    seen[q] = true;
  }
}

}  // namespace

DenseState permute_qubits(const DenseState& s, std::span<const int> perm) {
  const int n = s.num_qubits();
  validate_perm(perm, n);
  const auto map = index_map(perm, n);
  Vector out(s.dim());
  for (std::size_t b = 0; b < map.size(); ++b) out(static_cast<Eigen::Index>(map[b])) = s.amplitudes()(b);
  return {n, std::move(out)};
}

DenseOperator permute_qubits(const DenseOperator& op, std::span<const int> perm) {
  const int n = op.num_qubits();
  validate_perm(perm, n);
  const auto map = index_map(perm, n);
  Matrix out(op.dim(), op.dim());
  for (std::size_t c = 0; c < map.size(); ++c) {
    for (std::size_t r = 0; r < map.size(); ++r) {
      out(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) = op.matrix()(r, c);
    }
  }
  return {n, std::move(out)};
}

namespace {

// Full-register index offsets for every assignment of the listed qubits.
std::vector<std::uint64_t> offsets(int n, std::span<const int> qubits) {
  const int k = static_cast<int>(qubits.size());
  std::vector<std::uint64_t> out(std::size_t{1} << k, 0);
  for (std::uint64_t a = 0; a < out.size(); ++a) {
    std::uint64_t idx = 0;
    for (int j = 0; j < k; ++j) {
      if (a & qubit_bit(k, j)) idx |= qubit_bit(n, qubits[j]);
    }
    out[a] = idx;
  }
  return out;
}

std::vector<int> complement(int n, std::span<const int> qubits) {
  std::vector<bool> in(n, false);
  for (int q : qubits) in[q] = true;
  std::vector<int> out;
  for (int q = 0; q < n; ++q) {
    if (!in[q]) out.push_back(q);
  }
  return out;
}

}  // namespace

DenseOperator partial_trace(const DenseOperator& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  validate_subset(keep, n);
  const auto keep_off = offsets(n, keep);
  const auto rest = complement(n, keep);
  const auto rest_off = offsets(n, rest);
  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index c = 0; c < dk; ++c) {
    for (Eigen::Index r = 0; r < dk; ++r) {
      cplx acc = 0.0;
      for (std::uint64_t t : rest_off) {
        acc += m(static_cast<Eigen::Index>(keep_off[r] | t), static_cast<Eigen::Index>(keep_off[c] | t));
      }
      out(r, c) = acc;
    }
  }
  return {static_cast<int>(keep.size()), std::move(out)};
}

DenseOperator reduced_density(const DenseState& psi, std::span<const int> keep) {
  const int n = psi.num_qubits();
  validate_subset(keep, n);
  check_density_cap(static_cast<int>(keep.size()));
  const auto keep_off = offsets(n, keep);
  const auto rest_off = offsets(n, complement(n, keep));
  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  const auto dr = static_cast<Eigen::Index>(rest_off.size());
  // Columns index the kept register, rows the traced one.
  Matrix a(dr, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index t = 0; t < dr; ++t) {
      a(t, r) = psi.amplitudes()(static_cast<Eigen::Index>(keep_off[r] | rest_off[t]));
    }
  }
  Matrix rho = a.transpose() * a.conjugate();
  return {static_cast<int>(keep.size()), std::move(rho)};
}

void apply_gate(Vector& amps, int n, const Matrix& gate, std::span<const int> qubits) {
  validate_subset(qubits, n);
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index dk = Eigen::Index{1} << k;
  if (gate.rows() != dk || gate.cols() != dk) {
    throw std::invalid_argument(fmt::format("gate is {}x{}, expected {}x{}", gate.rows(), gate.cols(), dk, dk));
  }
  if (amps.size() != (Eigen::Index{1} << n)) throw std::invalid_argument("amplitude count mismatch");
  const auto tgt = offsets(n, qubits);
  const auto rest = offsets(n, complement(n, qubits));
  Vector in(dk);
  for (std::uint64_t base : rest) {
    for (Eigen::Index a = 0; a < dk; ++a) in(a) = amps(static_cast<Eigen::Index>(base | tgt[a]));
    Vector out = gate * in;
    for (Eigen::Index a = 0; a < dk; ++a) amps(static_cast<Eigen::Index>(base | tgt[a])) = out(a);
  }
}

void apply_gate(DenseState& s, const Matrix& gate, std::span<const int> qubits) {
  apply_gate(s.amplitudes(), s.num_qubits(), gate, qubits);
}

Vector apply_mode(const Vector& v, std::span<const Eigen::Index> dims, int mode, const Matrix& m) {
  if (mode < 0 || mode >= static_cast<int>(dims.size())) throw std::out_of_range("mode");
  Eigen::Index total = 1;
  for (auto d : dims) total *= d;
  if (total != v.size()) throw std::invalid_argument("mode dimensions do not match vector size");
  if (m.cols() != dims[mode]) throw std::invalid_argument("mode operator has wrong column count");
  Eigen::Index outer = 1;
  for (int i = 0; i < mode; ++i) outer *= dims[i];
  Eigen::Index inner = 1;
  for (std::size_t i = mode + 1; i < dims.size(); ++i) inner *= dims[i];
  const Eigen::Index din = dims[mode];
  const Eigen::Index dout = m.rows();
  Vector out(outer * dout * inner);
  for (Eigen::Index o = 0; o < outer; ++o) {
    // Column-major block: rows are inner positions, columns are mode indices.
    Eigen::Map<const Matrix> block(v.data() + o * din * inner, inner, din);
    Eigen::Map<Matrix> dst(out.data() + o * dout * inner, inner, dout);
    dst.noalias() = block * m.transpose();
  }
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double trace_norm(const Matrix& a) {
  if (a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol::kStructural) {
    return hermitian_eigenvalues((a + a.adjoint()) / 2.0).cwiseAbs().sum();
  }
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double trace_distance(const DenseOperator& a, const DenseOperator& b) {
  return trace_norm((a - b).matrix());
}

double purity(const DenseOperator& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

double fidelity(const DenseState& psi, const DenseOperator& rho) {
  if (psi.num_qubits() != rho.num_qubits()) throw std::invalid_argument("fidelity size mismatch");
  return std::real(psi.amplitudes().dot(rho.matrix() * psi.amplitudes()));
}

int numerical_rank(const DenseOperator& rho, double tol) {
  const auto ev = hermitian_eigenvalues(rho.matrix());
  return static_cast<int>((ev.array() > tol).count());
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::domain_error(fmt::format("binary entropy of {} outside [0,1]", p));
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

Matrix group_commutator(const Matrix& u, const Matrix& p) {
  if (u.rows() != p.rows() || u.cols() != p.cols()) throw std::invalid_argument("commutator size mismatch");
  return u * p * u.adjoint() * p.adjoint();
}

DenseState random_state(int num_qubits, std::mt19937_64& rng) {
  check_state_cap(num_qubits);
  std::normal_distribution<double> g;
  Vector v(Eigen::Index{1} << num_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  v.normalize();
  return {num_qubits, std::move(v)};
}

DenseOperator random_unitary(int num_qubits, std::mt19937_64& rng) {
  check_density_cap(num_qubits);
  std::normal_distribution<double> g;
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  Matrix z(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) z(i, j) = cplx(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return {num_qubits, std::move(q)};
}

DenseOperator random_density(int num_qubits, int rank, std::mt19937_64& rng) {
  check_density_cap(num_qubits);
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  if (rank < 1 || rank > d) throw std::invalid_argument("density rank out of range");
  std::normal_distribution<double> g;
  Matrix a(d, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = cplx(g(rng), g(rng));
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  return {num_qubits, std::move(rho)};
}

}  // namespace qcl
