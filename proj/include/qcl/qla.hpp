#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qcl {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxStateQubits = 22;
inline constexpr int kMaxDensityQubits = 12;

// Index bit holding qubit q of an n-qubit register (qubit 0 is most significant).
inline std::uint64_t qubit_bit(int n, int q) { return std::uint64_t{1} << (n - 1 - q); }

// Converts a mask with bit q <-> qubit q into a basis-index mask.
std::uint64_t to_index_mask(int n, std::uint64_t qubit_mask);

void check_state_cap(int n);
void check_density_cap(int n);

// Number of qubits for a power-of-two dimension; throws otherwise.
int qubits_for_dim(Eigen::Index dim);

class DenseState {
 public:
  DenseState() : n_(0), amps_(Vector::Ones(1)) {}
  DenseState(int num_qubits, Vector amplitudes);
  static DenseState basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return n_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  Vector& amplitudes() { return amps_; }
  double norm() const { return amps_.norm(); }

 private:
  int n_;
  Vector amps_;
};

class DenseOperator {
 public:
  DenseOperator() : n_(0), m_(Matrix::Identity(1, 1)) {}
  DenseOperator(int num_qubits, Matrix entries);
  explicit DenseOperator(Matrix entries);

  static DenseOperator identity(int num_qubits);
  static DenseOperator maximally_mixed(int num_qubits);
  static DenseOperator projector(const DenseState& psi);

  int num_qubits() const { return n_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  DenseOperator adjoint() const { return {n_, m_.adjoint()}; }
  cplx trace() const { return m_.trace(); }

  bool is_hermitian(double tol) const;
  bool is_unitary(double tol) const;
  bool is_density(double tol) const;

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator*(cplx s, const DenseOperator& a) { return {a.n_, s * a.m_}; }

 private:
  int n_;
  Matrix m_;
};

DenseState tensor(const DenseState& a, const DenseState& b);
DenseOperator tensor(const DenseOperator& a, const DenseOperator& b);
Matrix kron(const Matrix& a, const Matrix& b);

// perm[i] is the position qubit i moves to.
DenseState permute_qubits(const DenseState& s, std::span<const int> perm);
DenseOperator permute_qubits(const DenseOperator& op, std::span<const int> perm);

// Keeps the listed qubits; the result's qubit j is keep[j].
DenseOperator partial_trace(const DenseOperator& rho, std::span<const int> keep);
DenseOperator reduced_density(const DenseState& psi, std::span<const int> keep);

// Applies a k-qubit gate to the listed qubits in place; qubits[0] is the
// gate's most significant factor.
void apply_gate(DenseState& s, const Matrix& gate, std::span<const int> qubits);
void apply_gate(Vector& amps, int n, const Matrix& gate, std::span<const int> qubits);

// Mode product on a vector viewed as a tensor with the given mode dimensions
// (mode 0 most significant). Replaces dims[mode] with m.rows().
Vector apply_mode(const Vector& v, std::span<const Eigen::Index> dims, int mode, const Matrix& m);

double trace_norm(const Matrix& a);
double trace_distance(const DenseOperator& a, const DenseOperator& b);
double purity(const DenseOperator& rho);
double fidelity(const DenseState& psi, const DenseOperator& rho);
int numerical_rank(const DenseOperator& rho, double tol);
Eigen::VectorXd hermitian_eigenvalues(const Matrix& h);
double binary_entropy(double p);

// Group commutator U P U^dagger P^dagger.
Matrix group_commutator(const Matrix& u, const Matrix& p);

DenseState random_state(int num_qubits, std::mt19937_64& rng);
DenseOperator random_unitary(int num_qubits, std::mt19937_64& rng);
DenseOperator random_density(int num_qubits, int rank, std::mt19937_64& rng);

}  // namespace qcl
