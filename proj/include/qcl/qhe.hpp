#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcl/codes.hpp"
#include "qcl/transversal.hpp"

namespace qcl {

// A code of length n + r split into n sent subsystems and r withheld ones.
struct QheParams {
  std::shared_ptr<const CodeSpace> code;
  std::vector<int> withheld;  // sorted
  std::vector<int> sent;      // sorted complement, size n
  int p = 1;
  int m = 1;
  int ancilla_count = 2;
  int fold = 1;
  int distance = 0;
  std::shared_ptr<const ErasureRecovery> recovery;

  int n() const { return static_cast<int>(sent.size()); }
  int r() const { return static_cast<int>(withheld.size()); }
  int code_length() const { return code->n_physical(); }
  // m * n * p
  long long server_qubits() const { return static_cast<long long>(m) * n() * p; }

  // Requires one withheld subsystem per subcode factor (default: the lowest
  // of each) and r < d.
  static QheParams create(std::shared_ptr<const CodeSpace> code, int p, int m,
                          std::optional<std::vector<int>> withheld = std::nullopt, int ancilla_count = 2);
  // No fold or distance checks; any withheld set, including none.
  static QheParams variant(std::shared_ptr<const CodeSpace> code, int p, int m, std::vector<int> withheld,
                           int ancilla_count = 0);
};

struct SecretKey {
  std::vector<int> s;  // entries in [1, m], one per sent subsystem
};

SecretKey keygen(const QheParams& params, std::uint64_t seed);

struct Ancilla {
  int label = 0;
  Vector state;  // one code block, all subsystems
};

// The joint state covers `rows` code blocks, block-major (qubit b*N + i is
// subsystem i of block b); withheld qubits stay client-side. Noise columns
// are symbolic.
struct QheCiphertext {
  std::vector<int> placements;  // column of array j, in [1, m]
  int rows = 0;
  Vector joint;
  std::vector<Ancilla> ancillas;
  long long noise_qubits = 0;
};

QheCiphertext encrypt(const QheParams& params, const SecretKey& key, const std::vector<int>& x);
// Bitstring helper: "0110".
std::vector<int> parse_bits(const std::string& bits);
std::string format_bits(const std::vector<int>& bits);

// Applies the gate's factors to the sent subsystems of the listed rows.
QheCiphertext evaluate(const QheParams& params, const QheCiphertext& ct, const ProductOperator& gate,
                       const std::vector<int>& rows);
QheCiphertext evaluate(const QheParams& params, const QheCiphertext& ct, const ProductOperator& gate);

// Moves ancilla `index` into the joint state as a new last row.
QheCiphertext absorb_ancilla(const QheCiphertext& ct, std::size_t index);

struct Decryption {
  std::vector<int> bits;
  double probability = 0.0;          // of the reported bits, given the recovered weight
  std::vector<double> distribution;  // over 2^rows logical outcomes, normalized
  double projection_weight = 0.0;    // trace left after recovery
};

// Throws KeyMismatch when the recovered weight falls below 1 - 1e-6.
Decryption decrypt(const QheParams& params, const QheCiphertext& ct, const SecretKey& key);

inline constexpr double kKeyMismatchWeight = 1e-6;

// Reduced state of the sent subsystems, qubit j*rows + l being subsystem
// sent[j] of row l.
DenseOperator sent_state(const QheParams& params, const QheCiphertext& ct);
// Embeds a sent state among maximally mixed noise: array j column c row l
// sits at position (j*m + c)*rows + l. Requires m*n*rows <= 12.
DenseOperator embed_server_view(const DenseOperator& sent, int n, int m, int rows,
                                const std::vector<int>& placements);
DenseOperator server_view(const QheParams& params, const QheCiphertext& ct);

struct BooleanFamilyMember {
  std::string name;
  ProductOperator gate;  // p blocks
  Matrix target;         // 2^p x 2^p logical permutation
};

struct QracQuery {
  std::string function;
  std::vector<int> x;
  std::vector<int> expected;
  double success = 0.0;            // probability of the full output f(x)
  double first_bit_success = 0.0;  // probability of its first bit
};

struct QracReport {
  std::vector<QracQuery> queries;
  long long communication_qubits = 0;
};

QracReport qrac_harness(const QheParams& params, const std::vector<BooleanFamilyMember>& family,
                        std::uint64_t seed);

}  // namespace qcl
