#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcl/qla.hpp"
#include "qcl/stabilizer.hpp"

namespace qcl {

struct SubcodeFactor {
  std::vector<int> qubits;  // sorted
  Vector zero;              // |psi_0j> on those qubits, in sorted order
  Vector one;               // |psi_1j>
  double overlap = 0.0;     // |<psi_0j|psi_1j>|
  bool orthogonal = true;
};

struct FoldStructure {
  std::vector<SubcodeFactor> factors;
  int r() const { return static_cast<int>(factors.size()); }
};

class CodeSpace {
 public:
  CodeSpace(std::string name, Vector zero, Vector one, std::optional<int> declared_distance = std::nullopt,
            std::optional<StabilizerGroup> stabilizer = std::nullopt);

  const std::string& name() const { return name_; }
  int n_physical() const { return n_; }
  const Vector& logical_zero() const { return zero_; }
  const Vector& logical_one() const { return one_; }
  const Vector& basis(int bit) const { return bit ? one_ : zero_; }
  std::optional<int> declared_distance() const { return distance_; }
  const std::optional<StabilizerGroup>& stabilizer() const { return stab_; }
  const std::optional<FoldStructure>& fold_structure() const { return fold_; }

  // Validates the factorization invariants before attaching it.
  CodeSpace with_fold_structure(FoldStructure fold) const;

  // alpha |0_L> + beta |1_L>
  Vector encode(cplx alpha, cplx beta) const;
  DenseOperator projector() const;

 private:
  std::string name_;
  int n_;
  Vector zero_;
  Vector one_;
  std::optional<int> distance_;
  std::optional<StabilizerGroup> stab_;
  std::optional<FoldStructure> fold_;
};

std::vector<std::string> builtin_code_names();
CodeSpace builtin_code(const std::string& name);
// The 1-qubit code |0>, |1>.
CodeSpace trivial_code();
// (|0..0> +- |1..1>)/sqrt2 on k qubits; k = 1 gives |+>, |->.
CodeSpace ghz_code(int k);

struct KlViolation {
  PauliString error;
  bool diagonal = false;  // <0|E|0> != <1|E|1>
  bool off_diagonal = false;  // <0|E|1> != 0
  cplx diag_gap{0.0, 0.0};
  cplx off_value{0.0, 0.0};
};

struct KlLambda {
  PauliString error;
  cplx lambda;
};

struct KlReport {
  int max_weight = 0;
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  std::vector<KlViolation> violations;  // first ones in scan order
  std::vector<KlLambda> lambdas;        // nonzero <0|E|0> for passing errors
  bool passed() const { return violation_count == 0; }
};

inline constexpr std::size_t kMaxReportedViolations = 32;

KlReport kl_check(const CodeSpace& code, int max_weight);
KlReport kl_check(const Vector& zero, const Vector& one, int max_weight);

// Exhaustive: smallest w with a failing kl_check at weight w.
int kl_distance(const CodeSpace& code);
// Stabilizer search when available, otherwise kl_distance.
int verified_distance(const CodeSpace& code);

// Transpose recovery for a fixed erasure pattern, stored in logical
// coordinates: the recovered state is V (sum_j B_j X B_j^dagger) V^dagger with
// V = [|0_L> |1_L>] and X the state on the kept qubits.
class ErasureRecovery {
 public:
  ErasureRecovery(const CodeSpace& code, std::vector<int> erased);

  const std::vector<int>& erased() const { return erased_; }
  const std::vector<int>& kept() const { return kept_; }
  const std::vector<Matrix>& logical_kraus() const { return kraus_; }

  // 2x2 logical density from a density on the kept qubits (ordered as kept()).
  Matrix recover_logical(const Matrix& kept_density) const;

 private:
  std::vector<int> erased_;
  std::vector<int> kept_;
  std::vector<Matrix> kraus_;
};

DenseOperator erasure_recover(const CodeSpace& code, std::span<const int> erased, const DenseOperator& corrupted);

CodeSpace concatenate(const CodeSpace& outer, const CodeSpace& inner);

FoldStructure rfold_decompose(const CodeSpace& code);

enum class CodeClass { generic, r_fold, maximally_redundant };
const char* to_string(CodeClass c);

struct SubcodeReport {
  std::vector<int> qubits;
  bool diagonal_violation = false;
  bool off_diagonal_violation = false;
  bool distance_one() const { return diagonal_violation || off_diagonal_violation; }
};

struct Classification {
  CodeClass kind = CodeClass::generic;
  int r = 1;
  int distance = 0;
  std::vector<SubcodeReport> subcodes;
};

Classification classify(const CodeSpace& code);
Classification classify(const CodeSpace& code, int distance);

bool is_additive(const CodeSpace& code);

}  // namespace qcl
