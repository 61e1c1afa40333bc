#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcl/codes.hpp"

namespace qcl {

// One r-qubit factor per subsystem; factor i acts on qubit i of every block.
// States are block-major: qubit b*n + i is subsystem i of block b.
class ProductOperator {
 public:
  ProductOperator(std::shared_ptr<const CodeSpace> code, int num_blocks, std::vector<Matrix> factors);
  // u^{(x)n}
  static ProductOperator uniform(std::shared_ptr<const CodeSpace> code, const Matrix& u);

  const CodeSpace& code() const { return *code_; }
  const std::shared_ptr<const CodeSpace>& code_ptr() const { return code_; }
  int num_blocks() const { return r_; }
  int num_subsystems() const { return static_cast<int>(factors_.size()); }
  const std::vector<Matrix>& factors() const { return factors_; }

  bool is_strongly_transversal(double tol) const;

  // Applies the factors to a block-major state with the given number of blocks
  // (rows listed in `blocks` receive the gate; default 0..r-1).
  void apply(Vector& amps, int total_blocks, const std::vector<int>& blocks) const;
  void apply(Vector& amps) const;

  // Dense 2^{rn} realization.
  DenseOperator dense() const;

 private:
  std::shared_ptr<const CodeSpace> code_;
  int r_;
  std::vector<Matrix> factors_;
};

// Logical states of r blocks for an r-qubit logical input vector.
Vector encode_blocks(const CodeSpace& code, const Vector& logical);

struct LogicalCheck {
  bool logical = false;
  cplx phase{1.0, 0.0};
  double max_deviation = 0.0;
};

inline constexpr std::uint64_t kProbeSeed = 0x51ab1e5eedULL;

// Probes: every logical basis input plus r+1 seeded random superpositions.
LogicalCheck check_logical_action(const CodeSpace& code, int r, const Matrix& target,
                                  const std::function<Vector(const Vector&)>& apply,
                                  std::uint64_t seed = kProbeSeed);

LogicalCheck is_logical(const CodeSpace& code, const DenseOperator& physical, const Matrix& target);
LogicalCheck is_logical(const ProductOperator& op, const Matrix& target);

struct TransversalReport {
  bool logical = false;
  cplx phase{1.0, 0.0};
  double theta = 0.0;
  bool strongly_transversal = false;
  double max_deviation = 0.0;
};

TransversalReport verify_transversal(const ProductOperator& op, const Matrix& target);

// The single-qubit logical Pauli (I, X, Y or Z) the operator implements, if any.
std::optional<char> identify_logical_pauli(const ProductOperator& op);

struct NamedUnitary {
  std::string name;
  Matrix u;
};

struct SearchHit {
  std::string name;
  TransversalReport report;
};

// Candidates are checked in library order; workers only affect scheduling.
std::vector<SearchHit> strongly_transversal_search(std::shared_ptr<const CodeSpace> code, const Matrix& target,
                                                   const std::vector<NamedUnitary>& library, int workers = 1);

// Structured text: "blocks: r", then one "factor:" per subsystem, either
// "factor: NAME" or "factor:" followed by 2^r rows of re,im pairs. A lone
// factor applies to every subsystem.
ProductOperator parse_product_operator(std::shared_ptr<const CodeSpace> code, const std::string& text,
                                       const std::string& source = "<input>");

}  // namespace qcl
