#include "qcl/transversal.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qcl/code_io.hpp"
#include "qcl/errors.hpp"
#include "qcl/gates.hpp"
#include "qcl/parallel.hpp"
#include "qcl/tolerance.hpp"

namespace qcl {

ProductOperator::ProductOperator(std::shared_ptr<const CodeSpace> code, int num_blocks, std::vector<Matrix> factors)
    : code_(std::move(code)), r_(num_blocks), factors_(std::move(factors)) {
  if (!code_) throw std::invalid_argument("product operator needs a code");
  if (r_ < 1) throw std::invalid_argument("product operator needs at least one block");
  if (static_cast<int>(factors_.size()) != code_->n_physical()) {
    throw std::invalid_argument(
        fmt::format("{} factors for a code with {} subsystems", factors_.size(), code_->n_physical()));
  }
  check_state_cap(r_ * code_->n_physical());
  const Eigen::Index d = Eigen::Index{1} << r_;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Matrix& f = factors_[i];
    if (f.rows() != d || f.cols() != d) {
      throw std::invalid_argument(fmt::format("factor {} is {}x{}, expected {}x{}", i, f.rows(), f.cols(), d, d));
    }
    if ((f.adjoint() * f - Matrix::Identity(d, d)).norm() > tol::kStructural) {
      throw std::invalid_argument(fmt::format("factor {} is not unitary", i));
    }
  }
}

ProductOperator ProductOperator::uniform(std::shared_ptr<const CodeSpace> code, const Matrix& u) {
  const int r = qubits_for_dim(u.rows());
  const int n = code ? code->n_physical() : 0;
  return ProductOperator(std::move(code), r, std::vector<Matrix>(n, u));
}

bool ProductOperator::is_strongly_transversal(double tol) const {
  for (const auto& f : factors_) {
    if ((f - factors_.front()).norm() > tol) return false;
  }
  return true;
}

void ProductOperator::apply(Vector& amps, int total_blocks, const std::vector<int>& blocks) const {
  const int n = num_subsystems();
  if (static_cast<int>(blocks.size()) != r_) {
    throw std::invalid_argument(fmt::format("gate acts on {} blocks, {} given", r_, blocks.size()));
  }
  for (int b : blocks) {
    if (b < 0 || b >= total_blocks) throw std::out_of_range(fmt::format("block {} out of range", b));
  }
  std::vector<int> qubits(r_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r_; ++j) qubits[j] = blocks[j] * n + i;
    apply_gate(amps, total_blocks * n, factors_[i], qubits);
  }
}

void ProductOperator::apply(Vector& amps) const {
  std::vector<int> blocks(r_);
  for (int j = 0; j < r_; ++j) blocks[j] = j;
  apply(amps, r_, blocks);
}

DenseOperator ProductOperator::dense() const {
  const int n = num_subsystems();
  check_density_cap(r_ * n);
  DenseOperator acc;
  for (const auto& f : factors_) acc = tensor(acc, DenseOperator(r_, f));
  // Subsystem-major position i*r + b holds qubit b*n + i.
  std::vector<int> perm(r_ * n);
  for (int i = 0; i < n; ++i) {
    for (int b = 0; b < r_; ++b) perm[i * r_ + b] = b * n + i;
  }
  return permute_qubits(acc, perm);
}

Vector encode_blocks(const CodeSpace& code, const Vector& logical) {
  const int r = qubits_for_dim(logical.size());
  check_state_cap(r * code.n_physical());
  Matrix v(code.logical_zero().size(), 2);
  v.col(0) = code.logical_zero();
  v.col(1) = code.logical_one();
  std::vector<Eigen::Index> dims(r, 2);
  Vector cur = logical;
  for (int b = 0; b < r; ++b) {
    cur = apply_mode(cur, dims, b, v);
    dims[b] = v.rows();
  }
  return cur;
}

LogicalCheck check_logical_action(const CodeSpace& code, int r, const Matrix& target,
                                  const std::function<Vector(const Vector&)>& apply, std::uint64_t seed) {
  const Eigen::Index d = Eigen::Index{1} << r;
  if (target.rows() != d || target.cols() != d) {
    throw std::invalid_argument(fmt::format("target is {}x{}, expected {}x{}", target.rows(), target.cols(), d, d));
  }
  std::vector<Vector> probes;
  for (Eigen::Index b = 0; b < d; ++b) probes.push_back(Vector::Unit(d, b));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int k = 0; k <= r; ++k) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx(g(rng), g(rng));
    probes.push_back(v.normalized());
  }
  LogicalCheck out;
  bool have_phase = false;
  bool ok = true;
  for (const auto& psi : probes) {
    const Vector got = apply(encode_blocks(code, psi));
    const Vector want = encode_blocks(code, target * psi);
    const cplx lambda = want.dot(got);
    double dev = (got - lambda * want).norm();
    dev = std::max(dev, std::abs(std::abs(lambda) - 1.0));
    if (!have_phase) {
      out.phase = std::abs(lambda) > 0 ? lambda / std::abs(lambda) : cplx(1.0);
      have_phase = true;
    } else {
      dev = std::max(dev, std::abs(lambda - out.phase));
    }
    out.max_deviation = std::max(out.max_deviation, dev);
    if (dev > tol::kEndToEnd) ok = false;
  }
  out.logical = ok;
  return out;
}

LogicalCheck is_logical(const CodeSpace& code, const DenseOperator& physical, const Matrix& target) {
  const int r = qubits_for_dim(target.rows());
  if (physical.num_qubits() != r * code.n_physical()) {
    throw std::invalid_argument(fmt::format("physical operator on {} qubits, expected {}", physical.num_qubits(),
                                            r * code.n_physical()));
  }
  return check_logical_action(code, r, target, [&](const Vector& v) -> Vector { return physical.matrix() * v; });
}

LogicalCheck is_logical(const ProductOperator& op, const Matrix& target) {
  if (target.rows() != (Eigen::Index{1} << op.num_blocks())) {
    throw std::invalid_argument("target arity differs from the operator's block count");
  }
  return check_logical_action(op.code(), op.num_blocks(), target, [&](const Vector& v) {
    Vector out = v;
    op.apply(out);
    return out;
  });
}

TransversalReport verify_transversal(const ProductOperator& op, const Matrix& target) {
  const LogicalCheck c = is_logical(op, target);
  TransversalReport rep;
  rep.logical = c.logical;
  rep.phase = c.phase;
  rep.theta = std::arg(c.phase);
  rep.max_deviation = c.max_deviation;
  rep.strongly_transversal = op.is_strongly_transversal(tol::kStructural);
  return rep;
}

std::optional<char> identify_logical_pauli(const ProductOperator& op) {
  if (op.num_blocks() != 1) return std::nullopt;
  for (char l : {'I', 'X', 'Y', 'Z'}) {
    if (is_logical(op, gates::named(std::string(1, l))).logical) return l;
  }
  return std::nullopt;
}

std::vector<SearchHit> strongly_transversal_search(std::shared_ptr<const CodeSpace> code, const Matrix& target,
                                                   const std::vector<NamedUnitary>& library, int workers) {
  std::vector<std::optional<SearchHit>> slots(library.size());
  parallel_for(library.size(), workers, [&](std::size_t i) {
    const auto& cand = library[i];
    if (cand.u.rows() != target.rows()) return;
    const auto rep = verify_transversal(ProductOperator::uniform(code, cand.u), target);
    if (rep.logical) slots[i] = SearchHit{cand.name, rep};
  });
  std::vector<SearchHit> hits;
  for (auto& s : slots) {
    if (s) hits.push_back(std::move(*s));
  }
  return hits;
}

ProductOperator parse_product_operator(std::shared_ptr<const CodeSpace> code, const std::string& text,
                                       const std::string& source) {
  if (!code) throw std::invalid_argument("product operator needs a code");
  std::istringstream in(text);
  std::vector<std::pair<int, std::string>> lines;
  int number = 0;
  for (std::string l; std::getline(in, l);) {
    ++number;
    const auto hash = l.find('#');
    if (hash != std::string::npos) l.erase(hash);
    const auto b = l.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    l = l.substr(b, l.find_last_not_of(" \t\r") - b + 1);
    lines.emplace_back(number, l);
  }
  int r = 0;
  std::vector<Matrix> factors;
  std::size_t i = 0;
  auto value_of = [](const std::string& l) {
    std::string v = l.substr(l.find(':') + 1);
    const auto b = v.find_first_not_of(" \t");
    return b == std::string::npos ? std::string() : v.substr(b);
  };
  while (i < lines.size()) {
    const auto& [ln, l] = lines[i];
    if (l.rfind("blocks:", 0) == 0) {
      try {
        r = std::stoi(value_of(l));
      } catch (const std::exception&) {
        throw ParseError(source, ln, "bad block count");
      }
      if (r < 1 || r > 4) throw ParseError(source, ln, "block count must lie in [1,4]");
      ++i;
    } else if (l.rfind("factor:", 0) == 0) {
      if (r == 0) throw ParseError(source, ln, "'blocks:' must come before factors");
      const std::string name = value_of(l);
      const Eigen::Index d = Eigen::Index{1} << r;
      Matrix f(d, d);
      if (!name.empty()) {
        try {
          f = gates::named(name);
        } catch (const std::exception& e) {
          throw ParseError(source, ln, e.what());
        }
        if (f.rows() != d) throw ParseError(source, ln, fmt::format("gate {} does not act on {} qubits", name, r));
        ++i;
      } else {
        ++i;
        for (Eigen::Index row = 0; row < d; ++row, ++i) {
          if (i >= lines.size()) throw ParseError(source, ln, "factor matrix is missing rows");
          std::vector<cplx> vals;
          try {
            vals = parse_complex_row(lines[i].second);
          } catch (const std::exception& e) {
            throw ParseError(source, lines[i].first, e.what());
          }
          if (static_cast<Eigen::Index>(vals.size()) != d) {
            throw ParseError(source, lines[i].first, fmt::format("expected {} entries, found {}", d, vals.size()));
          }
          for (Eigen::Index c = 0; c < d; ++c) f(row, c) = vals[c];
        }
      }
      if ((f.adjoint() * f - Matrix::Identity(d, d)).norm() > tol::kStructural) {
        throw ParseError(source, ln, "factor is not unitary");
      }
      factors.push_back(std::move(f));
    } else {
      throw ParseError(source, ln, fmt::format("unexpected line '{}'", l));
    }
  }
  if (r == 0) throw ParseError(source, number, "missing 'blocks:' line");
  if (factors.size() == 1 && code->n_physical() > 1) factors.assign(code->n_physical(), factors.front());
  if (static_cast<int>(factors.size()) != code->n_physical()) {
    throw ParseError(source, number,
                     fmt::format("{} factors for a code with {} subsystems", factors.size(), code->n_physical()));
  }
  return ProductOperator(std::move(code), r, std::move(factors));
}

}  // namespace qcl
