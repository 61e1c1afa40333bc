#include "qcl/clifford.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qcl/errors.hpp"
#include "qcl/tolerance.hpp"

namespace qcl {

namespace {

const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

struct PauliTables {
  std::vector<Matrix> generators;  // X_j, Z_j
  std::vector<Matrix> all;         // every non-identity letter string
};

const PauliTables& tables(int n) {
  static std::vector<PauliTables> cache(kMaxCliffordQubits + 1);
  static std::vector<bool> ready(kMaxCliffordQubits + 1, false);
  if (!ready[n]) {
    PauliTables t;
    for (int q = 0; q < n; ++q) {
      t.generators.push_back(PauliString::single(n, q, 'X').to_matrix());
      t.generators.push_back(PauliString::single(n, q, 'Z').to_matrix());
    }
    const std::uint64_t lim = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < lim; ++x) {
      for (std::uint64_t z = 0; z < lim; ++z) {
        if (x == 0 && z == 0) continue;
        t.all.push_back(PauliString(n, x, z).to_matrix());
      }
    }
    cache[n] = std::move(t);
    ready[n] = true;
  }
  return cache[n];
}

bool in_level(const Matrix& u, int k, int n) {
  if (match_pauli(u, tol::kEndToEnd)) return true;
  if (k <= 1) return false;
  const auto& t = tables(n);
  const auto& probes = k == 2 ? t.generators : t.all;
  for (const Matrix& p : probes) {
    if (!in_level(u * p * u.adjoint(), k - 1, n)) return false;
  }
  return true;
}

void require_unitary(const DenseOperator& u, const char* what) {
  if (!u.is_unitary(tol::kStructural)) throw std::invalid_argument(fmt::format("{} is not unitary", what));
}

}  // namespace

DenseOperator group_commutator(const DenseOperator& a, const DenseOperator& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("commutator operands differ in size");
  require_unitary(a, "first commutator operand");
  require_unitary(b, "second commutator operand");
  return {a.num_qubits(), group_commutator(a.matrix(), b.matrix())};
}

std::optional<PauliMatch> match_pauli(const Matrix& u, double tol) {
  const Eigen::Index d = u.rows();
  if (u.cols() != d) return std::nullopt;
  const int n = qubits_for_dim(d);
  Eigen::Index col0 = 0;
  u.col(0).cwiseAbs().maxCoeff(&col0);
  const auto xm = static_cast<std::uint64_t>(col0);
  const cplx lambda = u(col0, 0);
  if (std::abs(std::abs(lambda) - 1.0) > tol) return std::nullopt;
  std::uint64_t zm = 0;
  for (int q = 0; q < n; ++q) {
    const auto c = static_cast<Eigen::Index>(qubit_bit(n, q));
    const cplx ratio = u(static_cast<Eigen::Index>(static_cast<std::uint64_t>(c) ^ xm), c) / lambda;
    if (std::abs(ratio + 1.0) < 0.5) zm |= qubit_bit(n, q);
  }
  for (Eigen::Index c = 0; c < d; ++c) {
    const auto row = static_cast<Eigen::Index>(static_cast<std::uint64_t>(c) ^ xm);
    const double sign = (std::popcount(static_cast<std::uint64_t>(c) & zm) & 1) ? -1.0 : 1.0;
    for (Eigen::Index r = 0; r < d; ++r) {
      const cplx expect = r == row ? lambda * sign : cplx(0.0);
      if (std::abs(u(r, c) - expect) > tol) return std::nullopt;
    }
  }
  std::uint64_t xq = 0;
  std::uint64_t zq = 0;
  for (int q = 0; q < n; ++q) {
    if (xm & qubit_bit(n, q)) xq |= std::uint64_t{1} << q;
    if (zm & qubit_bit(n, q)) zq |= std::uint64_t{1} << q;
  }
  PauliString letters(n, xq, zq, 0);
  // lambda = i^(k + #Y) for an exact Pauli with phase i^k.
  const cplx residual = lambda / kPhases[std::popcount(xq & zq) % 4];
  int k = 0;
  for (int j = 0; j < 4; ++j) {
    if (std::abs(residual - kPhases[j]) <= tol) k = j;
  }
  return PauliMatch{letters.with_phase(k), residual};
}

std::optional<int> clifford_level(const DenseOperator& u, int max_k) {
  if (max_k < 1 || max_k > kMaxCliffordLevel) {
    throw std::invalid_argument(fmt::format("max_k must lie in [1,{}]", kMaxCliffordLevel));
  }
  if (u.num_qubits() > kMaxCliffordQubits) {
    throw CapExceeded(fmt::format("hierarchy check on {} qubits exceeds the cap of {}", u.num_qubits(),
                                  kMaxCliffordQubits));
  }
  require_unitary(u, "operator");
  for (int k = 1; k <= max_k; ++k) {
    if (in_level(u.matrix(), k, u.num_qubits())) return k;
  }
  return std::nullopt;
}

bool TransversalLevelReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [&](const CommutatorCheck& c) {
    return c.preserves_codespace && c.level.has_value() && *c.level <= bound - 1;
  });
}

TransversalLevelReport transversal_level_bound(const StabilizerGroup& s,
                                               std::span<const std::vector<int>> partition,
                                               std::span<const DenseOperator> transversal_logicals) {
  const int n = s.num_qubits();
  if (partition.empty()) throw std::invalid_argument("empty partition");
  std::uint64_t covered = 0;
  for (const auto& subset : partition) {
    if (subset.empty()) throw std::invalid_argument("partition has an empty subset");
    const std::uint64_t m = region_mask(n, subset);
    if (std::popcount(m) != static_cast<int>(subset.size()) || (covered & m)) {
      throw std::invalid_argument("partition subsets overlap");
    }
    covered |= m;
    if (!is_cleanable(s, subset)) throw NotCleanable("partition subset is not cleanable");
  }
  if (std::popcount(covered) != n) throw std::invalid_argument("partition does not cover every qubit");

  TransversalLevelReport report;
  report.bound = static_cast<int>(partition.size()) - 1;
  if (transversal_logicals.empty()) return report;
  if (n > 10) throw CapExceeded("dense commutator checks are limited to 10 qubits");

  const auto [zero, one] = codewords(s);
  const std::array<const Vector*, 2> basis = {&zero, &one};
  for (std::size_t ui = 0; ui < transversal_logicals.size(); ++ui) {
    const DenseOperator& u = transversal_logicals[ui];
    if (u.num_qubits() != n) throw std::invalid_argument("transversal unitary has the wrong size");
    for (char which : {'X', 'Z'}) {
      CommutatorCheck c;
      c.unitary_index = static_cast<int>(ui);
      c.logical = which;
      c.cleaned = clean_operator(s, which == 'X' ? s.logical_x() : s.logical_z(), partition.back());
      const DenseOperator comm = group_commutator(u, c.cleaned.to_dense());
      c.logical_action = Matrix(2, 2);
      double leak = 0.0;
      for (int j = 0; j < 2; ++j) {
        const Vector img = comm.matrix() * *basis[j];
        Vector resid = img;
        for (int i = 0; i < 2; ++i) {
          c.logical_action(i, j) = basis[i]->dot(img);
          resid -= c.logical_action(i, j) * *basis[i];
        }
        leak = std::max(leak, resid.norm());
      }
      c.preserves_codespace = leak <= tol::kEndToEnd;
      const cplx lambda = c.logical_action(0, 0);
      c.is_scalar = (c.logical_action - lambda * Matrix::Identity(2, 2)).norm() <= tol::kEndToEnd &&
                    std::abs(std::abs(lambda) - 1.0) <= tol::kEndToEnd;
      c.scalar = lambda;
      if (c.is_scalar) {
        c.level = 0;
      } else if (c.preserves_codespace) {
        c.level = clifford_level(DenseOperator(1, c.logical_action), kMaxCliffordLevel);
      }
      report.checks.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace qcl
