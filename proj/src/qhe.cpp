#include "qcl/qhe.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "qcl/errors.hpp"
#include "qcl/tolerance.hpp"

namespace qcl {

namespace {

std::vector<int> complement(int n, const std::vector<int>& subset) {
  std::vector<int> out;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(subset.begin(), subset.end(), q)) out.push_back(q);
  }
  return out;
}

std::vector<int> sorted_unique(std::vector<int> v, int n) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw std::invalid_argument("withheld subsystem repeated");
  for (int q : v) {
    if (q < 0 || q >= n) throw std::out_of_range(fmt::format("withheld subsystem {} out of range", q));
  }
  return v;
}

void check_common(const std::shared_ptr<const CodeSpace>& code, int p, int m) {
  if (!code) throw std::invalid_argument("scheme needs a code");
  if (p < 1) throw std::invalid_argument("p must be at least 1");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
}

bool same_code(const CodeSpace& a, const CodeSpace& b) {
  if (&a == &b) return true;
  return a.n_physical() == b.n_physical() && (a.logical_zero() - b.logical_zero()).norm() < tol::kStructural &&
         (a.logical_one() - b.logical_one()).norm() < tol::kStructural;
}

// Bits of `index` (T-qubit register) at the listed qubits, first listed most significant.
std::uint64_t gather(std::uint64_t index, int total, const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (int q : qubits) out = (out << 1) | ((index >> (total - 1 - q)) & 1U);
  return out;
}

}  // namespace

QheParams QheParams::create(std::shared_ptr<const CodeSpace> code, int p, int m,
                            std::optional<std::vector<int>> withheld, int ancilla_count) {
  check_common(code, p, m);
  if (ancilla_count < 0) throw std::invalid_argument("ancilla count must be nonnegative");
  const int len = code->n_physical();
  const FoldStructure fold = code->fold_structure() ? *code->fold_structure() : rfold_decompose(*code);
  QheParams out;
  out.code = code;
  out.p = p;
  out.m = m;
  out.ancilla_count = ancilla_count;
  out.fold = fold.r();
  out.distance = code->declared_distance() ? *code->declared_distance() : verified_distance(*code);
  if (withheld) {
    out.withheld = sorted_unique(*withheld, len);
  } else {
    for (const auto& f : fold.factors) out.withheld.push_back(f.qubits.front());
    std::sort(out.withheld.begin(), out.withheld.end());
  }
  for (const auto& f : fold.factors) {
    const auto hits = std::count_if(out.withheld.begin(), out.withheld.end(), [&](int q) {
      return std::find(f.qubits.begin(), f.qubits.end(), q) != f.qubits.end();
    });
    if (hits != 1) {
      throw std::invalid_argument(
          fmt::format("withheld set hits the subcode on {} qubits {} times, expected once", f.qubits.size(), hits));
    }
  }
  if (out.r() >= out.distance) {
    throw std::invalid_argument(fmt::format("fold r = {} is not below the distance d = {}", out.r(), out.distance));
  }
  out.sent = complement(len, out.withheld);
  out.recovery = std::make_shared<ErasureRecovery>(*code, out.withheld);
  return out;
}

QheParams QheParams::variant(std::shared_ptr<const CodeSpace> code, int p, int m, std::vector<int> withheld,
                             int ancilla_count) {
  check_common(code, p, m);
  QheParams out;
  out.code = code;
  out.p = p;
  out.m = m;
  out.ancilla_count = ancilla_count;
  out.withheld = sorted_unique(std::move(withheld), code->n_physical());
  out.fold = out.r();
  out.distance = code->declared_distance().value_or(0);
  out.sent = complement(code->n_physical(), out.withheld);
  try {
    out.recovery = std::make_shared<ErasureRecovery>(*code, out.withheld);
  } catch (const std::exception&) {
    out.recovery = nullptr;
  }
  return out;
}

SecretKey keygen(const QheParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, params.m);
  SecretKey key;
  key.s.resize(params.n());
  for (auto& v : key.s) v = pick(rng);
  return key;
}

std::vector<int> parse_bits(const std::string& bits) {
  std::vector<int> out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument(fmt::format("'{}' is not a bitstring", bits));
    out.push_back(c - '0');
  }
  return out;
}

std::string format_bits(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

QheCiphertext encrypt(const QheParams& params, const SecretKey& key, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != params.p) {
    throw std::invalid_argument(fmt::format("input has {} bits, expected {}", x.size(), params.p));
  }
  if (static_cast<int>(key.s.size()) != params.n()) {
    throw std::invalid_argument(fmt::format("key has {} entries, expected {}", key.s.size(), params.n()));
  }
  for (int s : key.s) {
    if (s < 1 || s > params.m) throw std::invalid_argument(fmt::format("key entry {} outside [1, {}]", s, params.m));
  }
  check_state_cap(params.p * params.code_length());
  Eigen::Index idx = 0;
  for (int b : x) {
    if (b != 0 && b != 1) throw std::invalid_argument("input bits must be 0 or 1");
    idx = (idx << 1) | b;
  }
  QheCiphertext ct;
  ct.placements = key.s;
  ct.rows = params.p;
  ct.joint = encode_blocks(*params.code, Vector::Unit(Eigen::Index{1} << params.p, idx));
  ct.noise_qubits = static_cast<long long>(params.n()) * ct.rows * (params.m - 1);
  for (int a = 0; a < params.ancilla_count; ++a) ct.ancillas.push_back({a % 2, params.code->basis(a % 2)});
  return ct;
}

QheCiphertext evaluate(const QheParams& params, const QheCiphertext& ct, const ProductOperator& gate,
                       const std::vector<int>& rows) {
  if (!same_code(gate.code(), *params.code)) throw std::invalid_argument("gate was built for a different code");
  if (static_cast<int>(rows.size()) != gate.num_blocks()) {
    throw std::invalid_argument(fmt::format("gate acts on {} rows, {} given", gate.num_blocks(), rows.size()));
  }
  std::vector<int> sorted_rows = rows;
  std::sort(sorted_rows.begin(), sorted_rows.end());
  if (std::adjacent_find(sorted_rows.begin(), sorted_rows.end()) != sorted_rows.end()) {
    throw std::invalid_argument("row listed twice");
  }
  for (int r : rows) {
    if (r < 0 || r >= ct.rows) throw std::out_of_range(fmt::format("row {} out of range", r));
  }
  const int len = params.code_length();
  QheCiphertext out = ct;
  std::vector<int> qubits(rows.size());
  for (int i : params.sent) {
    for (std::size_t b = 0; b < rows.size(); ++b) qubits[b] = rows[b] * len + i;
    apply_gate(out.joint, ct.rows * len, gate.factors()[i], qubits);
  }
  return out;
}

QheCiphertext evaluate(const QheParams& params, const QheCiphertext& ct, const ProductOperator& gate) {
  std::vector<int> rows(gate.num_blocks());
  for (int b = 0; b < gate.num_blocks(); ++b) rows[b] = b;
  return evaluate(params, ct, gate, rows);
}

QheCiphertext absorb_ancilla(const QheCiphertext& ct, std::size_t index) {
  if (index >= ct.ancillas.size()) throw std::out_of_range(fmt::format("no ancilla {}", index));
  QheCiphertext out = ct;
  const Vector& a = ct.ancillas[index].state;
  check_state_cap(qubits_for_dim(ct.joint.size() * a.size()));
  out.joint = kron(Matrix(ct.joint), Matrix(a)).col(0);
  out.ancillas.erase(out.ancillas.begin() + static_cast<std::ptrdiff_t>(index));
  out.rows = ct.rows + 1;
  out.noise_qubits = ct.noise_qubits / std::max(ct.rows, 1) * out.rows;
  return out;
}

Decryption decrypt(const QheParams& params, const QheCiphertext& ct, const SecretKey& key) {
  if (key.s.size() != ct.placements.size()) throw std::invalid_argument("key length differs from the ciphertext");
  if (!params.recovery) throw RecoveryError("scheme has no recovery map for its withheld set");
  const int len = params.code_length();
  const int n = params.n();
  const int rows = ct.rows;
  const int total = rows * len;

  std::vector<int> kept;
  std::vector<int> traced;
  for (int b = 0; b < rows; ++b) {
    for (int i : params.sent) kept.push_back(b * len + i);
    for (int i : params.withheld) traced.push_back(b * len + i);
  }
  // Positions inside the kept register whose column the key misses.
  std::vector<int> bad;
  for (int b = 0; b < rows; ++b) {
    for (int j = 0; j < n; ++j) {
      if (key.s[j] != ct.placements[j]) bad.push_back(b * n + j);
    }
  }
  const int nk = static_cast<int>(kept.size());
  const int nb = static_cast<int>(bad.size());
  const std::uint64_t branches = (std::uint64_t{1} << traced.size()) << (2 * nb);
  if (branches > (std::uint64_t{1} << 20)) {
    throw CapExceeded(fmt::format("decryption needs {} branches, above the 2^20 budget", branches));
  }

  const Eigen::Index dk = Eigen::Index{1} << nk;
  Matrix phi = Matrix::Zero(dk, Eigen::Index{1} << traced.size());
  for (Eigen::Index idx = 0; idx < ct.joint.size(); ++idx) {
    const auto u = static_cast<std::uint64_t>(idx);
    phi(static_cast<Eigen::Index>(gather(u, total, kept)), static_cast<Eigen::Index>(gather(u, total, traced))) =
        ct.joint(idx);
  }

  std::vector<Vector> states;
  if (nb == 0) {
    for (Eigen::Index c = 0; c < phi.cols(); ++c) states.push_back(phi.col(c));
  } else {
    // The missed columns read maximally mixed noise: |e><c| on them, averaged.
    std::uint64_t bad_mask = 0;
    for (int q : bad) bad_mask |= qubit_bit(nk, q);
    auto spread = [&](std::uint64_t v) {
      std::uint64_t out = 0;
      for (int t = 0; t < nb; ++t) {
        if ((v >> (nb - 1 - t)) & 1U) out |= qubit_bit(nk, bad[t]);
      }
      return out;
    };
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::uint64_t{1} << nb));
    for (Eigen::Index col = 0; col < phi.cols(); ++col) {
      for (std::uint64_t c = 0; c < (std::uint64_t{1} << nb); ++c) {
        const std::uint64_t cm = spread(c);
        for (std::uint64_t e = 0; e < (std::uint64_t{1} << nb); ++e) {
          const std::uint64_t em = spread(e);
          Vector v = Vector::Zero(dk);
          for (Eigen::Index k = 0; k < dk; ++k) {
            const auto u = static_cast<std::uint64_t>(k);
            if ((u & bad_mask) == cm) v(static_cast<Eigen::Index>((u & ~bad_mask) | em)) = scale * phi(k, col);
          }
          if (v.squaredNorm() > 0) states.push_back(std::move(v));
        }
      }
    }
  }

  const auto& kraus = params.recovery->logical_kraus();
  const Eigen::Index dim_row = Eigen::Index{1} << n;
  std::vector<double> dist(std::size_t{1} << rows, 0.0);
  std::function<void(const Vector&, std::vector<Eigen::Index>&, int)> walk = [&](const Vector& v,
                                                                                  std::vector<Eigen::Index>& dims,
                                                                                  int row) {
    if (row == rows) {
      for (Eigen::Index k = 0; k < v.size(); ++k) dist[static_cast<std::size_t>(k)] += std::norm(v(k));
      return;
    }
    for (const auto& b : kraus) {
      const Vector next = apply_mode(v, dims, row, b);
      if (next.squaredNorm() == 0) continue;
      const Eigen::Index saved = dims[row];
      dims[row] = 2;
      walk(next, dims, row + 1);
      dims[row] = saved;
    }
  };
  for (const auto& s : states) {
    std::vector<Eigen::Index> dims(rows, dim_row);
    walk(s, dims, 0);
  }

  Decryption out;
  for (double d : dist) out.projection_weight += d;
  if (out.projection_weight < 1.0 - kKeyMismatchWeight) {
    throw KeyMismatch(
        fmt::format("recovered weight {:.6f}; the key does not match the ciphertext", out.projection_weight));
  }
  for (double& d : dist) d /= out.projection_weight;
  const auto best = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  out.probability = dist[best];
  for (int b = 0; b < rows; ++b) out.bits.push_back(static_cast<int>((best >> (rows - 1 - b)) & 1U));
  out.distribution = std::move(dist);
  return out;
}

DenseOperator sent_state(const QheParams& params, const QheCiphertext& ct) {
  const int len = params.code_length();
  std::vector<int> keep;
  for (int i : params.sent) {
    for (int b = 0; b < ct.rows; ++b) keep.push_back(b * len + i);
  }
  check_density_cap(static_cast<int>(keep.size()));
  return reduced_density(DenseState(ct.rows * len, ct.joint), keep);
}

DenseOperator embed_server_view(const DenseOperator& sent, int n, int m, int rows,
                                const std::vector<int>& placements) {
  if (sent.num_qubits() != n * rows) throw std::invalid_argument("sent state has the wrong size");
  if (static_cast<int>(placements.size()) != n) throw std::invalid_argument("placements have the wrong length");
  const int total = n * m * rows;
  check_density_cap(total);
  std::vector<int> perm;
  std::vector<char> used(total, 0);
  for (int j = 0; j < n; ++j) {
    const int c = placements[j] - 1;
    if (c < 0 || c >= m) throw std::invalid_argument(fmt::format("placement {} outside [1, {}]", placements[j], m));
    for (int l = 0; l < rows; ++l) {
      const int pos = (j * m + c) * rows + l;
      perm.push_back(pos);
      used[pos] = 1;
    }
  }
  for (int pos = 0; pos < total; ++pos) {
    if (!used[pos]) perm.push_back(pos);
  }
  const DenseOperator full = tensor(sent, DenseOperator::maximally_mixed(total - n * rows));
  return permute_qubits(full, perm);
}

DenseOperator server_view(const QheParams& params, const QheCiphertext& ct) {
  check_density_cap(params.m * params.n() * ct.rows);
  return embed_server_view(sent_state(params, ct), params.n(), params.m, ct.rows, ct.placements);
}

QracReport qrac_harness(const QheParams& params, const std::vector<BooleanFamilyMember>& family,
                        std::uint64_t seed) {
  QracReport rep;
  rep.communication_qubits = params.server_qubits();
  if (family.empty()) return rep;
  const Eigen::Index dim = Eigen::Index{1} << params.p;
  const SecretKey key = keygen(params, seed);
  for (const auto& f : family) {
    if (f.gate.num_blocks() != params.p || f.target.rows() != dim || f.target.cols() != dim) {
      throw std::invalid_argument(fmt::format("family member {} does not act on {} bits", f.name, params.p));
    }
    if (!verify_transversal(f.gate, f.target).logical) {
      throw std::invalid_argument(fmt::format("family member {} has no transversal implementation", f.name));
    }
    for (Eigen::Index x = 0; x < dim; ++x) {
      Eigen::Index fx = 0;
      const double peak = f.target.col(x).cwiseAbs().maxCoeff(&fx);
      if (std::abs(peak - 1.0) > tol::kStructural) {
        throw std::invalid_argument(fmt::format("family member {} is not a Boolean map", f.name));
      }
      QracQuery q;
      q.function = f.name;
      for (int b = 0; b < params.p; ++b) {
        q.x.push_back(static_cast<int>((x >> (params.p - 1 - b)) & 1));
        q.expected.push_back(static_cast<int>((fx >> (params.p - 1 - b)) & 1));
      }
      const auto ct = evaluate(params, encrypt(params, key, q.x), f.gate);
      const auto dec = decrypt(params, ct, key);
      q.success = dec.distribution[static_cast<std::size_t>(fx)];
      const std::size_t top = std::size_t{1} << (params.p - 1);
      for (std::size_t k = 0; k < dec.distribution.size(); ++k) {
        if (((k & top) != 0) == (q.expected.front() == 1)) q.first_bit_success += dec.distribution[k];
      }
      rep.queries.push_back(std::move(q));
    }
  }
  return rep;
}

}  // namespace qcl
