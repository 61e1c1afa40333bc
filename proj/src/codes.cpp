#include "qcl/codes.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qcl/errors.hpp"
#include "qcl/tolerance.hpp"

namespace qcl {

namespace {

constexpr int kMaxScanQubits = 12;
constexpr int kMaxAdditiveQubits = 10;

// Index offsets in a k-qubit register for every assignment of `positions`.
std::vector<std::uint64_t> position_offsets(int k, std::span<const int> positions) {
  const int s = static_cast<int>(positions.size());
  std::vector<std::uint64_t> out(std::size_t{1} << s, 0);
  for (std::uint64_t a = 0; a < out.size(); ++a) {
    for (int j = 0; j < s; ++j) {
      if (a & qubit_bit(s, j)) out[a] |= qubit_bit(k, positions[j]);
    }
  }
  return out;
}

std::vector<int> complement_of(int n, std::span<const int> subset) {
  std::vector<bool> in(n, false);
  for (int q : subset) in[q] = true;
  std::vector<int> out;
  for (int q = 0; q < n; ++q) {
    if (!in[q]) out.push_back(q);
  }
  return out;
}

void check_scan_cap(int n) {
  if (n > kMaxScanQubits) {
    throw CapExceeded(fmt::format("exhaustive scan on {} qubits exceeds the cap of {}", n, kMaxScanQubits));
  }
}

}  // namespace

CodeSpace::CodeSpace(std::string name, Vector zero, Vector one, std::optional<int> declared_distance,
                     std::optional<StabilizerGroup> stabilizer)
    : name_(std::move(name)),
      n_(qubits_for_dim(zero.size())),
      zero_(std::move(zero)),
      one_(std::move(one)),
      distance_(declared_distance),
      stab_(std::move(stabilizer)) {
  check_state_cap(n_);
  if (one_.size() != zero_.size()) throw std::invalid_argument("logical basis states differ in size");
  if (std::abs(zero_.norm() - 1.0) > tol::kStructural) {
    throw std::invalid_argument(fmt::format("|0_L> has norm {:.12g}", zero_.norm()));
  }
  if (std::abs(one_.norm() - 1.0) > tol::kStructural) {
    throw std::invalid_argument(fmt::format("|1_L> has norm {:.12g}", one_.norm()));
  }
  const double ov = std::abs(zero_.dot(one_));
  if (ov > tol::kStructural) throw std::invalid_argument(fmt::format("|<0_L|1_L>| = {:.3g}", ov));
  if (stab_) {
    if (stab_->num_qubits() != n_) throw std::invalid_argument("stabilizer length differs from the code length");
    for (const auto& g : stab_->generators()) {
      if ((g.apply(zero_) - zero_).norm() > tol::kStructural || (g.apply(one_) - one_).norm() > tol::kStructural) {
        throw std::invalid_argument(fmt::format("generator {} does not fix the codespace", g.str()));
      }
    }
  }
}

Vector CodeSpace::encode(cplx alpha, cplx beta) const { return alpha * zero_ + beta * one_; }

DenseOperator CodeSpace::projector() const {
  check_density_cap(n_);
  return {n_, zero_ * zero_.adjoint() + one_ * one_.adjoint()};
}

namespace {

Vector retensor(const std::vector<SubcodeFactor>& factors, int bit, int n) {
  DenseState acc;
  std::vector<int> order;
  for (const auto& f : factors) {
    acc = tensor(acc, DenseState(static_cast<int>(f.qubits.size()), bit ? f.one : f.zero));
    order.insert(order.end(), f.qubits.begin(), f.qubits.end());
  }
  if (static_cast<int>(order.size()) != n) return {};
  return permute_qubits(acc, order).amplitudes();
}

}  // namespace

CodeSpace CodeSpace::with_fold_structure(FoldStructure fold) const {
  std::vector<bool> used(n_, false);
  for (const auto& f : fold.factors) {
    if (f.qubits.empty()) throw std::invalid_argument("empty subcode factor");
    for (int q : f.qubits) {
      if (q < 0 || q >= n_ || used[q]) throw std::invalid_argument("fold subsets overlap or leave the register");
      used[q] = true;
    }
    const Eigen::Index d = Eigen::Index{1} << f.qubits.size();
    if (f.zero.size() != d || f.one.size() != d) throw std::invalid_argument("subcode factor has the wrong size");
    if (std::abs(f.zero.dot(f.one)) > tol::kEndToEnd) {
      throw std::invalid_argument(fmt::format("subcode factor on {} is not orthogonal", f.qubits));
    }
  }
  for (int bit = 0; bit < 2; ++bit) {
    const Vector v = retensor(fold.factors, bit, n_);
    if (v.size() > 0 && (v - basis(bit)).norm() > tol::kEndToEnd) {
      throw std::invalid_argument("fold factors do not reproduce the logical basis");
    }
  }
  CodeSpace out = *this;
  out.fold_ = std::move(fold);
  return out;
}

std::vector<std::string> builtin_code_names() {
  return {"five_qubit", "steane", "shor", "bitflip3", "phaseflip3", "ghz3_subcode"};
}

namespace {

CodeSpace from_stabilizer(const std::string& name, std::vector<std::string> gens, const std::string& lx,
                          const std::string& lz, int distance) {
  std::vector<PauliString> g;
  for (const auto& s : gens) g.push_back(PauliString::parse(s));
  StabilizerGroup stab(std::move(g), PauliString::parse(lx), PauliString::parse(lz));
  auto [zero, one] = codewords(stab);
  return CodeSpace(name, std::move(zero), std::move(one), distance, std::move(stab));
}

}  // namespace

CodeSpace builtin_code(const std::string& name) {
  if (name == "five_qubit") {
    return from_stabilizer(name, {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}, "XXXXX", "ZZZZZ", 3);
  }
  if (name == "steane") {
    return from_stabilizer(name, {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"},
                           "XXXXXXX", "ZZZZZZZ", 3);
  }
  if (name == "shor") {
    return from_stabilizer(name,
                           {"ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI", "IIIIIIIZZ",
                            "XXXXXXIII", "IIIXXXXXX"},
                           "ZZZZZZZZZ", "XXXXXXXXX", 3);
  }
  if (name == "bitflip3") return from_stabilizer(name, {"ZZI", "IZZ"}, "XXX", "ZZZ", 1);
  if (name == "phaseflip3") return from_stabilizer(name, {"XXI", "IXX"}, "ZZZ", "XXX", 1);
  if (name == "ghz3_subcode") return from_stabilizer(name, {"ZZI", "IZZ"}, "ZZZ", "XXX", 1);
  throw std::invalid_argument(fmt::format("unknown code '{}'", name));
}

CodeSpace trivial_code() { return CodeSpace("trivial", Vector::Unit(2, 0), Vector::Unit(2, 1), 1); }

CodeSpace ghz_code(int k) {
  if (k < 1) throw std::invalid_argument("ghz code needs at least one qubit");
  check_state_cap(k);
  const Eigen::Index d = Eigen::Index{1} << k;
  const double a = std::numbers::sqrt2 / 2;
  Vector zero = Vector::Zero(d);
  Vector one = Vector::Zero(d);
  zero(0) = a;
  zero(d - 1) = a;
  one(0) = a;
  one(d - 1) = -a;
  return CodeSpace(fmt::format("ghz{}", k), zero, one, 1);
}

KlReport kl_check(const Vector& zero, const Vector& one, int max_weight) {
  const int n = qubits_for_dim(zero.size());
  check_scan_cap(n);
  if (max_weight < 0 || max_weight > n) {
    throw std::invalid_argument(fmt::format("max_weight {} outside [0,{}]", max_weight, n));
  }
  KlReport rep;
  rep.max_weight = max_weight;
  for_each_pauli_up_to_weight(n, max_weight, [&](const PauliString& e) {
    ++rep.checked;
    const cplx a0 = e.sandwich(zero, zero);
    const cplx a1 = e.sandwich(one, one);
    const cplx off = e.sandwich(zero, one);
    const bool diag = std::abs(a0 - a1) > tol::kEndToEnd;
    const bool offd = std::abs(off) > tol::kEndToEnd;
    if (diag || offd) {
      if (rep.violations.size() < kMaxReportedViolations) rep.violations.push_back({e, diag, offd, a0 - a1, off});
      ++rep.violation_count;
    } else if (std::abs(a0) > tol::kEndToEnd) {
      rep.lambdas.push_back({e, a0});
    }
    return true;
  });
  return rep;
}

KlReport kl_check(const CodeSpace& code, int max_weight) {
  return kl_check(code.logical_zero(), code.logical_one(), max_weight);
}

int kl_distance(const CodeSpace& code) {
  const int n = code.n_physical();
  check_scan_cap(n);
  int found = n + 1;
  for_each_pauli_up_to_weight(n, n, [&](const PauliString& e) {
    const cplx a0 = e.sandwich(code.logical_zero(), code.logical_zero());
    const cplx a1 = e.sandwich(code.logical_one(), code.logical_one());
    const cplx off = e.sandwich(code.logical_zero(), code.logical_one());
    if (std::abs(a0 - a1) > tol::kEndToEnd || std::abs(off) > tol::kEndToEnd) {
      found = e.weight();
      return false;
    }
    return true;
  });
  return found;
}

int verified_distance(const CodeSpace& code) {
  if (code.stabilizer()) return code_distance(*code.stabilizer());
  return kl_distance(code);
}

ErasureRecovery::ErasureRecovery(const CodeSpace& code, std::vector<int> erased) : erased_(std::move(erased)) {
  const int n = code.n_physical();
  std::sort(erased_.begin(), erased_.end());
  if (std::adjacent_find(erased_.begin(), erased_.end()) != erased_.end()) {
    throw std::invalid_argument("erased qubit listed twice");
  }
  for (int q : erased_) {
    if (q < 0 || q >= n) throw std::out_of_range(fmt::format("erased qubit {} out of range", q));
  }
  if (static_cast<int>(erased_.size()) >= n) throw std::invalid_argument("cannot erase every qubit");
  if (!erased_.empty()) {
    const int d = code.declared_distance() ? *code.declared_distance() : verified_distance(code);
    if (static_cast<int>(erased_.size()) > d - 1) {
      throw std::invalid_argument(
          fmt::format("erasure of {} qubits exceeds d-1 = {}", erased_.size(), d - 1));
    }
  }
  kept_ = complement_of(n, erased_);
  const auto kept_off = position_offsets(n, kept_);
  const auto erased_off = position_offsets(n, erased_);
  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  const auto de = static_cast<Eigen::Index>(erased_off.size());

  // Column i*de + j holds the branch of |i_L> with the erased qubits in |j>.
  Matrix phi(dk, 2 * de);
  for (int i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < de; ++j) {
      for (Eigen::Index k = 0; k < dk; ++k) {
        phi(k, i * de + j) = code.basis(i)(static_cast<Eigen::Index>(kept_off[k] | erased_off[j]));
      }
    }
  }
  // N(sigma) = phi phi^dagger / 2, so N^{-1/2} = sqrt(2) W S^{-1} W^dagger on its support.
  Eigen::BDCSVD<Matrix> svd(phi, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Matrix w_scaled = svd.matrixU();
  Eigen::Index support = 0;
  for (Eigen::Index c = 0; c < sv.size(); ++c) {
    if (sv(c) > tol::kRank) {
      w_scaled.col(support) = svd.matrixU().col(c) * (std::numbers::sqrt2 / sv(c));
      ++support;
    }
  }
  if (support == 0) throw RecoveryError("recovery channel has empty support");
  const Matrix w = svd.matrixU().leftCols(support);
  const Matrix m_half = w_scaled.leftCols(support) * w.adjoint();
  for (Eigen::Index j = 0; j < de; ++j) {
    Matrix b(2, dk);
    for (int i = 0; i < 2; ++i) b.row(i) = phi.col(i * de + j).adjoint() * m_half / std::numbers::sqrt2;
    kraus_.push_back(std::move(b));
  }

  // Exactness on the logical probes.
  const double h = std::numbers::sqrt2 / 2;
  const cplx probes[4][2] = {{1, 0}, {0, 1}, {h, h}, {h, cplx(0, h)}};
  for (const auto& pr : probes) {
    Vector psi(2);
    psi << pr[0], pr[1];
    Matrix rho = Matrix::Zero(2, 2);
    for (Eigen::Index j = 0; j < de; ++j) {
      const Vector branch = pr[0] * phi.col(j) + pr[1] * phi.col(de + j);
      for (const auto& b : kraus_) {
        const Vector out = b * branch;
        rho += out * out.adjoint();
      }
    }
    const double fid = std::real(psi.dot(rho * psi));
    if (fid < 1.0 - tol::kEndToEnd) {
      throw RecoveryError(fmt::format("erasure of {} is not correctable (fidelity {:.12g})", erased_, fid));
    }
  }
}

Matrix ErasureRecovery::recover_logical(const Matrix& kept_density) const {
  Matrix rho = Matrix::Zero(2, 2);
  for (const auto& b : kraus_) {
    if (b.cols() != kept_density.rows()) throw std::invalid_argument("kept density has the wrong size");
    rho += b * kept_density * b.adjoint();
  }
  return rho;
}

DenseOperator erasure_recover(const CodeSpace& code, std::span<const int> erased, const DenseOperator& corrupted) {
  const int n = code.n_physical();
  if (corrupted.num_qubits() != n) throw std::invalid_argument("corrupted state has the wrong size");
  ErasureRecovery rec(code, std::vector<int>(erased.begin(), erased.end()));
  const DenseOperator kept = partial_trace(corrupted, rec.kept());
  const Matrix rho_l = rec.recover_logical(kept.matrix());
  Matrix v(code.logical_zero().size(), 2);
  v.col(0) = code.logical_zero();
  v.col(1) = code.logical_one();
  return {n, v * rho_l * v.adjoint()};
}

CodeSpace concatenate(const CodeSpace& outer, const CodeSpace& inner) {
  const int no = outer.n_physical();
  const int ni = inner.n_physical();
  check_state_cap(no * ni);
  Matrix v(inner.logical_zero().size(), 2);
  v.col(0) = inner.logical_zero();
  v.col(1) = inner.logical_one();
  auto lift = [&](const Vector& outer_state) {
    std::vector<Eigen::Index> dims(no, 2);
    Vector cur = outer_state;
    for (int q = 0; q < no; ++q) {
      cur = apply_mode(cur, dims, q, v);
      dims[q] = v.rows();
    }
    return cur;
  };
  return CodeSpace(fmt::format("concat({},{})", outer.name(), inner.name()), lift(outer.logical_zero()),
                   lift(outer.logical_one()));
}

namespace {

struct Part {
  std::vector<int> qubits;
  Vector state;
};

// Finest product factorization of a state over the listed qubits.
std::vector<Part> finest(const Vector& state, const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  if (k == 1) return {{qubits, state}};
  std::vector<int> all(k);
  for (int t = 0; t < k; ++t) all[t] = t;
  for (int s = 1; s < k; ++s) {
    // Position 0 plus every (s-1)-combination of the remaining positions.
    std::vector<int> pick(s - 1);
    for (int i = 0; i < s - 1; ++i) pick[i] = i + 1;
    while (true) {
      std::vector<int> a = {0};
      a.insert(a.end(), pick.begin(), pick.end());
      const std::vector<int> b = complement_of(k, a);
      const auto a_off = position_offsets(k, a);
      const auto b_off = position_offsets(k, b);
      Matrix m(static_cast<Eigen::Index>(a_off.size()), static_cast<Eigen::Index>(b_off.size()));
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = state(static_cast<Eigen::Index>(a_off[i] | b_off[j]));
      }
      Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv.size() < 2 || sv(1) <= tol::kSchmidt) {
        std::vector<int> qa;
        std::vector<int> qb;
        for (int t : a) qa.push_back(qubits[t]);
        for (int t : b) qb.push_back(qubits[t]);
        Vector va = svd.matrixU().col(0);
        Vector vb = sv(0) * svd.matrixV().col(0).conjugate();
        std::vector<Part> out = {{qa, va}};
        auto rest = finest(vb, qb);
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
      }
      int i = s - 2;
      while (i >= 0 && pick[i] == k - 1 - (s - 2 - i)) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < s - 1; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return {{qubits, state}};
}

// Sorts the part's qubits and fixes the phase so the largest amplitude is real positive.
Part canonical(Part p) {
  const int k = static_cast<int>(p.qubits.size());
  std::vector<int> sorted = p.qubits;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> perm(k);
  for (int t = 0; t < k; ++t) {
    perm[t] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), p.qubits[t]) - sorted.begin());
  }
  Vector v = permute_qubits(DenseState(k, p.state), perm).amplitudes();
  v.normalize();
  Eigen::Index lead = 0;
  const double top = v.cwiseAbs().maxCoeff();
  while (std::abs(v(lead)) < top - 1e-12) ++lead;
  v *= std::conj(v(lead)) / std::abs(v(lead));
  return {sorted, v};
}

std::vector<Part> canonical_parts(const Vector& state, int n) {
  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) qubits[q] = q;
  std::vector<Part> parts;
  for (auto& p : finest(state, qubits)) parts.push_back(canonical(std::move(p)));
  std::sort(parts.begin(), parts.end(), [](const Part& a, const Part& b) { return a.qubits < b.qubits; });
  return parts;
}

std::string describe(const std::vector<Part>& parts) {
  std::vector<std::string> s;
  for (const auto& p : parts) s.push_back(fmt::format("{}", p.qubits));
  return fmt::format("{}", fmt::join(s, " "));
}

}  // namespace

FoldStructure rfold_decompose(const CodeSpace& code) {
  const int n = code.n_physical();
  check_scan_cap(n);
  const auto p0 = canonical_parts(code.logical_zero(), n);
  const auto p1 = canonical_parts(code.logical_one(), n);
  bool aligned = p0.size() == p1.size();
  for (std::size_t i = 0; aligned && i < p0.size(); ++i) aligned = p0[i].qubits == p1[i].qubits;
  if (!aligned) {
    throw MisalignedFactorization(
        fmt::format("|0_L> factors as {} but |1_L> factors as {}", describe(p0), describe(p1)));
  }
  FoldStructure fold;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    SubcodeFactor f;
    f.qubits = p0[i].qubits;
    f.zero = p0[i].state;
    f.one = p1[i].state;
    f.overlap = std::abs(f.zero.dot(f.one));
    f.orthogonal = f.overlap <= tol::kEndToEnd;
    fold.factors.push_back(std::move(f));
  }
  // Global phases: push each basis state's residual phase into the first factor.
  for (int bit = 0; bit < 2; ++bit) {
    const Vector prod = retensor(fold.factors, bit, n);
    const cplx ov = prod.dot(code.basis(bit));
    Vector& first = bit ? fold.factors.front().one : fold.factors.front().zero;
    first *= ov / std::abs(ov);
    if ((retensor(fold.factors, bit, n) - code.basis(bit)).norm() > tol::kEndToEnd) {
      throw std::logic_error("factorization does not reproduce the logical state");
    }
  }
  return fold;
}

const char* to_string(CodeClass c) {
  switch (c) {
    case CodeClass::generic: return "generic";
    case CodeClass::r_fold: return "r_fold";
    case CodeClass::maximally_redundant: return "maximally_redundant";
  }
  return "?";
}

Classification classify(const CodeSpace& code) { return classify(code, verified_distance(code)); }

Classification classify(const CodeSpace& code, int distance) {
  const FoldStructure fold = rfold_decompose(code);
  Classification c;
  c.r = fold.r();
  c.distance = distance;
  bool all_distance_one = true;
  for (const auto& f : fold.factors) {
    SubcodeReport rep;
    rep.qubits = f.qubits;
    const int k = static_cast<int>(f.qubits.size());
    for (int q = 0; q < k; ++q) {
      for (char l : {'X', 'Y', 'Z'}) {
        const PauliString e = PauliString::single(k, q, l);
        if (std::abs(e.sandwich(f.zero, f.zero) - e.sandwich(f.one, f.one)) > tol::kEndToEnd) {
          rep.diagonal_violation = true;
        }
        if (std::abs(e.sandwich(f.zero, f.one)) > tol::kEndToEnd) rep.off_diagonal_violation = true;
      }
    }
    all_distance_one = all_distance_one && rep.distance_one();
    c.subcodes.push_back(std::move(rep));
  }
  if (c.r == distance && distance >= 3 && all_distance_one) {
    c.kind = CodeClass::maximally_redundant;
  } else if (c.r > 1) {
    c.kind = CodeClass::r_fold;
  }
  return c;
}

bool is_additive(const CodeSpace& code) {
  const int n = code.n_physical();
  if (n > kMaxAdditiveQubits) {
    throw CapExceeded(fmt::format("additivity check on {} qubits exceeds the cap of {}", n, kMaxAdditiveQubits));
  }
  const auto d = static_cast<std::uint64_t>(1) << n;
  const double unit = 1.0 / static_cast<double>(d / 2);
  const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> terms;  // qubit masks -> sign
  std::vector<cplx> w(d);
  for (std::uint64_t x = 0; x < d; ++x) {
    for (std::uint64_t b = 0; b < d; ++b) {
      const auto i = static_cast<Eigen::Index>(b);
      const auto j = static_cast<Eigen::Index>(b ^ x);
      w[b] = std::conj(code.logical_zero()(j)) * code.logical_zero()(i) +
             std::conj(code.logical_one()(j)) * code.logical_one()(i);
    }
    // Walsh-Hadamard transform over z.
    for (std::uint64_t h = 1; h < d; h <<= 1) {
      for (std::uint64_t a = 0; a < d; a += 2 * h) {
        for (std::uint64_t b = a; b < a + h; ++b) {
          const cplx u = w[b];
          const cplx v = w[b + h];
          w[b] = u + v;
          w[b + h] = u - v;
        }
      }
    }
    for (std::uint64_t z = 0; z < d; ++z) {
      const cplx coeff = ipow[std::popcount(x & z) % 4] * w[z] / static_cast<double>(d);
      if (std::abs(coeff) <= tol::kEndToEnd) continue;
      if (std::abs(coeff.imag()) > tol::kEndToEnd || std::abs(std::abs(coeff.real()) - unit) > tol::kEndToEnd) {
        return false;
      }
      terms[{to_index_mask(n, x), to_index_mask(n, z)}] = coeff.real() > 0 ? 1 : -1;
    }
  }
  for (const auto& [a, sa] : terms) {
    for (const auto& [b, sb] : terms) {
      const PauliString prod = PauliString(n, a.first, a.second) * PauliString(n, b.first, b.second);
      if (prod.phase_exponent() % 2 != 0) return false;
      const auto it = terms.find({prod.x_bits(), prod.z_bits()});
      if (it == terms.end()) return false;
      const int sign = sa * sb * (prod.phase_exponent() == 2 ? -1 : 1);
      if (it->second != sign) return false;
    }
  }
  return true;
}

}  // namespace qcl
