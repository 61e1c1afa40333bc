// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/bounds.hpp"
#include "qcl/cli.hpp"
#include "qcl/clifford.hpp"
#include "qcl/codes.hpp"
#include "qcl/errors.hpp"
#include "qcl/gates.hpp"
#include "qcl/qhe.hpp"
#include "qcl/qla.hpp"
#include "qcl/security.hpp"
#include "qcl/stabilizer.hpp"
#include "qcl/transversal.hpp"

using namespace qcl;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void info(const std::string& what) { notes.push_back(what); }
};

std::shared_ptr<const CodeSpace> shared(const CodeSpace& c) { return std::make_shared<const CodeSpace>(c); }
std::shared_ptr<const CodeSpace> shared(const std::string& name) { return shared(builtin_code(name)); }

std::vector<SecretKey> all_keys(int n, int m) {
  std::vector<SecretKey> out;
  SecretKey k{std::vector<int>(n, 1)};
  while (true) {
    out.push_back(k);
    int j = n - 1;
    while (j >= 0 && k.s[j] == m) k.s[j--] = 1;
    if (j < 0) break;
    ++k.s[j];
  }
  return out;
}

std::vector<int> bits_of(std::uint64_t v, int p) {
  std::vector<int> x(p);
  for (int b = 0; b < p; ++b) x[b] = static_cast<int>((v >> (p - 1 - b)) & 1);
  return x;
}

Matrix kron_all(const std::vector<Matrix>& fs) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : fs) out = kron(out, f);
  return out;
}

Matrix logical_action(const CodeSpace& c, const Matrix& op) {
  Matrix out(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = c.basis(i).dot(op * c.basis(j));
  return out;
}

bool same_up_to_phase(const Matrix& a, const Matrix& b) {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < 1e-9) return false;
  const cplx ph = a(r, c) / b(r, c);
  return std::abs(std::abs(ph) - 1.0) < 1e-9 && (a - ph * b).norm() < 1e-9;
}

Outcome kl_suite() {
  Outcome o;
  for (const std::string name : {"five_qubit", "steane", "shor"}) {
    const CodeSpace c = builtin_code(name);
    o.require(kl_check(c, 2).passed(), name + " passes KL at weight 2");
    o.require(!kl_check(c, 3).passed(), name + " fails KL at weight 3");
    const int stab = code_distance(*c.stabilizer());
    const int kl = kl_distance(c);
    o.require(stab == 3, name + " stabilizer distance 3");
    o.require(kl == stab, name + " oracles agree");
  }
  return o;
}

// Applies the gate to the listed rows and compares every key and input.
void check_scheme(Outcome& o, const QheParams& p, const std::string& label, const ProductOperator& gate,
                  const std::vector<int>& rows, const std::function<std::vector<int>(std::vector<int>)>& f) {
  int bad = 0;
  for (const auto& key : all_keys(p.n(), p.m)) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << p.p); ++v) {
      const auto x = bits_of(v, p.p);
      const auto d = decrypt(p, evaluate(p, encrypt(p, key, x), gate, rows), key);
      if (d.bits != f(x) || std::abs(d.probability - 1.0) > 1e-9) ++bad;
    }
  }
  o.require(bad == 0, fmt::format("{}: {} wrong decryptions", label, bad));
}

Outcome correctness() {
  Outcome o;
  const QheParams five = QheParams::create(shared("five_qubit"), 1, 2);
  check_scheme(o, five, "five_qubit I", ProductOperator::uniform(five.code, gates::I()), {0},
               [](std::vector<int> x) { return x; });
  check_scheme(o, five, "five_qubit X", ProductOperator::uniform(five.code, gates::X()), {0},
               [](std::vector<int> x) { return std::vector<int>{1 - x[0]}; });

  const QheParams st = QheParams::create(shared("steane"), 2, 2);
  const auto id = ProductOperator::uniform(st.code, gates::I());
  const auto x = ProductOperator::uniform(st.code, gates::X());
  const ProductOperator cx(st.code, 2, std::vector<Matrix>(7, gates::CX()));
  check_scheme(o, st, "steane I", id, {0}, [](std::vector<int> v) { return v; });
  check_scheme(o, st, "steane X row 0", x, {0}, [](std::vector<int> v) { return std::vector<int>{1 - v[0], v[1]}; });
  check_scheme(o, st, "steane X row 1", x, {1}, [](std::vector<int> v) { return std::vector<int>{v[0], 1 - v[1]}; });
  check_scheme(o, st, "steane CX", cx, {0, 1}, [](std::vector<int> v) { return std::vector<int>{v[0], v[0] ^ v[1]}; });
  check_scheme(o, st, "steane CX reversed", cx, {1, 0},
               [](std::vector<int> v) { return std::vector<int>{v[0] ^ v[1], v[1]}; });
  return o;
}

Outcome gram_oracle() {
  Outcome o;
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const auto keys = all_keys(4, 2);
  double worst = 0.0;
  double worst_disjoint = 0.0;
  int pairs = 0;
  for (const auto& a : keys) {
    for (const auto& b : keys) {
      const double f = gram_overlap(p, {0}, a, b);
      worst = std::max(worst, std::abs(f - gram_overlap_dense(p, {0}, a, b)));
      bool disjoint = true;
      for (int j = 0; j < 4; ++j) disjoint = disjoint && a.s[j] != b.s[j];
      if (disjoint) worst_disjoint = std::max(worst_disjoint, std::abs(f - 1.0));
      ++pairs;
    }
  }
  o.require(pairs == 256, "256 key pairs");
  o.require(worst <= 1e-9, fmt::format("factorized vs dense max gap {:.3g}", worst));
  o.require(worst_disjoint <= 1e-12, fmt::format("disjoint pairs max gap {:.3g}", worst_disjoint));
  o.info(fmt::format("max gap {:.3g}", worst));
  return o;
}

Outcome security_chain() {
  Outcome o;
  struct Point {
    std::string code;
    int p;
    int m;
  };
  int points = 0;
  for (const auto& pt : std::vector<Point>{{"five_qubit", 1, 1}, {"five_qubit", 2, 1}, {"five_qubit", 1, 2},
                                           {"steane", 1, 1}}) {
    const QheParams p = QheParams::create(shared(pt.code), pt.p, pt.m);
    if (p.server_qubits() > kMaxExactServerQubits) continue;
    const SecurityBound b = security_bound(p);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << pt.p); ++v) {
      const auto x = bits_of(v, pt.p);
      const ExactSecurity ex = security_exact(p, x, x);
      o.require(ex.dist_to_uniform_x <= b.bound_1norm + 1e-9,
                fmt::format("{} p={} m={}: exact {:.6g} <= bound {:.6g}", pt.code, pt.p, pt.m, ex.dist_to_uniform_x,
                            b.bound_1norm));
    }
    ++points;
  }
  o.require(points == 4, "all dense-feasible points visited");

  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const SecurityBound b = security_bound(p);
  for (int l = 0; l <= 4; ++l) {
    const double want = std::tgamma(5.0) / (std::tgamma(l + 1.0) * std::tgamma(5.0 - l)) / 16.0;
    o.require(std::abs(b.p_ell[l] - want) <= 1e-12, fmt::format("p_{} = {}", l, want));
  }
  o.require(b.strict_mixing, "strict mixing for every intersecting pair");
  o.require(b.empirical_c > 0.0 && b.empirical_c < 1.0, fmt::format("empirical_c = {:.6g} in (0,1)", b.empirical_c));
  o.info(fmt::format("bound {:.6g}, empirical_c {:.6g}", b.bound_1norm, b.empirical_c));
  return o;
}

Outcome epsilon_sweep() {
  Outcome o;
  const Epsilon e = epsilon_formula(2, 4, 4, 0.5);
  o.require(std::abs(e.value - 0.15334) <= 1e-5, fmt::format("epsilon(2,4,4,0.5) = {:.7f}", e.value));
  double prev = 1e300;
  std::string seq;
  for (int p = 2; p <= 12; ++p) {
    const double k = std::ldexp(1.0, p);
    const double m = std::ceil(std::pow(k, 0.9));
    const Epsilon x = epsilon_formula(k, m, 4, 0.9);
    o.require(!x.indeterminate && x.value < prev, fmt::format("decreasing at p = {}", p));
    prev = x.value;
    seq += fmt::format("{}{:.4g}", seq.empty() ? "" : ",", x.value);
  }
  o.info("n=4 c=0.9 eps=" + seq);
  return o;
}

Outcome rank_suite() {
  Outcome o;
  const QheParams open = QheParams::variant(shared(ghz_code(2)), 1, 2, {});
  const RankExperiment r = rank_experiment(open, {0});
  o.require(r.rank <= 16, fmt::format("rank {} <= 16", r.rank));
  o.require(r.exact_distance >= 1.5 - 1e-6, fmt::format("distance {:.6g} >= 1.5 (dimension {})", r.exact_distance, r.dim));
  const QheParams held = QheParams::variant(shared(ghz_code(3)), 1, 2, {2});
  const RankExperiment rw = rank_experiment(held, {0});
  o.require(rw.rank > r.rank, fmt::format("rank grows with withholding: {} -> {}", r.rank, rw.rank));
  const QheParams wide = QheParams::variant(shared(ghz_code(1)), 3, 2, {});
  const RankExperiment rb = rank_experiment(wide, {0, 0, 0});
  o.info(fmt::format("(n=1,p=3,m=2): rank {}/{} distance {:.6g}", rb.rank, rb.dim, rb.exact_distance));
  return o;
}

Outcome overlap_identity() {
  Outcome o;
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(1, 2);
    const int a = size(rng);
    const int s = size(rng);
    const int b = size(rng);
    const DenseOperator rho = random_density(a + s, 1 << (a + s), rng);
    const DenseOperator sigma = random_density(s + b, 1 << (s + b), rng);
    const cplx lhs = (tensor(rho, DenseOperator::identity(b)) * tensor(DenseOperator::identity(a), sigma)).trace();
    std::vector<int> kr(s);
    std::iota(kr.begin(), kr.end(), a);
    std::vector<int> ks(s);
    std::iota(ks.begin(), ks.end(), 0);
    const cplx rhs = (partial_trace(rho, kr).matrix() * partial_trace(sigma, ks).matrix()).trace();
    ok += std::abs(lhs - rhs) <= 1e-10;
  }
  o.require(ok == 200, fmt::format("{}/200 instances", ok));
  return o;
}

Outcome commutators_and_ghz() {
  Outcome o;
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix toff_x = group_commutator(gates::Toffoli(), kron_all({gates::X(), i2, i2}));
  const double e1 = (toff_x - kron(i2, gates::CX())).norm();
  o.require(e1 <= 1e-12, fmt::format("[Toff, X(1)] = CX(2,3), error {:.3g}", e1));
  // CX(1,2) read as target 1, control 2.
  const Matrix cx_21 = gates::embed(gates::CX(), std::vector<int>{1, 0}, 2).matrix();
  const double e2 = (group_commutator(cx_21, kron(gates::Z(), i2)) - kron(i2, gates::Z())).norm();
  o.require(e2 <= 1e-12, fmt::format("[CX, Z on target] = Z on control, error {:.3g}", e2));
  const double lit = (group_commutator(gates::CX(), kron(gates::Z(), i2)) - Matrix::Identity(4, 4)).norm();
  o.info(fmt::format("control-first reading gives the identity (error {:.3g})", lit));

  const CodeSpace g = builtin_code("ghz3_subcode");
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  int min_x = 99;
  int min_z = 99;
  for_each_pauli_up_to_weight(3, 3, [&](const PauliString& p) {
    const Matrix m = p.to_matrix();
    const Matrix a = logical_action(g, m);
    // Must map the codespace into itself.
    if (std::abs((a.adjoint() * a).trace().real() - 2.0) > 1e-9) return true;
    if (same_up_to_phase(a, x)) min_x = std::min(min_x, p.weight());
    if (same_up_to_phase(a, z)) min_z = std::min(min_z, p.weight());
    return true;
  });
  o.require(min_x == 1, fmt::format("min logical X weight {}", min_x));
  o.require(min_z >= 3, fmt::format("min logical Z weight {}", min_z));
  return o;
}

Outcome cleaning_and_levels() {
  Outcome o;
  std::mt19937_64 rng(2027);
  const std::vector<std::string> names{"five_qubit", "steane", "shor"};
  int verified = 0;
  int attempts = 0;
  while (verified < 20 && attempts < 200) {
    const CodeSpace c = builtin_code(names[attempts % names.size()]);
    const auto& s = *c.stabilizer();
    const int n = c.n_physical();
    ++attempts;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<int> reg;
    const int want = 1 + attempts % 2;
    while (static_cast<int>(reg.size()) < want) reg.insert(pick(rng));
    const std::vector<int> region(reg.begin(), reg.end());
    if (!is_cleanable(s, region)) continue;
    std::uniform_int_distribution<std::uint64_t> mask(0, (std::uint64_t{1} << s.generators().size()) - 1);
    const PauliString logical = (attempts % 2 ? s.logical_x() : s.logical_z()) * s.element(mask(rng));
    const PauliString cleaned = clean_operator(s, logical, region);
    bool ok = s.in_span(cleaned * logical);
    for (int q : region) ok = ok && cleaned.letter(q) == 'I';
    ok = ok && same_up_to_phase(logical_action(c, cleaned.to_matrix()), logical_action(c, logical.to_matrix()));
    o.require(ok, fmt::format("cleaning case {}", attempts));
    verified += ok;
  }
  o.require(verified == 20, fmt::format("{} cleaning cases verified", verified));

  const std::vector<std::pair<std::string, int>> levels{{"X", 1}, {"H", 2}, {"CX", 2}, {"Toffoli", 3}, {"CCZ", 3}};
  for (const auto& [name, lvl] : levels) {
    const auto got = clifford_level(DenseOperator(gates::named(name)));
    o.require(got == lvl, fmt::format("level of {} is {}", name, lvl));
  }

  for (const std::string name : {"five_qubit", "steane"}) {
    const auto code = shared(name);
    const int n = code->n_physical();
    std::vector<std::vector<int>> parts;
    for (int q = 0; q < n; ++q) parts.push_back({q});
    const std::vector<DenseOperator> logicals{ProductOperator::uniform(code, gates::X()).dense()};
    const auto rep = transversal_level_bound(*code->stabilizer(), parts, logicals);
    o.require(rep.bound == n - 1, fmt::format("{} singleton bound {}", name, rep.bound));
    bool scalar_ok = false;
    for (const auto& c : rep.checks) {
      if (c.is_scalar) scalar_ok = std::abs(std::abs(c.scalar) - 1.0) <= 1e-9 && c.preserves_codespace;
    }
    o.require(scalar_ok && rep.all_passed(), name + " base-case scalar check");
  }
  return o;
}

Outcome classification() {
  Outcome o;
  const Classification shor = classify(builtin_code("shor"));
  o.require(shor.kind == CodeClass::maximally_redundant && shor.r == 3 && shor.distance == 3,
            fmt::format("shor is {} with r = {}", to_string(shor.kind), shor.r));
  for (const std::string name : {"five_qubit", "steane"}) {
    const Classification c = classify(builtin_code(name));
    o.require(c.kind == CodeClass::generic, fmt::format("{} is {}", name, to_string(c.kind)));
  }
  for (const auto& name : builtin_code_names()) o.require(is_additive(builtin_code(name)), name + " is additive");
  const CodeSpace five = builtin_code("five_qubit");
  Vector z = five.logical_zero();
  Vector w = five.logical_one();
  const std::vector<int> q0{0};
  apply_gate(z, 5, gates::T(), q0);
  apply_gate(w, 5, gates::T(), q0);
  o.require(!is_additive(CodeSpace("five_qubit_t", z, w)), "T-rotated variant is not additive");
  return o;
}

Outcome bounds_suite() {
  Outcome o;
  o.require(std::abs(nayak_lower_bound(4, 1.0) - 4.0) <= 1e-12, "nayak(4, 1) = 4");
  o.require(std::abs(static_cast<double>(qfhe_comm_bound(10, 0.0)) - 1024.0) <= 1e-9, "qfhe(10, 0) = 1024");
  const CrossingReport all = crossing_analysis(4, 0.9, "all_boolean", 1, 30);
  o.require(all.verdict == Verdict::bound_excludes_scheme,
            fmt::format("all_boolean within p <= 30: {}", to_string(all.verdict)));
  const CrossingReport longer = crossing_analysis(4, 0.9, "all_boolean", 1, 200);
  if (longer.crossover_p) o.info(fmt::format("all_boolean crossover at p = {}", *longer.crossover_p));
  const CrossingReport cl = crossing_analysis(4, 0.9, "clifford", 1, 30);
  o.require(!cl.crossover_p.has_value(), "clifford has no crossover");
  o.info(fmt::format("clifford verdict {}", to_string(cl.verdict)));
  return o;
}

Outcome qrac() {
  Outcome o;
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const std::vector<BooleanFamilyMember> fam{
      {"I", ProductOperator::uniform(p.code, gates::I()), gates::I()},
      {"X", ProductOperator::uniform(p.code, gates::X()), gates::X()},
  };
  const QracReport rep = qrac_harness(p, fam, 1);
  for (const auto& q : rep.queries) {
    o.require(std::abs(q.success - 1.0) <= 1e-9, fmt::format("{} on {} succeeds", q.function, format_bits(q.x)));
  }
  o.require(rep.communication_qubits == static_cast<long long>(p.m) * p.n() * p.p,
            fmt::format("communication {} = m n p", rep.communication_qubits));
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::string scheme = std::string(QCL_DATA_DIR) + "/five_qubit.scheme";
  const std::vector<std::vector<std::string>> cmds{
      {"--machine", "--seed", "5", "qhe", "demo", "--code", "five_qubit", "--m", "3", "--p", "1"},
      {"--machine", "qhe", "demo", "--config", scheme},
      {"--machine", "--seed", "3", "qhe", "demo", "--code", "steane", "--m", "2", "--p", "2", "--gate", "CX",
       "--target", "CX", "--input", "10"},
      {"--machine", "--seed", "8", "--workers", "2", "qhe", "security", "--code", "five_qubit", "--m", "2", "--p",
       "1"},
      {"--machine", "--seed", "4", "qhe", "security", "--code", "five_qubit", "--m", "3", "--p", "1", "--sample",
       "2000", "--max-pairs", "100"},
      {"--machine", "--seed", "6", "qhe", "qrac", "--code", "five_qubit", "--m", "2", "--p", "1", "--family", "I,X"},
      {"--machine", "qhe", "rank-experiment", "--n", "2", "--p", "1", "--m", "2"},
      {"--machine", "--workers", "3", "transversal", "search", "--code", "steane", "--target", "H"},
      {"--machine", "bounds", "crossing", "--csv"},
  };
  for (const auto& c : cmds) {
    std::ostringstream a;
    std::ostringstream b;
    std::ostringstream err;
    const int ca = cli::run(c, a, err);
    const int cb = cli::run(c, b, err);
    std::string joined;
    for (const auto& s : c) joined += s + " ";
    o.require(ca == cli::kOk && cb == cli::kOk, "exit 0: " + joined);
    o.require(a.str() == b.str() && !a.str().empty(), "identical output: " + joined);
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    double time_limit_s;
  };
  const std::vector<Criterion> criteria{
      {1, "KL/distance suite", kl_suite, 30.0},
      {2, "homomorphic correctness", correctness, 60.0},
      {3, "Gram identity oracle", gram_oracle, 0.0},
      {4, "security bound chain", security_chain, 0.0},
      {5, "epsilon formula", epsilon_sweep, 0.0},
      {6, "rank experiment", rank_suite, 0.0},
      {7, "partial-trace identity", overlap_identity, 0.0},
      {8, "commutator identities and GHZ weights", commutators_and_ghz, 0.0},
      {9, "cleaning, hierarchy levels, level bound", cleaning_and_levels, 0.0},
      {10, "r-fold classification", classification, 0.0},
      {11, "communication bounds", bounds_suite, 0.0},
      {12, "QRAC harness", qrac, 0.0},
      {13, "determinism", determinism, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0) o.require(secs < c.time_limit_s, fmt::format("runtime {:.2f}s < {}s", secs, c.time_limit_s));
    failed += !o.pass;
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::cout << fmt::format("{} {:2d} {} ({:.2f}s){}{}\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                             detail.empty() ? "" : " :: ", detail);
  }
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
