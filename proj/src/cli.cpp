#include "qcl/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "qcl/bounds.hpp"
#include "qcl/clifford.hpp"
#include "qcl/code_io.hpp"
#include "qcl/codes.hpp"
#include "qcl/errors.hpp"
#include "qcl/gates.hpp"
#include "qcl/qhe.hpp"
#include "qcl/security.hpp"
#include "qcl/tolerance.hpp"
#include "qcl/transversal.hpp"

namespace qcl::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return fmt::format("{:.12g}", v); }
std::string num(long double v) { return fmt::format("{:.12g}", v); }
std::string yes(bool b) { return b ? "true" : "false"; }

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    if constexpr (std::is_floating_point_v<T>) {
      s += num(v[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      s += v[i];
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s;
}

// Records are lines of key/value pairs: "k=v k2=v2" in machine mode,
// "k: v  k2: v2" otherwise.
class Reporter {
 public:
  Reporter(std::ostream& os, bool machine) : os_(os), machine_(machine) {}
  void record(std::initializer_list<std::pair<std::string_view, std::string>> kv) {
    bool first = true;
    for (const auto& [k, v] : kv) {
      if (!first) os_ << (machine_ ? " " : "  ");
      os_ << k << (machine_ ? "=" : ": ") << v;
      first = false;
    }
    os_ << '\n';
  }
  void raw(std::string_view text) { os_ << text; }

 private:
  std::ostream& os_;
  bool machine_;
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok.substr(b), &used));
      if (tok.find_first_not_of(" \t", b + used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("'{}' is not a list of integers", s));
    }
  }
  return out;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<std::vector<int>> parse_partition(const std::string& s) {
  std::vector<std::vector<int>> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, '|');) out.push_back(parse_int_list(part));
  return out;
}

struct Globals {
  bool machine = false;
  std::uint64_t seed = 1;
  bool seed_given = false;
  int workers = 1;
  double tolerance = tol::kEndToEnd;
};

std::shared_ptr<const CodeSpace> load_code(const std::string& name) {
  return std::make_shared<const CodeSpace>(resolve_code(name));
}

// Image of a basis input under a permutation-like target.
std::optional<std::vector<int>> classical_action(const Matrix& target, const std::vector<int>& in) {
  Eigen::Index x = 0;
  for (int b : in) x = (x << 1) | b;
  Eigen::Index fx = 0;
  const double peak = target.col(x).cwiseAbs().maxCoeff(&fx);
  if (std::abs(peak - 1.0) > tol::kStructural) return std::nullopt;
  std::vector<int> out;
  for (std::size_t b = 0; b < in.size(); ++b) out.push_back(static_cast<int>((fx >> (in.size() - 1 - b)) & 1));
  return out;
}

}  // namespace

SchemeConfig parse_scheme_config(const std::string& text, const std::string& source) {
  SchemeConfig cfg;
  std::istringstream in(text);
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(source, number, "expected 'key: value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    try {
      if (key == "code") {
        cfg.code = value;
      } else if (key == "n_sent") {
        cfg.n_sent = std::stoi(value);
      } else if (key == "withheld") {
        cfg.withheld = parse_int_list(value);
        cfg.has_withheld = true;
      } else if (key == "p") {
        cfg.p = std::stoi(value);
      } else if (key == "m") {
        cfg.m = std::stoi(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "ancillas") {
        cfg.ancillas = std::stoi(value);
      } else {
        throw ParseError(source, number, fmt::format("unknown key '{}'", key));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(source, number, fmt::format("bad value '{}' for {}", value, key));
    }
  }
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum code and homomorphic-encryption lab", "qcl"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  std::optional<double> tol_flag;
  app.add_flag("--machine", g.machine, "key=value output");
  auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", tol_flag, "end-to-end tolerance (default from QCL_TOLERANCE or 1e-9)");

  std::string code_name = "five_qubit";
  int max_weight = 2;
  std::string gate_name;
  std::string product_file;
  std::string target_name;
  std::string library;
  std::string logical = "X";
  std::string region;
  std::string partition;
  std::string config_file;
  std::string input;
  std::string rows_spec;
  std::string withheld_spec;
  std::string x_bits;
  std::string y_bits;
  std::string family = "I,X";
  std::string bound_family = "all_boolean";
  int m = 2;
  int p = 1;
  int n = 4;
  double prob = 1.0;
  double epsilon = 0.0;
  double c_prime = 0.9;
  int p_min = 1;
  int p_max = 30;
  bool csv = false;
  bool withhold = false;
  bool exact_flag = false;
  std::uint64_t sample = 0;
  std::uint64_t max_pairs = 10'000'000;

  auto* codes = app.add_subcommand("codes", "code checks");
  codes->require_subcommand(1);
  auto* codes_list = codes->add_subcommand("list", "builtin codes");
  auto* codes_check = codes->add_subcommand("check", "Knill-Laflamme check up to a weight");
  auto* codes_distance = codes->add_subcommand("distance", "verified distance");
  auto* codes_classify = codes->add_subcommand("classify", "r-fold classification");
  auto* codes_additive = codes->add_subcommand("additive", "stabilizer-code test");
  for (auto* s : {codes_check, codes_distance, codes_classify, codes_additive}) {
    s->add_option("--code", code_name, "builtin name or code file")->required();
  }
  codes_check->add_option("--max-weight", max_weight, "largest error weight")->capture_default_str();

  auto* trans = app.add_subcommand("transversal", "transversal gates");
  trans->require_subcommand(1);
  auto* trans_verify = trans->add_subcommand("verify", "check a product operator against a logical target");
  auto* trans_search = trans->add_subcommand("search", "strongly transversal search over a gate library");
  for (auto* s : {trans_verify, trans_search}) {
    s->add_option("--code", code_name, "builtin name or code file")->required();
    s->add_option("--target", target_name, "logical target gate")->required();
  }
  auto* gate_opt = trans_verify->add_option("--gate", gate_name, "factor applied on every subsystem");
  trans_verify->add_option("--product", product_file, "product operator file")->excludes(gate_opt);
  trans_search->add_option("--library", library, "comma-separated gate names (default: all of the target's size)");

  auto* stab = app.add_subcommand("stab", "stabilizer tools");
  stab->require_subcommand(1);
  auto* stab_clean = stab->add_subcommand("clean", "clean a logical operator off a region");
  auto* stab_cleanable = stab->add_subcommand("cleanable", "is a region cleanable");
  auto* stab_level = stab->add_subcommand("level", "Clifford hierarchy level or transversal level bound");
  for (auto* s : {stab_clean, stab_cleanable}) {
    s->add_option("--code", code_name, "builtin name or code file")->required();
    s->add_option("--region", region, "comma-separated qubits")->required();
  }
  stab_clean->add_option("--logical", logical, "X, Z or a Pauli string")->capture_default_str();
  auto* level_code = stab_level->add_option("--code", code_name, "code for the transversal level bound");
  auto* level_gate = stab_level->add_option("--gate", gate_name, "gate name");
  stab_level->add_option("--partition", partition, "subsets like 0,1|2|3,4 (default singletons)")
      ->needs(level_code);

  auto* qhe = app.add_subcommand("qhe", "homomorphic encryption scheme");
  qhe->require_subcommand(1);
  auto* qhe_demo = qhe->add_subcommand("demo", "encrypt, evaluate, decrypt");
  auto* qhe_security = qhe->add_subcommand("security", "exact distance and Gram bound");
  auto* qhe_rank = qhe->add_subcommand("rank-experiment", "rank of the key-averaged state");
  auto* qhe_qrac = qhe->add_subcommand("qrac", "random access code harness");
  std::vector<CLI::Option*> code_opts;
  std::vector<CLI::Option*> m_opts;
  std::vector<CLI::Option*> p_opts;
  std::vector<CLI::Option*> withheld_opts;
  for (auto* s : {qhe_demo, qhe_security, qhe_qrac}) {
    code_opts.push_back(s->add_option("--code", code_name, "builtin name or code file"));
    m_opts.push_back(s->add_option("--m", m, "noise columns per array"));
    p_opts.push_back(s->add_option("--p", p, "input bits"));
    withheld_opts.push_back(s->add_option("--withheld", withheld_spec, "withheld subsystems"));
    s->add_option("--config", config_file, "scheme file");
  }
  auto* demo_gate = qhe_demo->add_option("--gate", gate_name, "gate applied transversally");
  qhe_demo->add_option("--product", product_file, "product operator file")->excludes(demo_gate);
  qhe_demo->add_option("--target", target_name, "logical target of --product");
  qhe_demo->add_option("--input", input, "plaintext bits (default all zero)");
  qhe_demo->add_option("--rows", rows_spec, "rows the gate acts on (default 0..r-1)");
  qhe_security->add_option("--x", x_bits, "first plaintext (default all zero)");
  qhe_security->add_option("--y", y_bits, "second plaintext (default all one)");
  qhe_security->add_flag("--exact", exact_flag, "require the dense computation");
  qhe_security->add_option("--sample", sample, "key pairs to sample beyond the budget");
  qhe_security->add_option("--max-pairs", max_pairs, "key-pair enumeration budget")->capture_default_str();
  qhe_rank->add_option("--n", n, "sent subsystems")->capture_default_str();
  qhe_rank->add_option("--p", p, "input bits")->capture_default_str();
  qhe_rank->add_option("--m", m, "noise columns per array")->capture_default_str();
  qhe_rank->add_flag("--withhold", withhold, "withhold one subsystem of an (n+1)-qubit GHZ code");
  qhe_qrac->add_option("--family", family, "comma-separated gate names")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "QRAC and communication bounds");
  bounds->require_subcommand(1);
  auto* b_nayak = bounds->add_subcommand("nayak", "n (1 - H(p))");
  auto* b_qfhe = bounds->add_subcommand("qfhe", "2^n (1 - H(eps))");
  auto* b_cross = bounds->add_subcommand("crossing", "scheme size against log |F_p|");
  b_nayak->add_option("--n", n, "encoded bits")->required();
  b_nayak->add_option("--p", prob, "success probability")->required();
  b_qfhe->add_option("--n", n, "input bits")->required();
  b_qfhe->add_option("--epsilon", epsilon, "security parameter")->required();
  b_cross->add_option("--n", n, "sent subsystems")->capture_default_str();
  b_cross->add_option("--c-prime", c_prime, "m = ceil(2^{c' p})")->capture_default_str();
  b_cross->add_option("--family", bound_family, "all_boolean, clifford or affine")->capture_default_str();
  b_cross->add_option("--p-min", p_min)->capture_default_str();
  b_cross->add_option("--p-max", p_max)->capture_default_str();
  b_cross->add_flag("--csv", csv, "print the sweep as CSV");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Reporter rep(out, g.machine);
  g.seed_given = seed_opt->count() > 0;
  try {
    if (tol_flag) {
      g.tolerance = *tol_flag;
    } else if (const char* env = std::getenv("QCL_TOLERANCE")) {
      try {
        g.tolerance = std::stod(env);
      } catch (const std::exception&) {
        throw UsageError(fmt::format("QCL_TOLERANCE='{}' is not a number", env));
      }
    }
    if (!(g.tolerance > 0.0)) throw UsageError("tolerance must be positive");

    // ---- codes
    if (codes_list->parsed()) {
      for (const auto& name : builtin_code_names()) {
        const CodeSpace c = builtin_code(name);
        rep.record({{"code", name},
                    {"n", std::to_string(c.n_physical())},
                    {"d", c.declared_distance() ? std::to_string(*c.declared_distance()) : "?"},
                    {"stabilizer", yes(c.stabilizer().has_value())}});
      }
      return kOk;
    }
    if (codes_check->parsed()) {
      const auto code = load_code(code_name);
      const KlReport r = kl_check(*code, max_weight);
      rep.record({{"code", code->name()},
                  {"max_weight", std::to_string(max_weight)},
                  {"checked", std::to_string(r.checked)},
                  {"violations", std::to_string(r.violation_count)},
                  {"passed", yes(r.passed())}});
      for (const auto& l : r.lambdas) {
        rep.record({{"error", l.error.str()}, {"lambda", fmt::format("{}{:+.12g}i", num(l.lambda.real()), l.lambda.imag())}});
      }
      for (const auto& v : r.violations) {
        rep.record({{"violation", v.error.str()},
                    {"diagonal", yes(v.diagonal)},
                    {"off_diagonal", yes(v.off_diagonal)},
                    {"diag_gap", num(std::abs(v.diag_gap))},
                    {"off_value", num(std::abs(v.off_value))}});
      }
      return r.passed() ? kOk : kFailed;
    }
    if (codes_distance->parsed()) {
      const auto code = load_code(code_name);
      const int kl = kl_distance(*code);
      std::optional<int> st;
      if (code->stabilizer()) st = code_distance(*code->stabilizer());
      bool ok = !st || *st == kl;
      if (code->declared_distance()) ok = ok && *code->declared_distance() == kl;
      rep.record({{"code", code->name()},
                  {"kl_distance", std::to_string(kl)},
                  {"stabilizer_distance", st ? std::to_string(*st) : "n/a"},
                  {"declared", code->declared_distance() ? std::to_string(*code->declared_distance()) : "n/a"},
                  {"agree", yes(ok)}});
      return ok ? kOk : kFailed;
    }
    if (codes_classify->parsed()) {
      const auto code = load_code(code_name);
      const Classification c = classify(*code);
      rep.record({{"code", code->name()},
                  {"class", to_string(c.kind)},
                  {"r", std::to_string(c.r)},
                  {"distance", std::to_string(c.distance)}});
      for (const auto& s : c.subcodes) {
        rep.record({{"subcode", join(s.qubits)}, {"distance_one", yes(s.distance_one())}});
      }
      return kOk;
    }
    if (codes_additive->parsed()) {
      const auto code = load_code(code_name);
      rep.record({{"code", code->name()}, {"additive", yes(is_additive(*code))}});
      return kOk;
    }

    // ---- transversal
    if (trans_verify->parsed()) {
      const auto code = load_code(code_name);
      const Matrix target = gates::named(target_name);
      std::optional<ProductOperator> op;
      if (!product_file.empty()) {
        op.emplace(parse_product_operator(code, read_text_file(product_file), product_file));
      } else if (!gate_name.empty()) {
        op.emplace(ProductOperator::uniform(code, gates::named(gate_name)));
      } else {
        throw UsageError("give --gate or --product");
      }
      if (op->num_blocks() != qubits_for_dim(target.rows())) {
        throw UsageError(fmt::format("operator acts on {} blocks but {} is a {}-qubit gate", op->num_blocks(),
                                     target_name, qubits_for_dim(target.rows())));
      }
      const TransversalReport r = verify_transversal(*op, target);
      const bool logical = r.max_deviation <= g.tolerance;
      rep.record({{"code", code->name()},
                  {"target", target_name},
                  {"blocks", std::to_string(op->num_blocks())},
                  {"probe_seed", fmt::format("{:#x}", kProbeSeed)}});
      rep.record({{"logical", yes(logical)},
                  {"strongly_transversal", yes(r.strongly_transversal)},
                  {"theta", num(logical ? r.theta : 0.0)},
                  {"max_deviation", fmt::format("{:.3e}", r.max_deviation)}});
      if (!logical && op->num_blocks() == 1) {
        const auto l = identify_logical_pauli(*op);
        rep.record({{"implements", l ? std::string(1, *l) : "none"}});
      }
      return logical ? kOk : kFailed;
    }
    if (trans_search->parsed()) {
      const auto code = load_code(code_name);
      const Matrix target = gates::named(target_name);
      std::vector<std::string> names = library.empty() ? gates::names() : split_names(library);
      std::vector<NamedUnitary> lib;
      for (const auto& nm : names) {
        Matrix u = gates::named(nm);
        if (u.rows() == target.rows()) lib.push_back({nm, std::move(u)});
      }
      const int r = qubits_for_dim(target.rows());
      check_state_cap(r * code->n_physical());
      const auto hits = strongly_transversal_search(code, target, lib, g.workers);
      rep.record({{"code", code->name()},
                  {"target", target_name},
                  {"candidates", std::to_string(lib.size())},
                  {"hits", std::to_string(hits.size())}});
      for (const auto& h : hits) rep.record({{"hit", h.name}, {"theta", num(h.report.theta)}});
      return kOk;
    }

    // ---- stab
    if (stab_clean->parsed() || stab_cleanable->parsed()) {
      const auto code = load_code(code_name);
      if (!code->stabilizer()) throw UsageError(fmt::format("{} is not a stabilizer code", code->name()));
      const auto& s = *code->stabilizer();
      const std::vector<int> reg = parse_int_list(region);
      if (stab_cleanable->parsed()) {
        const bool ok = is_cleanable(s, reg);
        rep.record({{"code", code->name()}, {"region", join(reg)}, {"cleanable", yes(ok)}});
        return ok ? kOk : kFailed;
      }
      PauliString lp;
      if (logical == "X" || logical == "x") {
        lp = s.logical_x();
      } else if (logical == "Z" || logical == "z") {
        lp = s.logical_z();
      } else {
        lp = PauliString::parse(logical);
      }
      try {
        const PauliString cleaned = clean_operator(s, lp, reg);
        rep.record({{"code", code->name()},
                    {"logical", lp.str()},
                    {"region", join(reg)},
                    {"cleaned", cleaned.str()},
                    {"weight", std::to_string(cleaned.weight())}});
        return kOk;
      } catch (const NotCleanable& e) {
        rep.record({{"code", code->name()}, {"logical", lp.str()}, {"region", join(reg)}, {"cleaned", "none"}});
        err << "qcl: " << e.what() << '\n';
        return kFailed;
      }
    }
    if (stab_level->parsed()) {
      if (level_code->count() == 0) {
        if (gate_name.empty()) throw UsageError("give --gate, --code, or both");
        const auto lv = clifford_level(DenseOperator(gates::named(gate_name)));
        rep.record({{"gate", gate_name}, {"level", lv ? std::to_string(*lv) : fmt::format(">{}", kMaxCliffordLevel)}});
        return kOk;
      }
      const auto code = load_code(code_name);
      if (!code->stabilizer()) throw UsageError(fmt::format("{} is not a stabilizer code", code->name()));
      std::vector<std::vector<int>> parts;
      if (partition.empty()) {
        for (int q = 0; q < code->n_physical(); ++q) parts.push_back({q});
      } else {
        parts = parse_partition(partition);
      }
      std::vector<DenseOperator> logicals;
      if (level_gate->count() > 0) {
        logicals.push_back(ProductOperator::uniform(code, gates::named(gate_name)).dense());
      }
      const auto r = transversal_level_bound(*code->stabilizer(), parts, logicals);
      rep.record({{"code", code->name()}, {"parts", std::to_string(parts.size())}, {"level_bound", std::to_string(r.bound)}});
      for (const auto& c : r.checks) {
        rep.record({{"logical", std::string(1, c.logical)},
                    {"cleaned", c.cleaned.str()},
                    {"preserves_codespace", yes(c.preserves_codespace)},
                    {"scalar", yes(c.is_scalar)},
                    {"level", c.level ? std::to_string(*c.level) : "none"}});
      }
      return r.all_passed() ? kOk : kFailed;
    }

    // ---- qhe
    if (qhe_demo->parsed() || qhe_security->parsed() || qhe_qrac->parsed()) {
      const CLI::App* sub = qhe_demo->parsed() ? qhe_demo : qhe_security->parsed() ? qhe_security : qhe_qrac;
      const std::size_t idx = sub == qhe_demo ? 0 : sub == qhe_security ? 1 : 2;
      SchemeConfig cfg;
      if (!config_file.empty()) cfg = parse_scheme_config(read_text_file(config_file), config_file);
      if (code_opts[idx]->count() || config_file.empty()) cfg.code = code_name;
      if (m_opts[idx]->count() || config_file.empty()) cfg.m = m;
      if (p_opts[idx]->count() || config_file.empty()) cfg.p = p;
      if (withheld_opts[idx]->count()) {
        cfg.withheld = parse_int_list(withheld_spec);
        cfg.has_withheld = true;
      }
      if (g.seed_given || config_file.empty()) cfg.seed = g.seed;
      const auto code = load_code(cfg.code);
      const QheParams params = QheParams::create(
          code, cfg.p, cfg.m, cfg.has_withheld ? std::optional(cfg.withheld) : std::nullopt, cfg.ancillas);
      if (cfg.n_sent >= 0 && cfg.n_sent != params.n()) {
        throw UsageError(fmt::format("n_sent = {} but the scheme sends {} subsystems", cfg.n_sent, params.n()));
      }
      rep.record({{"code", code->name()},
                  {"n", std::to_string(params.n())},
                  {"r", std::to_string(params.r())},
                  {"d", std::to_string(params.distance)},
                  {"withheld", join(params.withheld)},
                  {"p", std::to_string(params.p)},
                  {"m", std::to_string(params.m)},
                  {"seed", std::to_string(cfg.seed)}});

      if (sub == qhe_demo) {
        const std::vector<int> x = input.empty() ? std::vector<int>(params.p, 0) : parse_bits(input);
        const SecretKey key = keygen(params, cfg.seed);
        QheCiphertext ct = encrypt(params, key, x);
        rep.record({{"plaintext", format_bits(x)}});
        rep.record({{"key", join(key.s)},
                    {"rows", std::to_string(ct.rows)},
                    {"server_qubits", std::to_string(params.server_qubits())},
                    {"noise_qubits", std::to_string(ct.noise_qubits)},
                    {"client_qubits", std::to_string(ct.rows * params.r())},
                    {"ancillas", std::to_string(ct.ancillas.size())}});
        std::vector<int> expected = x;
        if (!gate_name.empty() || !product_file.empty()) {
          std::optional<ProductOperator> op;
          Matrix target;
          std::string label;
          if (!product_file.empty()) {
            if (target_name.empty()) throw UsageError("--product needs --target");
            op.emplace(parse_product_operator(code, read_text_file(product_file), product_file));
            target = gates::named(target_name);
            label = target_name;
          } else {
            target = gates::named(gate_name);
            op.emplace(ProductOperator::uniform(code, target));
            label = gate_name;
          }
          std::vector<int> rows;
          if (rows_spec.empty()) {
            for (int b = 0; b < op->num_blocks(); ++b) rows.push_back(b);
          } else {
            rows = parse_int_list(rows_spec);
          }
          if (static_cast<int>(rows.size()) != qubits_for_dim(target.rows())) {
            throw UsageError(fmt::format("{} acts on {} rows, {} given", label, qubits_for_dim(target.rows()), rows.size()));
          }
          for (int r : rows) {
            if (r < 0 || r >= params.p) throw UsageError(fmt::format("row {} out of range", r));
          }
          const TransversalReport tr = verify_transversal(*op, target);
          rep.record({{"gate", label}, {"rows", join(rows)}, {"transversal_logical", yes(tr.logical)}});
          if (!tr.logical) {
            err << "qcl: " << label << " is not a transversal logical gate of " << code->name() << '\n';
            return kFailed;
          }
          std::vector<int> sub_in;
          for (int r : rows) sub_in.push_back(x[r]);
          const auto act = classical_action(target, sub_in);
          if (!act) throw UsageError(fmt::format("{} does not map bitstrings to bitstrings", label));
          for (std::size_t b = 0; b < rows.size(); ++b) expected[rows[b]] = (*act)[b];
          ct = evaluate(params, ct, *op, rows);
        }
        const Decryption dec = decrypt(params, ct, key);
        const bool ok = dec.bits == expected && dec.probability >= 1.0 - g.tolerance;
        rep.record({{"decrypted", format_bits(dec.bits)},
                    {"expected", format_bits(expected)},
                    {"probability", num(dec.probability)},
                    {"correct", yes(ok)}});
        return ok ? kOk : kFailed;
      }

      if (sub == qhe_security) {
        const std::vector<int> x = x_bits.empty() ? std::vector<int>(params.p, 0) : parse_bits(x_bits);
        const std::vector<int> y = y_bits.empty() ? std::vector<int>(params.p, 1) : parse_bits(y_bits);
        SecurityBoundOptions opts;
        opts.max_pairs = max_pairs;
        if (sample > 0) opts.sample_pairs = sample;
        opts.seed = cfg.seed;
        opts.workers = g.workers;
        const SecurityBound b = security_bound(params, opts);
        const bool dense = params.server_qubits() <= kMaxExactServerQubits;
        if (exact_flag && !dense) {
          throw CapExceeded(fmt::format("m*n*p = {} exceeds the dense limit {}", params.server_qubits(),
                                        kMaxExactServerQubits));
        }
        bool ok = true;
        if (dense) {
          const ExactSecurity e = security_exact(params, x, y);
          ok = e.dist_to_uniform_x <= b.bound_1norm + g.tolerance && e.dist_to_uniform_y <= b.bound_1norm + g.tolerance;
          rep.record({{"x", format_bits(x)},
                      {"y", format_bits(y)},
                      {"exact_distance_x", num(e.dist_to_uniform_x)},
                      {"exact_distance_y", num(e.dist_to_uniform_y)},
                      {"exact_distance_xy", num(e.dist_between)}});
        }
        rep.record({{"bound", num(b.bound_1norm)},
                    {"worst_input", format_bits(b.x)},
                    {"second_moment", num(b.second_moment)},
                    {"aggregate_second_moment", num(b.aggregate_second_moment)}});
        rep.record({{"p_ell", join(b.p_ell)}});
        rep.record({{"p_ell_formula", join(b.p_ell_formula)}});
        rep.record({{"empirical_c", num(b.empirical_c)},
                    {"strict_mixing", yes(b.strict_mixing)},
                    {"pairs", std::to_string(b.pairs)},
                    {"sampled", yes(b.sampled)},
                    {"bound_holds", yes(ok)}});
        return ok ? kOk : kFailed;
      }

      // qrac
      std::vector<BooleanFamilyMember> fam;
      for (const auto& nm : split_names(family)) {
        const Matrix u = gates::named(nm);
        if (qubits_for_dim(u.rows()) != params.p) {
          throw UsageError(fmt::format("{} acts on {} qubits, p = {}", nm, qubits_for_dim(u.rows()), params.p));
        }
        fam.push_back({nm, ProductOperator::uniform(code, u), u});
      }
      const QracReport q = qrac_harness(params, fam, cfg.seed);
      bool ok = true;
      for (const auto& qq : q.queries) {
        ok = ok && qq.success >= 1.0 - g.tolerance;
        rep.record({{"function", qq.function},
                    {"x", format_bits(qq.x)},
                    {"expected", format_bits(qq.expected)},
                    {"success", num(qq.success)},
                    {"first_bit_success", num(qq.first_bit_success)}});
      }
      rep.record({{"queries", std::to_string(q.queries.size())},
                  {"communication_qubits", std::to_string(q.communication_qubits)},
                  {"all_succeed", yes(ok)}});
      return ok ? kOk : kFailed;
    }
    if (qhe_rank->parsed()) {
      auto code = std::make_shared<const CodeSpace>(ghz_code(withhold ? n + 1 : n));
      std::vector<int> wh;
      if (withhold) wh.push_back(n);
      const QheParams params = QheParams::variant(code, p, m, wh);
      const RankExperiment r = rank_experiment(params, std::vector<int>(p, 0));
      rep.record({{"code", code->name()},
                  {"n", std::to_string(params.n())},
                  {"p", std::to_string(p)},
                  {"m", std::to_string(m)},
                  {"withheld", yes(withhold)}});
      rep.record({{"rank", std::to_string(r.rank)},
                  {"dim", std::to_string(r.dim)},
                  {"fraction", num(r.fraction)},
                  {"rank_bound", num(r.rank_bound)},
                  {"fraction_bound", num(r.fraction_bound)},
                  {"distance_lower_bound", num(r.distance_lower_bound)},
                  {"exact_distance", num(r.exact_distance)}});
      const bool ok = withhold || (r.rank <= r.rank_bound && r.exact_distance >= r.distance_lower_bound - g.tolerance);
      return ok ? kOk : kFailed;
    }

    // ---- bounds
    if (b_nayak->parsed()) {
      const double v = nayak_lower_bound(n, prob);
      if (g.machine) {
        rep.record({{"n", std::to_string(n)}, {"p", num(prob)}, {"nayak_lower_bound", num(v)}});
      } else {
        out << num(v) << '\n';
      }
      return kOk;
    }
    if (b_qfhe->parsed()) {
      const long double v = qfhe_comm_bound(n, epsilon);
      if (g.machine) {
        rep.record({{"n", std::to_string(n)}, {"epsilon", num(epsilon)}, {"qfhe_comm_bound", num(v)}});
      } else {
        out << num(v) << '\n';
      }
      return kOk;
    }
    if (b_cross->parsed()) {
      const CrossingReport r = crossing_analysis(n, c_prime, bound_family, p_min, p_max);
      if (csv) {
        rep.raw(crossing_csv(r));
        return kOk;
      }
      rep.record({{"family", r.family},
                  {"n", std::to_string(n)},
                  {"c_prime", num(c_prime)},
                  {"p_range", fmt::format("{}..{}", p_min, p_max)},
                  {"crossover_p", r.crossover_p ? std::to_string(*r.crossover_p) : "none"},
                  {"verdict", to_string(r.verdict)}});
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "qcl: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "qcl: " << e.what() << '\n';
    return kUsage;
  } catch (const KeyMismatch& e) {
    err << "qcl: " << e.what() << '\n';
    return kFailed;
  } catch (const RecoveryError& e) {
    err << "qcl: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    err << "qcl: " << e.what() << '\n';
    return kUsage;
  }
  err << app.help();
  return kUsage;
}

}  // namespace qcl::cli
