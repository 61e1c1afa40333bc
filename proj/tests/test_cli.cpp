#include <doctest.h>

#include <sstream>

#include "qcl/cli.hpp"
#include "qcl/errors.hpp"

using namespace qcl;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& f) { return std::string(QCL_DATA_DIR) + "/" + f; }

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run_cli({"codes", "frobnicate"}).code == cli::kUsage);
  CHECK(run_cli({"codes", "check"}).code == cli::kUsage);
  CHECK(run_cli({"bounds", "crossing", "--family", "nope"}).code == cli::kUsage);
  const Result bad = run_cli({"codes", "check", "--code", data("bad_anticommuting.code")});
  CHECK(bad.code == cli::kUsage);
  CHECK(has(bad.err, "bad_anticommuting.code:4"));
  CHECK(run_cli({"codes", "check", "--code", data("bad_norm.code")}).code == cli::kUsage);
  CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("cli: verification outcomes map to exit codes") {
  const Result ok = run_cli({"--machine", "transversal", "verify", "--code", "steane", "--gate", "H", "--target", "H"});
  CHECK(ok.code == cli::kOk);
  CHECK(has(ok.out, "logical=true"));
  const Result wrong = run_cli({"--machine", "transversal", "verify", "--code", "shor", "--gate", "X", "--target", "X"});
  CHECK(wrong.code == cli::kFailed);
  CHECK(has(wrong.out, "implements=Z"));
  const Result nc = run_cli({"stab", "clean", "--code", "bitflip3", "--region", "0", "--logical", "Z"});
  CHECK(nc.code == cli::kFailed);
}

TEST_CASE("cli: command outputs") {
  CHECK(has(run_cli({"--machine", "bounds", "nayak", "--n", "4", "--p", "1"}).out, "nayak_lower_bound=4"));
  CHECK(has(run_cli({"--machine", "bounds", "qfhe", "--n", "20", "--epsilon", "0.01"}).out, "963858.256735"));
  CHECK(has(run_cli({"--machine", "stab", "level", "--gate", "Toffoli"}).out, "level=3"));
  CHECK(has(run_cli({"--machine", "stab", "level", "--code", "steane"}).out, "level_bound=6"));
  CHECK(has(run_cli({"--machine", "codes", "classify", "--code", "shor"}).out, "class=maximally_redundant"));
  const Result qrac = run_cli({"--machine", "qhe", "qrac", "--code", "five_qubit", "--m", "2", "--p", "1", "--family", "I,X"});
  CHECK(qrac.code == cli::kOk);
  CHECK(has(qrac.out, "communication_qubits=8 all_succeed=true"));
  const Result rank = run_cli({"--machine", "qhe", "rank-experiment", "--n", "2", "--p", "1", "--m", "2"});
  CHECK(has(rank.out, "rank=11 dim=16"));
  const Result csv = run_cli({"bounds", "crossing", "--family", "clifford", "--p-max", "3", "--csv"});
  CHECK(csv.out.rfind("p,m,scheme_size,required,verdict", 0) == 0);
}

TEST_CASE("cli: human and machine formats carry the same fields") {
  const Result human = run_cli({"codes", "check", "--code", "five_qubit"});
  const Result machine = run_cli({"--machine", "codes", "check", "--code", "five_qubit"});
  CHECK(has(human.out, "checked: 106  violations: 0  passed: true"));
  CHECK(has(machine.out, "checked=106 violations=0 passed=true"));
}

TEST_CASE("cli: seeded commands are byte-identical across runs") {
  const std::vector<std::vector<std::string>> cmds{
      {"--machine", "--seed", "9", "qhe", "demo", "--code", "five_qubit", "--m", "3", "--p", "1"},
      {"--machine", "--seed", "2", "--workers", "3", "qhe", "security", "--code", "five_qubit", "--m", "2", "--p", "1"},
      {"--machine", "--workers", "2", "transversal", "search", "--code", "steane", "--target", "H"},
  };
  for (const auto& c : cmds) {
    const Result a = run_cli(c);
    const Result b = run_cli(c);
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("cli: scheme config files") {
  const Result r = run_cli({"--machine", "qhe", "demo", "--config", data("five_qubit.scheme")});
  CHECK(r.code == cli::kOk);
  CHECK(has(r.out, "seed=7"));
  CHECK(has(r.out, "correct=true"));

  const cli::SchemeConfig c = cli::parse_scheme_config("code: steane\nwithheld: 0\np: 2 # two bits\nm: 3\n");
  CHECK(c.code == "steane");
  CHECK(c.has_withheld);
  CHECK(c.withheld == std::vector<int>{0});
  CHECK(c.p == 2);
  CHECK(c.m == 3);
  try {
    cli::parse_scheme_config("code: steane\n\nbogus: 1\n", "cfg");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(cli::parse_scheme_config("p: two\n"), ParseError);
}
