#include <doctest.h>

#include <cmath>
#include <optional>
#include <sstream>

#include "oracles.hpp"
#include "qcl/bounds.hpp"

using namespace qcl;

namespace {

// First p after which 2^p stays above ceil(2^{c p}) n p up to p_max.
std::optional<int> oracle_crossover(int n, long double c, int p_min, int p_max) {
  std::optional<int> first;
  for (int p = p_min; p <= p_max; ++p) {
    const long double m = std::ceil(std::pow(2.0L, c * p));
    const bool excluded = std::pow(2.0L, static_cast<long double>(p)) > m * n * p;
    if (excluded && !first) first = p;
    if (!excluded) first.reset();
  }
  return first;
}

}  // namespace

TEST_CASE("nayak bound: values and monotonicity") {
  CHECK(nayak_lower_bound(4, 0.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(nayak_lower_bound(10, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(nayak_lower_bound(7, 0.11) - 7.0 * (1.0 - oracle::entropy(0.11))) < 1e-12);
  double prev = 1e9;
  for (double p = 0.0; p <= 0.5; p += 0.05) {
    const double v = nayak_lower_bound(16, p);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  CHECK(nayak_lower_bound(4, 0.7) == doctest::Approx(nayak_lower_bound(4, 0.3)));
  CHECK_THROWS(nayak_lower_bound(4, 1.2));
  CHECK_THROWS(nayak_lower_bound(-1, 0.1));
}

TEST_CASE("qfhe bound: value and limit") {
  const long double v = qfhe_comm_bound(20, 0.01);
  CHECK(std::abs(static_cast<double>(v) - 1048576.0 * (1.0 - oracle::entropy(0.01))) < 1e-6);
  CHECK(std::abs(static_cast<double>(v) - 963858.256735) < 1e-5);
  double prev_ratio = 0.0;
  for (double eps : {0.1, 0.01, 1e-3, 1e-5, 1e-8}) {
    const double ratio = static_cast<double>(qfhe_comm_bound(12, eps) / std::pow(2.0L, 12));
    CHECK(ratio >= prev_ratio);
    prev_ratio = ratio;
  }
  CHECK(std::abs(prev_ratio - 1.0) < 1e-5);
  CHECK_THROWS(qfhe_comm_bound(4, 1.5));
}

TEST_CASE("crossing analysis: all Boolean functions eventually exclude the scheme") {
  const CrossingReport rep = crossing_analysis(4, 0.9, "all_boolean", 1, 120);
  REQUIRE(rep.points.size() == 120);
  // The API takes c' as a double.
  const long double c = 0.9;
  const auto want = oracle_crossover(4, c, 1, 120);
  REQUIRE(want);
  REQUIRE(rep.crossover_p);
  CHECK(*rep.crossover_p == *want);
  CHECK(*rep.crossover_p == 84);
  CHECK(rep.verdict == Verdict::bound_excludes_scheme);
  for (const auto& pt : rep.points) {
    CHECK(pt.m == std::ceil(std::pow(2.0L, c * pt.p)));
    CHECK(pt.scheme_size == pt.m * 4 * pt.p);
    CHECK(pt.required == std::pow(2.0L, static_cast<long double>(pt.p)));
  }
  // Extending the range does not move the crossover.
  const CrossingReport longer = crossing_analysis(4, 0.9, "all_boolean", 1, 125);
  CHECK(longer.crossover_p == rep.crossover_p);
  // Within 30 there is none.
  CHECK_FALSE(crossing_analysis(4, 0.9, "all_boolean", 1, 30).crossover_p.has_value());
}

TEST_CASE("crossing analysis: polynomial families never catch up") {
  for (const std::string fam : {"clifford", "affine"}) {
    const CrossingReport rep = crossing_analysis(4, 0.9, fam, 1, 60);
    CHECK_FALSE(rep.crossover_p.has_value());
    CHECK(rep.verdict == Verdict::scheme_defeats_bound);
    const CrossingReport longer = crossing_analysis(4, 0.9, fam, 1, 65);
    CHECK(longer.verdict == rep.verdict);
  }
  CHECK(family_log_size("clifford")(3) == 27.0L);
  CHECK(family_log_size("affine")(5) == 5.0L);
  CHECK_THROWS(family_log_size("nope"));
  CHECK(family_names().size() == 3);
  CHECK(std::string(to_string(Verdict::inconclusive)) == "inconclusive");
}

TEST_CASE("crossing analysis: custom family and range checks") {
  // Required beats the scheme at odd p only, so there is no stable crossover.
  const LogFamilySize f = [](int p) -> long double {
    const long double m = std::ceil(std::pow(2.0L, 0.5L * p));
    return p % 2 ? m * 2 * p + 1 : 1.0L;
  };
  const CrossingReport rep = crossing_analysis(2, 0.5, "alternating", f, 1, 20);
  CHECK_FALSE(rep.crossover_p.has_value());
  CHECK(rep.verdict == Verdict::inconclusive);
  CHECK_THROWS(crossing_analysis(4, 0.9, "all_boolean", 5, 2));
  CHECK_THROWS(crossing_analysis(4, 0.9, "all_boolean", 1, 20000));
}

TEST_CASE("crossing csv: header and one row per point") {
  const CrossingReport rep = crossing_analysis(4, 0.9, "clifford", 1, 5);
  const std::string csv = crossing_csv(rep);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "p,m,scheme_size,required,verdict");
  int rows = 0;
  while (std::getline(in, line)) rows += !line.empty();
  CHECK(rows == 5);
  CHECK(csv.find("1,2,8,5,scheme_defeats_bound") != std::string::npos);
}
