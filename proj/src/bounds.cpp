#include "qcl/bounds.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "qcl/qla.hpp"

namespace qcl {

double nayak_lower_bound(int n, double p) {
  if (n < 1) throw std::domain_error("n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("success probability must lie in [0, 1]");
  return n * (1.0 - binary_entropy(p));
}

long double qfhe_comm_bound(int n_input_bits, double epsilon) {
  if (n_input_bits < 0) throw std::domain_error("input size must be nonnegative");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::domain_error("epsilon must lie in [0, 1]");
  return std::ldexp(1.0L, n_input_bits) * (1.0L - binary_entropy(epsilon));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::scheme_defeats_bound: return "scheme_defeats_bound";
    case Verdict::bound_excludes_scheme: return "bound_excludes_scheme";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LogFamilySize family_log_size(const std::string& name) {
  if (name == "all_boolean") return [](int p) { return std::ldexp(1.0L, p); };
  if (name == "clifford") return [](int p) { return 2.0L * p * p + 3.0L * p; };
  if (name == "affine") return [](int p) { return static_cast<long double>(p); };
  throw std::invalid_argument(fmt::format("unknown function family '{}'", name));
}

std::vector<std::string> family_names() { return {"all_boolean", "clifford", "affine"}; }

CrossingReport crossing_analysis(int n, double c_prime, const std::string& family, int p_min, int p_max) {
  return crossing_analysis(n, c_prime, family, family_log_size(family), p_min, p_max);
}

CrossingReport crossing_analysis(int n, double c_prime, const std::string& family_name, const LogFamilySize& log_f,
                                 int p_min, int p_max) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(c_prime > 0.0 && c_prime < 1.0)) throw std::invalid_argument("c' must lie in (0, 1)");
  if (p_min < 1 || p_max < p_min) throw std::invalid_argument("bad p range");
  if (p_max > 16000) throw std::invalid_argument("p range exceeds extended-precision range");
  CrossingReport rep;
  rep.family = family_name;
  rep.n = n;
  rep.c_prime = c_prime;
  for (int p = p_min; p <= p_max; ++p) {
    CrossingPoint pt;
    pt.p = p;
    pt.m = std::ceil(std::exp2(static_cast<long double>(c_prime) * p));
    pt.scheme_size = pt.m * n * p;
    pt.required = log_f(p);
    pt.verdict = pt.required > pt.scheme_size ? Verdict::bound_excludes_scheme : Verdict::scheme_defeats_bound;
    rep.points.push_back(pt);
  }
  // Smallest p from which every later point is excluded.
  for (auto it = rep.points.rbegin(); it != rep.points.rend(); ++it) {
    if (it->verdict != Verdict::bound_excludes_scheme) break;
    rep.crossover_p = it->p;
  }
  if (rep.crossover_p) {
    rep.verdict = Verdict::bound_excludes_scheme;
  } else {
    bool all_defeat = true;
    for (const auto& pt : rep.points) all_defeat = all_defeat && pt.verdict == Verdict::scheme_defeats_bound;
    rep.verdict = all_defeat ? Verdict::scheme_defeats_bound : Verdict::inconclusive;
  }
  return rep;
}

std::string crossing_csv(const CrossingReport& rep) {
  std::string out = "p,m,scheme_size,required,verdict\n";
  for (const auto& pt : rep.points) {
    out += fmt::format("{},{:.6g},{:.6g},{:.6g},{}\n", pt.p, pt.m, pt.scheme_size, pt.required,
                       to_string(pt.verdict));
  }
  return out;
}

}  // namespace qcl
