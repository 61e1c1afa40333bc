#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qcl {

// n (1 - H(p))
double nayak_lower_bound(int n, double p);
// 2^n (1 - H(eps)) qubits
long double qfhe_comm_bound(int n_input_bits, double epsilon);

enum class Verdict { scheme_defeats_bound, bound_excludes_scheme, inconclusive };
const char* to_string(Verdict v);

struct CrossingPoint {
  int p = 0;
  long double m = 0;            // ceil(2^{c' p})
  long double scheme_size = 0;  // m n p
  long double required = 0;     // log2 |F_p|
  Verdict verdict = Verdict::inconclusive;
};

struct CrossingReport {
  std::string family;
  int n = 0;
  double c_prime = 0.0;
  std::vector<CrossingPoint> points;
  std::optional<int> crossover_p;  // first p after which required > scheme size throughout
  Verdict verdict = Verdict::inconclusive;
};

using LogFamilySize = std::function<long double(int p)>;

// Named families: all_boolean (2^p), clifford (2p^2 + 3p), affine (p).
LogFamilySize family_log_size(const std::string& name);
std::vector<std::string> family_names();

CrossingReport crossing_analysis(int n, double c_prime, const std::string& family, int p_min, int p_max);
CrossingReport crossing_analysis(int n, double c_prime, const std::string& family_name, const LogFamilySize& log_f,
                                 int p_min, int p_max);

// p,m,scheme_size,required,verdict
std::string crossing_csv(const CrossingReport& rep);

}  // namespace qcl
