#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcl/qhe.hpp"

namespace qcl {

// Purity of the reduced code state on each subset of sent subsystems:
// table[bit][mask] for |bit_L>, mask bit j <-> sent[j].
struct PurityTable {
  int n = 0;
  std::vector<double> zero;
  std::vector<double> one;
  double get(int bit, std::uint64_t mask) const { return bit ? one[mask] : zero[mask]; }
};

PurityTable purity_table(const QheParams& params);

// K^{mn} Tr(gamma_s gamma_s2) through the reduced states on the subsystems
// where the keys agree.
double gram_overlap(const QheParams& params, const std::vector<int>& x, const SecretKey& s, const SecretKey& s2);
double gram_overlap(const PurityTable& table, const std::vector<int>& x, std::uint64_t agree_mask);

// Same quantity from dense server views.
double gram_overlap_dense(const QheParams& params, const std::vector<int>& x, const SecretKey& s,
                          const SecretKey& s2);

struct ExactSecurity {
  double dist_to_uniform_x = 0.0;
  double dist_to_uniform_y = 0.0;
  double dist_between = 0.0;
};

inline constexpr int kMaxExactServerQubits = 10;

// Dense mixture over all m^n keys; requires m*n*p <= 10.
ExactSecurity security_exact(const QheParams& params, const std::vector<int>& x, const std::vector<int>& y);
DenseOperator mixed_server_state(const QheParams& params, const std::vector<int>& x);

struct SecurityBoundOptions {
  std::uint64_t max_pairs = 10'000'000;
  // Beyond max_pairs, draw this many key pairs instead of failing.
  std::optional<std::uint64_t> sample_pairs;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct SecurityBound {
  std::vector<int> x;  // the input attaining the bound
  double bound_1norm = 0.0;
  double second_moment = 0.0;  // K^{mn} Tr(E[gamma]^2)
  double aggregate_second_moment = 0.0;  // same, from the closed-form Delta weights
  std::vector<double> p_ell;          // from the pair histogram
  std::vector<double> p_ell_formula;  // C(n,l)(m-1)^{n-l}/m^n
  double empirical_c = 0.0;           // min over intersecting pairs of l - log_K gram
  bool strict_mixing = true;          // gram < K^l (1 - 1e-9) for every intersecting pair
  std::uint64_t pairs = 0;
  bool sampled = false;
};

// Worst case over inputs (the Gram sum depends only on the input's weight).
SecurityBound security_bound(const QheParams& params, const SecurityBoundOptions& opts = {});
SecurityBound security_bound(const QheParams& params, const std::vector<int>& x,
                             const SecurityBoundOptions& opts = {});

// Sum over agreement sets Delta of m^n (m-1)^{n-|Delta|} / m^{2n} * gram(Delta).
double aggregate_second_moment(const PurityTable& table, const std::vector<int>& x, int m);

double p_ell_formula(int n, int m, int ell);

struct Epsilon {
  double value = 0.0;
  double radicand = 0.0;
  bool indeterminate = false;  // radicand negative, value reported as 0
};

// (((m-1)/m)^n - 1 + K^{-c} (2K/m)^n)^{1/2}
Epsilon epsilon_formula(double K, double m, int n, double c);

struct RankExperiment {
  int rank = 0;
  long long dim = 0;
  double fraction = 0.0;          // rank / dim
  double rank_bound = 0.0;        // m^n 2^{np(m-1)}
  double fraction_bound = 0.0;    // (2^n)^{log2 m - p}
  double distance_lower_bound = 0.0;  // 2 (dim - rank) / dim
  double exact_distance = 0.0;        // || E[gamma] - I/dim ||_1
};

// Rank of the key-averaged server state for input x; dense cap m*n*p <= 10.
RankExperiment rank_experiment(const QheParams& params, const std::vector<int>& x);

}  // namespace qcl
