#include "qcl/security.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qcl/errors.hpp"
#include "qcl/parallel.hpp"
#include "qcl/tolerance.hpp"

namespace qcl {

namespace {

double pure_reduced_purity(const Vector& psi, int len, const std::vector<int>& keep) {
  if (keep.empty() || static_cast<int>(keep.size()) == len) return 1.0;
  // Purity is shared with the complement; trace out the larger side.
  std::vector<int> small = keep;
  if (2 * static_cast<int>(keep.size()) > len) {
    small.clear();
    for (int q = 0; q < len; ++q) {
      if (std::find(keep.begin(), keep.end(), q) == keep.end()) small.push_back(q);
    }
  }
  return purity(reduced_density(DenseState(len, psi), small));
}

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t limit) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > limit / base) return limit + 1;
    out *= base;
  }
  return out;
}

void check_exact_cap(const QheParams& params) {
  if (params.server_qubits() > kMaxExactServerQubits) {
    throw CapExceeded(fmt::format("m*n*p = {} exceeds the dense limit {}; use the Gram bound",
                                  params.server_qubits(), kMaxExactServerQubits));
  }
}

struct PairHistogram {
  std::vector<std::uint64_t> counts;  // by agreement mask
  std::uint64_t pairs = 0;
  bool sampled = false;
};

PairHistogram pair_histogram(const QheParams& params, const SecurityBoundOptions& opts) {
  const int n = params.n();
  const auto m = static_cast<std::uint64_t>(params.m);
  PairHistogram h;
  h.counts.assign(std::size_t{1} << n, 0);
  const std::uint64_t total = checked_pow(m, 2 * n, opts.max_pairs);
  if (total <= opts.max_pairs) {
    constexpr std::uint64_t kChunk = 1 << 16;
    const std::uint64_t keys = checked_pow(m, n, total);
    const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<std::vector<std::uint64_t>> partial(chunks);
    parallel_for(chunks, opts.workers, [&](std::size_t c) {
      auto& local = partial[c];
      local.assign(h.counts.size(), 0);
      const std::uint64_t end = std::min(total, (c + 1) * kChunk);
      for (std::uint64_t t = c * kChunk; t < end; ++t) {
        std::uint64_t a = t % keys;
        std::uint64_t b = t / keys;
        std::uint64_t mask = 0;
        for (int j = 0; j < n; ++j) {
          if (a % m == b % m) mask |= std::uint64_t{1} << j;
          a /= m;
          b /= m;
        }
        ++local[mask];
      }
    });
    for (const auto& local : partial) {
      for (std::size_t k = 0; k < local.size(); ++k) h.counts[k] += local[k];
    }
    h.pairs = total;
    return h;
  }
  if (!opts.sample_pairs) {
    throw CapExceeded(fmt::format("m^(2n) key pairs exceed the budget of {}; enable sampling", opts.max_pairs));
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> pick(1, params.m);
  for (std::uint64_t t = 0; t < *opts.sample_pairs; ++t) {
    std::uint64_t mask = 0;
    for (int j = 0; j < n; ++j) {
      const int a = pick(rng);
      const int b = pick(rng);
      if (a == b) mask |= std::uint64_t{1} << j;
    }
    ++h.counts[mask];
  }
  h.pairs = *opts.sample_pairs;
  h.sampled = true;
  return h;
}

SecurityBound bound_from_histogram(const QheParams& params, const PurityTable& table, const PairHistogram& h,
                                   const std::vector<int>& x) {
  const int n = params.n();
  SecurityBound out;
  out.x = x;
  out.pairs = h.pairs;
  out.sampled = h.sampled;
  out.p_ell.assign(n + 1, 0.0);
  out.p_ell_formula.resize(n + 1);
  for (int l = 0; l <= n; ++l) out.p_ell_formula[l] = p_ell_formula(n, params.m, l);
  out.empirical_c = std::numeric_limits<double>::infinity();
  const double pairs = static_cast<double>(h.pairs);
  for (std::size_t mask = 0; mask < h.counts.size(); ++mask) {
    if (h.counts[mask] == 0) continue;
    const double w = static_cast<double>(h.counts[mask]) / pairs;
    const int l = std::popcount(mask);
    const double g = gram_overlap(table, x, mask);
    out.second_moment += w * g;
    out.p_ell[l] += w;
    if (l > 0) {
      out.empirical_c = std::min(out.empirical_c, l - std::log2(g) / params.p);
      if (g >= std::ldexp(1.0, l * params.p) * (1.0 - 1e-9)) out.strict_mixing = false;
    }
  }
  out.aggregate_second_moment = aggregate_second_moment(table, x, params.m);
  out.bound_1norm = std::sqrt(std::max(0.0, out.second_moment - 1.0));
  return out;
}

}  // namespace

PurityTable purity_table(const QheParams& params) {
  const int n = params.n();
  const int len = params.code_length();
  if (n > 20) throw CapExceeded("too many sent subsystems for a purity table");
  PurityTable t;
  t.n = n;
  t.zero.resize(std::size_t{1} << n);
  t.one.resize(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> keep;
    for (int j = 0; j < n; ++j) {
      if ((mask >> j) & 1U) keep.push_back(params.sent[j]);
    }
    t.zero[mask] = pure_reduced_purity(params.code->logical_zero(), len, keep);
    t.one[mask] = pure_reduced_purity(params.code->logical_one(), len, keep);
  }
  return t;
}

double gram_overlap(const PurityTable& table, const std::vector<int>& x, std::uint64_t agree_mask) {
  const int ell = std::popcount(agree_mask);
  double g = std::ldexp(1.0, ell * static_cast<int>(x.size()));
  for (int b : x) g *= table.get(b, agree_mask);
  return g;
}

double gram_overlap(const QheParams& params, const std::vector<int>& x, const SecretKey& s, const SecretKey& s2) {
  if (static_cast<int>(s.s.size()) != params.n() || s2.s.size() != s.s.size()) {
    throw std::invalid_argument("keys have the wrong length");
  }
  std::uint64_t mask = 0;
  for (int j = 0; j < params.n(); ++j) {
    if (s.s[j] == s2.s[j]) mask |= std::uint64_t{1} << j;
  }
  return gram_overlap(purity_table(params), x, mask);
}

double gram_overlap_dense(const QheParams& params, const std::vector<int>& x, const SecretKey& s,
                          const SecretKey& s2) {
  check_exact_cap(params);
  const auto ct = encrypt(params, s, x);
  const DenseOperator sent = sent_state(params, ct);
  const int n = params.n();
  const Matrix a = embed_server_view(sent, n, params.m, params.p, s.s).matrix();
  const Matrix b = embed_server_view(sent, n, params.m, params.p, s2.s).matrix();
  const double tr = a.cwiseProduct(b.transpose()).sum().real();
  return std::ldexp(tr, static_cast<int>(params.server_qubits()));
}

DenseOperator mixed_server_state(const QheParams& params, const std::vector<int>& x) {
  check_exact_cap(params);
  const int n = params.n();
  SecretKey key{std::vector<int>(n, 1)};
  const DenseOperator sent = sent_state(params, encrypt(params, key, x));
  const std::uint64_t keys = checked_pow(static_cast<std::uint64_t>(params.m), n, 1U << 20);
  const int q = static_cast<int>(params.server_qubits());
  Matrix acc = Matrix::Zero(Eigen::Index{1} << q, Eigen::Index{1} << q);
  for (std::uint64_t t = 0; t < keys; ++t) {
    std::uint64_t v = t;
    for (int j = n - 1; j >= 0; --j) {
      key.s[j] = static_cast<int>(v % params.m) + 1;
      v /= params.m;
    }
    acc += embed_server_view(sent, n, params.m, params.p, key.s).matrix();
  }
  acc /= static_cast<double>(keys);
  return {q, std::move(acc)};
}

ExactSecurity security_exact(const QheParams& params, const std::vector<int>& x, const std::vector<int>& y) {
  check_exact_cap(params);
  const DenseOperator rx = mixed_server_state(params, x);
  const DenseOperator ry = mixed_server_state(params, y);
  const DenseOperator u = DenseOperator::maximally_mixed(rx.num_qubits());
  ExactSecurity out;
  out.dist_to_uniform_x = trace_distance(rx, u);
  out.dist_to_uniform_y = trace_distance(ry, u);
  out.dist_between = trace_distance(rx, ry);
  return out;
}

double p_ell_formula(int n, int m, int ell) {
  if (ell < 0 || ell > n) return 0.0;
  double c = 1.0;
  for (int i = 0; i < ell; ++i) c = c * (n - i) / (i + 1);
  return c * std::pow(static_cast<double>(m - 1), n - ell) / std::pow(static_cast<double>(m), n);
}

double aggregate_second_moment(const PurityTable& table, const std::vector<int>& x, int m) {
  const int n = table.n;
  double sum = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const int l = std::popcount(mask);
    // m^n (m-1)^{n-l} / m^{2n}
    const double w = std::pow(static_cast<double>(m - 1), n - l) / std::pow(static_cast<double>(m), n);
    if (w == 0.0) continue;
    sum += w * gram_overlap(table, x, mask);
  }
  return sum;
}

SecurityBound security_bound(const QheParams& params, const std::vector<int>& x, const SecurityBoundOptions& opts) {
  if (static_cast<int>(x.size()) != params.p) throw std::invalid_argument("input length differs from p");
  return bound_from_histogram(params, purity_table(params), pair_histogram(params, opts), x);
}

SecurityBound security_bound(const QheParams& params, const SecurityBoundOptions& opts) {
  const PurityTable table = purity_table(params);
  const PairHistogram h = pair_histogram(params, opts);
  std::optional<SecurityBound> best;
  for (int w = 0; w <= params.p; ++w) {
    std::vector<int> x(params.p, 0);
    for (int b = 0; b < w; ++b) x[b] = 1;
    SecurityBound cur = bound_from_histogram(params, table, h, x);
    if (!best || cur.second_moment > best->second_moment) best = std::move(cur);
  }
  return *best;
}

Epsilon epsilon_formula(double K, double m, int n, double c) {
  if (!(K >= 2.0)) throw std::domain_error("K must be at least 2");
  if (!(m >= 1.0)) throw std::domain_error("m must be at least 1");
  if (n < 1) throw std::domain_error("n must be at least 1");
  if (!(c > 0.0 && c < 1.0)) throw std::domain_error("c must lie in (0, 1)");
  const long double kk = K;
  const long double mm = m;
  const long double rad =
      std::pow((mm - 1) / mm, n) - 1.0L + std::pow(kk, -static_cast<long double>(c)) * std::pow(2 * kk / mm, n);
  Epsilon e;
  e.radicand = static_cast<double>(rad);
  if (rad < 0) {
    e.indeterminate = true;
    e.value = 0.0;
  } else {
    e.value = static_cast<double>(std::sqrt(rad));
  }
  return e;
}

RankExperiment rank_experiment(const QheParams& params, const std::vector<int>& x) {
  const DenseOperator avg = mixed_server_state(params, x);
  RankExperiment out;
  out.dim = avg.dim();
  out.rank = numerical_rank(avg, tol::kRank);
  out.fraction = static_cast<double>(out.rank) / static_cast<double>(out.dim);
  const int n = params.n();
  out.rank_bound = std::pow(static_cast<double>(params.m), n) * std::ldexp(1.0, n * params.p * (params.m - 1));
  out.fraction_bound = std::exp2(n * (std::log2(static_cast<double>(params.m)) - params.p));
  out.distance_lower_bound = 2.0 * static_cast<double>(out.dim - out.rank) / static_cast<double>(out.dim);
  out.exact_distance = trace_distance(avg, DenseOperator::maximally_mixed(avg.num_qubits()));
  return out;
}

}  // namespace qcl
