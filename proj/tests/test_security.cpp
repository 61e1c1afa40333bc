#include <doctest.h>

#include "oracles.hpp"
#include "qcl/codes.hpp"
#include "qcl/qhe.hpp"
#include "qcl/security.hpp"

using namespace qcl;

namespace {

std::shared_ptr<const CodeSpace> shared(const std::string& name) {
  return std::make_shared<const CodeSpace>(builtin_code(name));
}

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

}  // namespace

TEST_CASE("gram: factorized form equals the dense trace on every key pair") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const auto keys = all_keys(4, 2);
  REQUIRE(keys.size() == 16);
  int pairs = 0;
  for (int bit = 0; bit < 2; ++bit) {
    for (const auto& a : keys) {
      for (const auto& b : keys) {
        const double f = gram_overlap(p, {bit}, a, b);
        const double d = gram_overlap_dense(p, {bit}, a, b);
        CHECK(std::abs(f - d) < 1e-9);
        ++pairs;
      }
    }
  }
  CHECK(pairs == 512);
}

TEST_CASE("gram: disjoint keys give 1; equal keys give K^n times purity") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const PurityTable t = purity_table(p);
  CHECK(std::abs(gram_overlap(t, {0}, 0) - 1.0) < 1e-12);
  CHECK(std::abs(gram_overlap(t, {1}, 0) - 1.0) < 1e-12);
  // Empty subset has purity 1.
  CHECK(std::abs(t.get(0, 0) - 1.0) < 1e-12);
  // Complement of one maximally mixed qubit.
  CHECK(std::abs(t.get(0, 0xF) - 0.5) < 1e-10);
  // Any two qubits of the five-qubit code are maximally mixed.
  CHECK(std::abs(t.get(0, 0x3) - 0.25) < 1e-10);
  CHECK(std::abs(gram_overlap(t, {0}, 0x3) - 4.0 * 0.25) < 1e-10);
}

TEST_CASE("security: exact distance never exceeds the bound") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const ExactSecurity ex = security_exact(p, {0}, {1});
  const SecurityBound b = security_bound(p);
  CHECK(std::abs(ex.dist_to_uniform_x - 0.515625) < 1e-9);
  CHECK(std::abs(ex.dist_to_uniform_y - 0.515625) < 1e-9);
  CHECK(ex.dist_to_uniform_x <= b.bound_1norm + 1e-12);
  CHECK(ex.dist_between <= ex.dist_to_uniform_x + ex.dist_to_uniform_y + 1e-12);
  CHECK(std::abs(b.second_moment - b.aggregate_second_moment) < 1e-9);
  CHECK(std::abs(b.bound_1norm - std::sqrt(b.second_moment - 1.0)) < 1e-12);
  CHECK(b.pairs == 256);
  CHECK_FALSE(b.sampled);
  CHECK(b.strict_mixing);
}

TEST_CASE("security: the mixed server state is a density") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const DenseOperator rho = mixed_server_state(p, {1});
  CHECK(rho.is_density(1e-10));
  // K^{mn} Tr(rho^2) equals the second moment.
  CHECK(std::abs(256.0 * purity(rho) - security_bound(p, std::vector<int>{1}).second_moment) < 1e-9);
}

TEST_CASE("security: pair histogram matches the binomial formula") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 3);
  const SecurityBound b = security_bound(p);
  REQUIRE(b.p_ell.size() == 5);
  double total = 0.0;
  for (int l = 0; l <= 4; ++l) {
    const double want = oracle::binomial(4, l) * std::pow(2.0, 4 - l) / std::pow(3.0, 4);
    CHECK(std::abs(b.p_ell[l] - want) < 1e-12);
    CHECK(std::abs(b.p_ell_formula[l] - want) < 1e-12);
    CHECK(std::abs(p_ell_formula(4, 3, l) - want) < 1e-12);
    total += b.p_ell[l];
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("security: bound is identical for every worker count and shrinks with m") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 3);
  SecurityBoundOptions one;
  SecurityBoundOptions many;
  many.workers = 4;
  const SecurityBound a = security_bound(p, one);
  const SecurityBound b = security_bound(p, many);
  CHECK(a.bound_1norm == b.bound_1norm);
  CHECK(a.second_moment == b.second_moment);
  CHECK(a.p_ell == b.p_ell);
  const double m2 = security_bound(QheParams::create(shared("five_qubit"), 1, 2)).bound_1norm;
  CHECK(a.bound_1norm < m2);
}

TEST_CASE("security: sampling is seeded and refuses silent truncation") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 3);
  SecurityBoundOptions tight;
  tight.max_pairs = 100;
  CHECK_THROWS(security_bound(p, tight));
  tight.sample_pairs = 5000;
  tight.seed = 12;
  const SecurityBound a = security_bound(p, tight);
  const SecurityBound b = security_bound(p, tight);
  CHECK(a.sampled);
  CHECK(a.pairs == 5000);
  CHECK(a.bound_1norm == b.bound_1norm);
  const SecurityBound exact = security_bound(p);
  CHECK(std::abs(a.second_moment - exact.second_moment) < 0.2);
}

TEST_CASE("epsilon formula: values, monotone in m, domain errors") {
  const Epsilon e = epsilon_formula(2, 4, 4, 0.5);
  CHECK(std::abs(e.value - 0.1533396) < 1e-6);
  CHECK_FALSE(e.indeterminate);
  double prev = 1e9;
  for (int m = 2; m <= 64; m *= 2) {
    const Epsilon x = epsilon_formula(2, m, 4, 0.5);
    CHECK(x.value <= prev + 1e-15);
    prev = x.value;
  }
  CHECK_THROWS_AS(epsilon_formula(1, 4, 4, 0.5), std::domain_error);
  CHECK_THROWS_AS(epsilon_formula(2, 0.5, 4, 0.5), std::domain_error);
  CHECK_THROWS_AS(epsilon_formula(2, 4, 0, 0.5), std::domain_error);
  CHECK_THROWS_AS(epsilon_formula(2, 4, 4, -1), std::domain_error);
}

TEST_CASE("rank experiment: rank stays under the bound") {
  const QheParams p = QheParams::variant(std::make_shared<const CodeSpace>(ghz_code(2)), 1, 2, {});
  const RankExperiment r = rank_experiment(p, {0});
  CHECK(r.dim == 16);
  CHECK(r.rank == 11);
  CHECK(r.rank <= r.rank_bound);
  CHECK(std::abs(r.fraction - 11.0 / 16.0) < 1e-12);
  CHECK(std::abs(r.distance_lower_bound - 0.625) < 1e-12);
  CHECK(r.exact_distance >= r.distance_lower_bound - 1e-9);

  const QheParams big = QheParams::variant(std::make_shared<const CodeSpace>(ghz_code(1)), 3, 2, {});
  const RankExperiment rb = rank_experiment(big, {0, 1, 1});
  CHECK(rb.dim == 64);
  CHECK(rb.rank <= rb.rank_bound);
  CHECK(rb.exact_distance >= 1.5);
}
