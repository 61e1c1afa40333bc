#include <doctest.h>

#include <map>

#include "qcl/codes.hpp"
#include "qcl/errors.hpp"
#include "qcl/gates.hpp"
#include "qcl/qhe.hpp"
#include "qcl/transversal.hpp"

using namespace qcl;

namespace {

std::shared_ptr<const CodeSpace> shared(const std::string& name) {
  return std::make_shared<const CodeSpace>(builtin_code(name));
}

std::vector<int> bits_of(std::uint64_t v, int p) {
  std::vector<int> x(p);
  for (int b = 0; b < p; ++b) x[b] = static_cast<int>((v >> (p - 1 - b)) & 1);
  return x;
}

// Every key in [1, m]^n, in lexicographic order.
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

TEST_CASE("qhe: parameters for the five-qubit scheme") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  CHECK(p.withheld == std::vector<int>{0});
  CHECK(p.sent == std::vector<int>{1, 2, 3, 4});
  CHECK(p.n() == 4);
  CHECK(p.fold == 1);
  CHECK(p.distance == 3);
  CHECK(p.server_qubits() == 8);
  CHECK(p.recovery != nullptr);
  // Withholding three subsystems reaches the distance.
  CHECK_THROWS(QheParams::create(shared("five_qubit"), 1, 2, std::vector<int>{0, 1, 2}));
  // Distance 1 leaves no room to withhold anything.
  CHECK_THROWS(QheParams::create(shared("bitflip3"), 1, 2));
  CHECK_THROWS(QheParams::create(shared("five_qubit"), 0, 2));
  CHECK_THROWS(QheParams::create(shared("five_qubit"), 1, 0));
}

TEST_CASE("keygen: deterministic, in range, m = 1 is constant") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 3);
  CHECK(keygen(p, 5).s == keygen(p, 5).s);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (int v : keygen(p, seed).s) CHECK((v >= 1 && v <= 3));
  }
  const QheParams one = QheParams::create(shared("five_qubit"), 1, 1);
  CHECK(keygen(one, 9).s == std::vector<int>(4, 1));
}

TEST_CASE("keygen: columns are uniform, 3 sigma over 10000 draws") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const int draws = 10000;
  std::vector<int> ones(4, 0);
  for (int d = 0; d < draws; ++d) {
    const auto k = keygen(p, static_cast<std::uint64_t>(d) + 1000);
    for (int j = 0; j < 4; ++j) ones[j] += k.s[j] == 1;
  }
  const double sigma = std::sqrt(draws * 0.25);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(ones[j] - draws / 2.0) < 3.0 * sigma);
}

TEST_CASE("qhe: bit helpers") {
  CHECK(parse_bits("0110") == std::vector<int>{0, 1, 1, 0});
  CHECK(format_bits({1, 0, 1}) == "101");
  CHECK_THROWS(parse_bits("01a"));
}

TEST_CASE("qhe: encrypt then decrypt recovers every input for p <= 2") {
  for (int pp = 1; pp <= 2; ++pp) {
    const QheParams p = QheParams::create(shared("five_qubit"), pp, 2);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const SecretKey key = keygen(p, seed);
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << pp); ++v) {
        const auto x = bits_of(v, pp);
        const QheCiphertext ct = encrypt(p, key, x);
        CHECK(ct.placements == key.s);
        CHECK(ct.rows == pp);
        CHECK(ct.noise_qubits == 4LL * pp * (2 - 1));
        CHECK(ct.ancillas.size() == 2);
        const Decryption d = decrypt(p, ct, key);
        CHECK(d.bits == x);
        CHECK(std::abs(d.probability - 1.0) < 1e-9);
        CHECK(std::abs(d.projection_weight - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("qhe: correctness over builtin 1-fold schemes and all keys") {
  int schemes = 0;
  for (const auto& name : builtin_code_names()) {
    QheParams p;
    try {
      p = QheParams::create(shared(name), 1, 2);
    } catch (const std::exception&) {
      continue;
    }
    if (p.fold != 1) continue;
    ++schemes;
    const auto x_gate = ProductOperator::uniform(p.code, gates::X());
    const auto pauli = identify_logical_pauli(x_gate);
    for (const auto& key : all_keys(p.n(), p.m)) {
      for (int bit = 0; bit < 2; ++bit) {
        const auto ct = encrypt(p, key, {bit});
        CHECK(decrypt(p, ct, key).bits == std::vector<int>{bit});
        if (pauli == 'X') {
          const auto d = decrypt(p, evaluate(p, ct, x_gate), key);
          CHECK(d.bits == std::vector<int>{1 - bit});
          CHECK(std::abs(d.probability - 1.0) < 1e-9);
        }
      }
    }
  }
  CHECK(schemes >= 2);
}

TEST_CASE("qhe: composed gates on two rows") {
  const QheParams p = QheParams::create(shared("steane"), 2, 2);
  const SecretKey key = keygen(p, 11);
  const auto cx = ProductOperator(p.code, 2, std::vector<Matrix>(7, gates::CX()));
  const auto x = ProductOperator::uniform(p.code, gates::X());
  // 10 -CX-> 11 -X on row 0-> 01 -CX-> 01
  auto ct = encrypt(p, key, {1, 0});
  ct = evaluate(p, ct, cx);
  CHECK(decrypt(p, ct, key).bits == std::vector<int>{1, 1});
  ct = evaluate(p, ct, x, {0});
  CHECK(decrypt(p, ct, key).bits == std::vector<int>{0, 1});
  ct = evaluate(p, ct, cx);
  const auto d = decrypt(p, ct, key);
  CHECK(d.bits == std::vector<int>{0, 1});
  CHECK(std::abs(d.probability - 1.0) < 1e-9);
  CHECK_THROWS(evaluate(p, ct, x, {2}));
  CHECK_THROWS(evaluate(p, ct, cx, {1, 1}));
  CHECK_THROWS(evaluate(p, ct, ProductOperator::uniform(shared("five_qubit"), gates::X())));
}

TEST_CASE("qhe: absorbed ancillas decrypt to their labels") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const SecretKey key = keygen(p, 4);
  const auto ct = encrypt(p, key, {1});
  for (std::size_t a = 0; a < ct.ancillas.size(); ++a) {
    const auto big = absorb_ancilla(ct, a);
    CHECK(big.rows == 2);
    CHECK(big.ancillas.size() == ct.ancillas.size() - 1);
    const auto d = decrypt(p, big, key);
    CHECK(d.bits == std::vector<int>{1, ct.ancillas[a].label});
  }
  CHECK_THROWS(absorb_ancilla(ct, 5));
}

TEST_CASE("qhe: a wrong key is reported") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  SecretKey key = keygen(p, 7);
  const auto ct = encrypt(p, key, {0});
  key.s[0] = key.s[0] % 2 + 1;
  CHECK_THROWS_AS(decrypt(p, ct, key), KeyMismatch);
  CHECK_THROWS(decrypt(p, ct, SecretKey{{1, 1}}));
}

TEST_CASE("qhe: server view is a density with noise on the other columns") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const SecretKey key = keygen(p, 3);
  const auto ct = encrypt(p, key, {1});
  const DenseOperator v = server_view(p, ct);
  CHECK(v.dim() == 256);
  CHECK(v.is_density(1e-10));
  CHECK(std::abs(v.trace() - 1.0) < 1e-12);
  // Every non-key column is maximally mixed.
  for (int j = 0; j < 4; ++j) {
    const int noise_col = 2 - ct.placements[j];
    const DenseOperator r = partial_trace(v, std::vector<int>{j * 2 + noise_col});
    CHECK((r.matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-10);
  }

  const QheParams m1 = QheParams::create(shared("five_qubit"), 1, 1);
  const auto ct1 = encrypt(m1, keygen(m1, 1), {1});
  CHECK((server_view(m1, ct1).matrix() - sent_state(m1, ct1).matrix()).norm() < 1e-12);
}

TEST_CASE("qhe: the sent state does not depend on the key") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 3);
  const auto a = encrypt(p, SecretKey{{1, 2, 3, 1}}, {0});
  const auto b = encrypt(p, SecretKey{{3, 3, 2, 2}}, {0});
  CHECK((sent_state(p, a).matrix() - sent_state(p, b).matrix()).norm() < 1e-12);
  CHECK(a.placements != b.placements);
}

TEST_CASE("qrac harness: identity and NOT are recovered with certainty") {
  const QheParams p = QheParams::create(shared("five_qubit"), 1, 2);
  const std::vector<BooleanFamilyMember> fam{
      {"I", ProductOperator::uniform(p.code, gates::I()), gates::I()},
      {"X", ProductOperator::uniform(p.code, gates::X()), gates::X()},
  };
  const QracReport rep = qrac_harness(p, fam, 5);
  CHECK(rep.communication_qubits == 8);
  REQUIRE(rep.queries.size() == 4);
  for (const auto& q : rep.queries) {
    CHECK(std::abs(q.success - 1.0) < 1e-9);
    CHECK(std::abs(q.first_bit_success - 1.0) < 1e-9);
  }
  const std::vector<BooleanFamilyMember> bad{{"H", ProductOperator::uniform(p.code, gates::H()), gates::X()}};
  CHECK_THROWS(qrac_harness(p, bad, 5));
}
