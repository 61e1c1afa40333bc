#include <doctest.h>

#include "oracles.hpp"
#include "qcl/code_io.hpp"
#include "qcl/codes.hpp"
#include "qcl/errors.hpp"
#include "qcl/gates.hpp"
#include "qcl/transversal.hpp"

using namespace qcl;

namespace {

std::shared_ptr<const CodeSpace> shared(const std::string& name) {
  return std::make_shared<const CodeSpace>(builtin_code(name));
}

// Brute-force logical check: restrict the dense operator to the codespace of r
// blocks and compare with target up to a phase.
bool oracle_is_logical(const CodeSpace& c, int r, const Matrix& u, const Matrix& target) {
  const Eigen::Index k = Eigen::Index{1} << r;
  Matrix v(Eigen::Index{1} << (r * c.n_physical()), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    Vector col = Vector::Ones(1);
    for (int b = 0; b < r; ++b) col = oracle::kron(col, c.basis(oracle::bit(static_cast<std::uint64_t>(i), r, b)));
    v.col(i) = col;
  }
  const Matrix img = u * v;
  const Matrix a = v.adjoint() * img;
  // Leakage out of the codespace.
  if ((img - v * a).norm() > 1e-8) return false;
  Eigen::Index rr = 0;
  Eigen::Index cc = 0;
  target.cwiseAbs().maxCoeff(&rr, &cc);
  if (std::abs(a(rr, cc)) < 1e-9) return false;
  const cplx ph = a(rr, cc) / target(rr, cc);
  return std::abs(std::abs(ph) - 1.0) < 1e-8 && (a - ph * target).norm() < 1e-8;
}

}  // namespace

TEST_CASE("transversal: steane H is logical H") {
  const auto steane = shared("steane");
  const ProductOperator h = ProductOperator::uniform(steane, gates::H());
  const TransversalReport rep = verify_transversal(h, gates::H());
  CHECK(rep.logical);
  CHECK(rep.strongly_transversal);
  CHECK(rep.max_deviation < 1e-9);
  CHECK(oracle_is_logical(*steane, 1, h.dense().matrix(), gates::H()));
}

TEST_CASE("transversal: steane CX across two blocks") {
  const auto steane = shared("steane");
  const ProductOperator cx(steane, 2, std::vector<Matrix>(7, gates::CX()));
  CHECK(verify_transversal(cx, gates::CX()).logical);
  CHECK_FALSE(verify_transversal(cx, gates::SWAP()).logical);
}

TEST_CASE("transversal: five_qubit Toffoli on three blocks is not logical") {
  const auto five = shared("five_qubit");
  const ProductOperator t(five, 3, std::vector<Matrix>(5, gates::Toffoli()));
  const TransversalReport rep = verify_transversal(t, gates::Toffoli());
  CHECK_FALSE(rep.logical);
  CHECK(rep.max_deviation > 1e-3);
}

TEST_CASE("transversal: logical Pauli identification") {
  CHECK(identify_logical_pauli(ProductOperator::uniform(shared("five_qubit"), gates::X())) == 'X');
  CHECK(identify_logical_pauli(ProductOperator::uniform(shared("steane"), gates::Z())) == 'Z');
  // X on every qubit of Shor's code is a logical Z in this basis.
  CHECK(identify_logical_pauli(ProductOperator::uniform(shared("shor"), gates::X())) == 'Z');
  CHECK_FALSE(identify_logical_pauli(ProductOperator::uniform(shared("five_qubit"), gates::H())).has_value());
}

TEST_CASE("transversal: agrees with the dense oracle on random product operators") {
  std::mt19937_64 rng(99);
  const auto five = shared("five_qubit");
  const auto steane = shared("steane");
  const std::vector<Matrix> pool{gates::I(), gates::X(), gates::Y(), gates::Z(), gates::H(), gates::S()};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  int agreed = 0;
  int logical_seen = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto code = trial % 2 ? steane : five;
    const int n = code->n_physical();
    std::vector<Matrix> f;
    // Mostly uniform so that some trials are logical.
    const Matrix base = pool[pick(rng)];
    for (int i = 0; i < n; ++i) f.push_back(trial % 5 == 0 ? pool[pick(rng)] : base);
    const ProductOperator op(code, 1, f);
    const Matrix dense = op.dense().matrix();
    for (const auto& target : {gates::X(), gates::Z(), gates::H(), gates::I()}) {
      const bool got = is_logical(op, target).logical;
      const bool want = oracle_is_logical(*code, 1, dense, target);
      CHECK(got == want);
      agreed += got == want;
      logical_seen += want;
    }
  }
  CHECK(agreed == 200);
  CHECK(logical_seen > 0);
}

TEST_CASE("transversal: phase is consistent across probes") {
  const auto five = shared("five_qubit");
  // Y on every qubit: a logical Y up to a global phase.
  const ProductOperator y = ProductOperator::uniform(five, gates::Y());
  const LogicalCheck c = is_logical(y, gates::Y());
  REQUIRE(c.logical);
  CHECK(std::abs(std::abs(c.phase) - 1.0) < 1e-9);
  Vector v = encode_blocks(*five, gates::H().col(0));
  const Vector before = v;
  y.apply(v);
  const Vector want = encode_blocks(*five, c.phase * gates::Y() * gates::H().col(0));
  CHECK((v - want).norm() < 1e-9);
  CHECK(std::abs(v.norm() - before.norm()) < 1e-12);
}

TEST_CASE("transversal: codespace preservation under logical gates") {
  std::mt19937_64 rng(3);
  const auto steane = shared("steane");
  const DenseOperator proj = steane->projector();
  for (const auto& g : {gates::X(), gates::Z(), gates::H(), gates::S()}) {
    const ProductOperator op = ProductOperator::uniform(steane, g);
    const DenseState l = random_state(1, rng);
    Vector v = steane->encode(l.amplitudes()(0), l.amplitudes()(1));
    op.apply(v);
    CHECK((proj.matrix() * v - v).norm() < 1e-9);
  }
}

TEST_CASE("transversal search finds the expected candidates") {
  std::vector<NamedUnitary> lib;
  for (const auto& name : gates::names()) {
    const Matrix u = gates::named(name);
    if (u.rows() == 2) lib.push_back({name, u});
  }
  const auto hits = strongly_transversal_search(shared("steane"), gates::H(), lib);
  REQUIRE_FALSE(hits.empty());
  bool found_h = false;
  for (const auto& h : hits) found_h = found_h || h.name == "H";
  CHECK(found_h);
  const auto single = strongly_transversal_search(shared("steane"), gates::H(), lib, 1);
  const auto multi = strongly_transversal_search(shared("steane"), gates::H(), lib, 3);
  REQUIRE(single.size() == multi.size());
  for (std::size_t i = 0; i < single.size(); ++i) CHECK(single[i].name == multi[i].name);
  CHECK(strongly_transversal_search(shared("five_qubit"), gates::H(), lib).empty());
}

TEST_CASE("product operator files") {
  const auto steane = shared("steane");
  const ProductOperator h =
      parse_product_operator(steane, read_text_file(std::string(QCL_DATA_DIR) + "/steane_h.prod"), "steane_h.prod");
  CHECK(h.num_blocks() == 1);
  CHECK(h.num_subsystems() == 7);
  CHECK(verify_transversal(h, gates::H()).logical);
  const ProductOperator cx =
      parse_product_operator(steane, read_text_file(std::string(QCL_DATA_DIR) + "/steane_cx.prod"));
  CHECK(cx.num_blocks() == 2);
  CHECK(verify_transversal(cx, gates::CX()).logical);
  const ProductOperator x = parse_product_operator(
      shared("five_qubit"), read_text_file(std::string(QCL_DATA_DIR) + "/five_qubit_x_explicit.prod"));
  CHECK(identify_logical_pauli(x) == 'X');
  CHECK_THROWS_AS(parse_product_operator(steane, "blocks: 1\nfactor: NOPE\n"), ParseError);
  CHECK_THROWS_AS(parse_product_operator(steane, "blocks: 1\nfactor:\n  1 0\n"), ParseError);
  CHECK_THROWS(ProductOperator(steane, 1, std::vector<Matrix>(7, Matrix::Identity(2, 2) * 2.0)));
}
