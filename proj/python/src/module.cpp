#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcl/bounds.hpp"
#include "qcl/cli.hpp"
#include "qcl/clifford.hpp"
#include "qcl/code_io.hpp"
#include "qcl/codes.hpp"
#include "qcl/gates.hpp"
#include "qcl/qhe.hpp"
#include "qcl/security.hpp"
#include "qcl/stabilizer.hpp"
#include "qcl/transversal.hpp"

namespace py = pybind11;
using namespace qcl;

namespace {

std::shared_ptr<const CodeSpace> shared_code(const std::string& name) {
  return std::make_shared<const CodeSpace>(resolve_code(name));
}

}  // namespace

PYBIND11_MODULE(_qcl, m) {
  m.doc() = "Quantum code laboratory: codes, transversal gates, homomorphic encryption and bounds";

  py::class_<CodeSpace>(m, "CodeSpace")
      .def_property_readonly("name", &CodeSpace::name)
      .def_property_readonly("n_physical", &CodeSpace::n_physical)
      .def_property_readonly("logical_zero", &CodeSpace::logical_zero)
      .def_property_readonly("logical_one", &CodeSpace::logical_one)
      .def_property_readonly("declared_distance", &CodeSpace::declared_distance);

  m.def("builtin_code_names", &builtin_code_names);
  m.def("code", &resolve_code, py::arg("name_or_path"));
  m.def("ghz_code", &ghz_code, py::arg("k"));
  m.def("kl_distance", &kl_distance);
  m.def("verified_distance", &verified_distance);
  m.def(
      "kl_passes", [](const CodeSpace& c, int w) { return kl_check(c, w).passed(); }, py::arg("code"),
      py::arg("max_weight"));
  m.def("classify", [](const CodeSpace& c) {
    const Classification k = classify(c);
    return py::make_tuple(std::string(to_string(k.kind)), k.r, k.distance);
  });
  m.def("is_additive", &is_additive);

  m.def("gate", &gates::named, py::arg("name"));
  m.def(
      "clifford_level",
      [](const Matrix& u, int max_k) { return clifford_level(DenseOperator(u), max_k); }, py::arg("u"),
      py::arg("max_k") = kMaxCliffordLevel);
  m.def(
      "is_transversal_logical",
      [](const std::string& code, const Matrix& u, const Matrix& target) {
        return verify_transversal(ProductOperator::uniform(shared_code(code), u), target).logical;
      },
      py::arg("code"), py::arg("u"), py::arg("target"));

  m.def(
      "qhe_roundtrip",
      [](const std::string& code, int p, int m_cols, const std::vector<int>& x, std::uint64_t seed) {
        const QheParams params = QheParams::create(shared_code(code), p, m_cols);
        const SecretKey key = keygen(params, seed);
        const Decryption d = decrypt(params, encrypt(params, key, x), key);
        return py::make_tuple(d.bits, d.probability);
      },
      py::arg("code"), py::arg("p"), py::arg("m"), py::arg("x"), py::arg("seed") = 1);
  m.def(
      "security_bound",
      [](const std::string& code, int p, int m_cols) {
        const SecurityBound b = security_bound(QheParams::create(shared_code(code), p, m_cols));
        py::dict out;
        out["bound"] = b.bound_1norm;
        out["second_moment"] = b.second_moment;
        out["p_ell"] = b.p_ell;
        out["empirical_c"] = b.empirical_c;
        out["strict_mixing"] = b.strict_mixing;
        return out;
      },
      py::arg("code"), py::arg("p"), py::arg("m"));
  m.def(
      "epsilon_formula",
      [](double k, double m_cols, int n, double c) {
        const Epsilon e = epsilon_formula(k, m_cols, n, c);
        return py::make_tuple(e.value, e.indeterminate);
      },
      py::arg("K"), py::arg("m"), py::arg("n"), py::arg("c"));

  m.def("nayak_lower_bound", &nayak_lower_bound, py::arg("n"), py::arg("p"));
  m.def(
      "qfhe_comm_bound", [](int n, double eps) { return static_cast<double>(qfhe_comm_bound(n, eps)); }, py::arg("n"),
      py::arg("epsilon"));
  m.def(
      "crossing_csv",
      [](int n, double c_prime, const std::string& family, int p_min, int p_max) {
        return crossing_csv(crossing_analysis(n, c_prime, family, p_min, p_max));
      },
      py::arg("n"), py::arg("c_prime"), py::arg("family"), py::arg("p_min") = 1, py::arg("p_max") = 30);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
