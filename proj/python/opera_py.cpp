#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "opera/hampoisson.hpp"
#include "opera/oper.hpp"
#include "opera/psdo.hpp"
#include "opera/qchar.hpp"
#include "opera/qlattice.hpp"
#include "opera/verify.hpp"
#include "opera_cli.hpp"

namespace py = pybind11;
using namespace opera;

namespace {

std::vector<std::string> strings(const std::vector<JetPolynomial>& v) {
  std::vector<std::string> out;
  for (const auto& p : v) out.push_back(p.to_string());
  return out;
}

}  // namespace

PYBIND11_MODULE(_opera, m) {
  m.doc() = "Opers, Miura maps, q-deformations and their verification suites";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DepthExhausted>(m, "DepthExhausted", PyExc_RuntimeError);

  m.def("normalize", [](const std::string& text) { return parse_jet(text).to_string(); },
        "Parses a differential polynomial and returns its normal form.");
  m.def("miura", [](int n) { return strings(miura_expand(miura_diagonal(n))); }, py::arg("n"),
        "Miura polynomials v_1..v_{n-1} in the fields u1..u_{n-1}.");
  m.def(
      "flows",
      [](int n, int mm, int depth, bool modified) { return strings(modified ? mkdv_flow(n, mm, depth) : lax_rhs(n, mm, depth).rhs); },
      py::arg("n"), py::arg("m"), py::arg("depth") = 8, py::arg("modified") = false);
  m.def(
      "canonicalize",
      [](const std::vector<std::vector<std::string>>& entries) {
        JetMatrix a;
        for (const auto& row : entries) {
          a.emplace_back();
          for (const auto& e : row) a.back().push_back(parse_jet(e));
        }
        return strings(canonicalize(MatrixOper(a)).oper.v);
      },
      py::arg("entries"));
  m.def("q_miura", [](int n) {
    std::vector<std::string> out;
    for (const auto& t : q_miura_expand(n).t) out.push_back(t.to_string());
    return out;
  });
  m.def("classical_limit", [](int order) {
    std::vector<std::string> out;
    TruncatedSeries<JetPolynomial> t = classical_limit(order);
    for (int k = 0; k < order; ++k) out.push_back(t.coeff(k).to_string(FieldNames::single("u")));
    return out;
  });
  m.def("qchar", [](int n) {
    YPolynomial chi = qchar_fundamental(n);
    return std::pair{chi.to_string(), forgetful(chi, n).to_string()};
  });
  m.def(
      "verify",
      [](const std::string& suite, int window, int depth, int order) {
        VerifyConfig c;
        c.window = window;
        c.depth = depth;
        c.order = order;
        SuiteReport r = run_suite(suite, c);
        py::list checks;
        for (const auto& k : r.checks) {
          py::dict d;
          d["id"] = k.id;
          d["status"] = k.passed ? "pass" : "fail";
          d["detail"] = k.detail;
          checks.append(d);
        }
        py::dict out;
        out["suite"] = r.suite;
        out["passed"] = r.passed();
        out["checks"] = checks;
        return out;
      },
      py::arg("suite"), py::arg("window") = 12, py::arg("depth") = 8, py::arg("order") = 20);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line driver; returns (exit code, stdout, stderr).");
}
