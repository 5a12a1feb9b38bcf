#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conformable/core.hpp"
#include "conformable/errors.hpp"
#include "conformable/quad.hpp"
#include "conformable/verify.hpp"

namespace py = pybind11;
using namespace conformable;

namespace {

FuncSpec make_spec(const std::string& expr, std::optional<double> jump) { return FuncSpec::parse(expr, jump); }

QuadConfig make_quad(double abs_tol, double rel_tol, int max_subdivisions) {
  QuadConfig q;
  q.abs_tol = abs_tol;
  q.rel_tol = rel_tol;
  q.max_subdivisions = max_subdivisions;
  return q;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conformable derivative and integral operators";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<SyntaxError>(m, "SyntaxError", base.ptr());
  py::register_exception<UnknownIdentifier>(m, "UnknownIdentifier", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NonFinite>(m, "NonFinite", base.ptr());
  py::register_exception<NonDifferentiable>(m, "NonDifferentiable", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<EvalResult>(m, "EvalResult")
      .def_property_readonly("exists", &EvalResult::exists)
      .def_property_readonly("value", [](const EvalResult& r) -> std::optional<double> {
        if (r.exists()) return r.value();
        return std::nullopt;
      })
      .def_property_readonly("error", &EvalResult::error_estimate)
      .def_property_readonly("reason", &EvalResult::reason)
      .def("__bool__", &EvalResult::exists)
      .def("__repr__", [](const EvalResult& r) {
        if (!r.exists()) return "EvalResult(does_not_exist: " + r.reason() + ")";
        return "EvalResult(value=" + py::repr(py::float_(r.value())).cast<std::string>() +
               ", error=" + py::repr(py::float_(r.error_estimate())).cast<std::string>() + ")";
      });

  m.def("parse", [](const std::string& src) { return to_string(parse(src)); }, py::arg("source"),
        "Parse an expression and return its canonical text.");
  m.def(
      "evaluate",
      [](const std::string& expr, double t, double a, std::optional<double> jump) {
        return eval(make_spec(expr, jump), t, a);
      },
      py::arg("expr"), py::arg("t"), py::arg("a") = -std::numeric_limits<double>::infinity(),
      py::arg("jump") = py::none());
  m.def(
      "evaluate_dual",
      [](const std::string& expr, double t) {
        const Dual d = eval_dual(make_spec(expr, std::nullopt), t);
        return py::make_tuple(d.value, d.deriv);
      },
      py::arg("expr"), py::arg("t"), "(f(t), f'(t)) via dual numbers.");

  m.def(
      "derivative",
      [](const std::string& expr, double alpha, double a, double t, const std::string& mode,
         const std::string& method, std::optional<double> jump) {
        return derivative(make_spec(expr, jump), Order(alpha), Terminal(a), t, parse_mode(mode),
                          parse_method(method));
      },
      py::arg("expr"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::arg("mode") = "corrected",
      py::arg("method") = "closed", py::arg("jump") = py::none(),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "deriv_limit",
      [](const std::string& expr, double alpha, double a, double t, std::optional<double> jump) {
        return deriv_limit(make_spec(expr, jump), Order(alpha), Terminal(a), t);
      },
      py::arg("expr"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::arg("jump") = py::none(),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "deriv_closed_form",
      [](const std::string& expr, double alpha, double a, double t) {
        return deriv_closed_form(make_spec(expr, std::nullopt), Order(alpha), Terminal(a), t);
      },
      py::arg("expr"), py::arg("alpha"), py::arg("a"), py::arg("t"));
  m.def(
      "deriv_at_terminal",
      [](const std::string& expr, double alpha, double a, const std::string& mode, std::optional<double> jump) {
        return deriv_at_terminal(make_spec(expr, jump), Order(alpha), Terminal(a), parse_mode(mode));
      },
      py::arg("expr"), py::arg("alpha"), py::arg("a"), py::arg("mode") = "corrected", py::arg("jump") = py::none());
  m.def(
      "order_convert",
      [](double value, double alpha, double beta, double a, double t) {
        return order_convert(value, Order(alpha), Order(beta), Terminal(a), t);
      },
      py::arg("value"), py::arg("alpha"), py::arg("beta"), py::arg("a"), py::arg("t"));

  m.def(
      "integral",
      [](const std::string& expr, double alpha, double a, double t, double abs_tol, double rel_tol,
         int max_subdivisions) {
        return integral(make_spec(expr, std::nullopt), Order(alpha), Terminal(a), t,
                        make_quad(abs_tol, rel_tol, max_subdivisions));
      },
      py::arg("expr"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::arg("abs_tol") = 1e-10,
      py::arg("rel_tol") = 1e-9, py::arg("max_subdivisions") = 2000, py::call_guard<py::gil_scoped_release>());
  m.def(
      "t_of_i",
      [](const std::string& expr, double alpha, double a, double t) {
        return t_of_i(make_spec(expr, std::nullopt), Order(alpha), Terminal(a), t);
      },
      py::arg("expr"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "i_of_t",
      [](const std::string& expr, double alpha, double a, double t, const std::string& mode,
         std::optional<double> jump) {
        return i_of_t(make_spec(expr, jump), Order(alpha), Terminal(a), t, parse_mode(mode));
      },
      py::arg("expr"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::arg("mode") = "corrected",
      py::arg("jump") = py::none(), py::call_guard<py::gil_scoped_release>());

  m.def(
      "verify",
      [](const std::vector<std::string>& modes) {
        std::vector<TerminalMode> ms;
        for (const auto& s : modes) ms.push_back(parse_mode(s));
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = run_all(ms);
        }
        py::dict d;
        d["json"] = to_json(r);
        d["summary"] = summary_table(r);
        d["matches_expected"] = matches_expected(r);
        return d;
      },
      py::arg("modes") = std::vector<std::string>{"original", "corrected"},
      "Run the verification harness; returns json, summary and matches_expected.");

#ifdef VERSION_INFO
#define CONFORMABLE_STR2(x) #x
#define CONFORMABLE_STR(x) CONFORMABLE_STR2(x)
  m.attr("__version__") = CONFORMABLE_STR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
