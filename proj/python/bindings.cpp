// Python module trigonal._core. Structured results cross the boundary as JSON text;
// the package __init__ decodes them.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trigonal/acceptance.hpp"
#include "trigonal/identities.hpp"
#include "trigonal/numerics.hpp"
#include "trigonal/sigma.hpp"
#include "trigonal/version.hpp"

namespace py = pybind11;
using namespace trigonal;

namespace {

Rational to_rational(const py::handle& v) { return parse_rational(py::str(v).cast<std::string>()); }

IdentityReport run_check(const std::string& identity, const TrigonalCurve& c, CheckMode m, int n,
                         const HarnessOptions& o) {
  if (identity == "prop41") return check_prop41(c, m, o);
  if (identity == "lemma36") return check_lemma36(c, m, o);
  if (identity == "lemma51") return check_lemma51(c, m, o);
  if (identity == "fs") return check_fs(c, n, m, o);
  if (identity == "kiepert") return check_kiepert(c, n, m, o);
  if (identity == "bilinear") return check_bilinear_2pt(c, m, o);
  throw py::value_error("unknown identity: " + identity);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sigma functions of the trigonal genus three curve y^3 = x^4 + ...";
  m.def("version", &version);

  py::register_exception<SeriesError>(m, "SeriesError", PyExc_ValueError);

  py::class_<TrigonalCurve>(m, "Curve")
      .def(py::init([](py::object l3, py::object l6, py::object l9, py::object l12) {
             return TrigonalCurve::trigonal(to_rational(l3), to_rational(l6), to_rational(l9), to_rational(l12));
           }),
           py::arg("l3") = 0, py::arg("l6") = 0, py::arg("l9") = 0, py::arg("l12") = 0,
           "Lambdas may be ints, strings like '3/4', or anything whose str() parses as a rational.")
      .def_static("symbolic", &TrigonalCurve::symbolic)
      .def_static("from_json", [](const std::string& s) { return TrigonalCurve::from_json(nlohmann::json::parse(s)); })
      .def("to_json", [](const TrigonalCurve& c) { return c.to_json().dump(); })
      .def_property_readonly("is_symbolic", &TrigonalCurve::is_symbolic)
      .def("lambda_", [](const TrigonalCurve& c, int j) { return to_string(c.lambda(j)); }, py::arg("j"))
      .def("discriminant", [](const TrigonalCurve& c) { return to_string(c.discriminant()); })
      .def("evaluate_f", py::overload_cast<std::complex<double>, std::complex<double>>(&TrigonalCurve::evaluate_f,
                                                                                      py::const_))
      .def("__repr__", &TrigonalCurve::describe);

  m.def(
      "sigma_expansion",
      [](const TrigonalCurve& c, int cutoff) {
        SigmaExpansion s = sigma_expand(c, cutoff);
        return nlohmann::json{{"series", series_to_json(s.series)}, {"text", s.series.to_string()}}.dump();
      },
      py::arg("curve"), py::arg("cutoff"), py::call_guard<py::gil_scoped_release>());

  py::class_<NumericContext>(m, "NumericContext")
      .def_property_readonly("omega1", [](const NumericContext& n) { return n.periods.omega1; })
      .def_property_readonly("omega2", [](const NumericContext& n) { return n.periods.omega2; })
      .def_property_readonly("eta1", [](const NumericContext& n) { return n.periods.eta1; })
      .def_property_readonly("eta2", [](const NumericContext& n) { return n.periods.eta2; })
      .def_property_readonly("tau", [](const NumericContext& n) { return n.periods.tau; })
      .def_property_readonly("c", [](const NumericContext& n) { return n.calibration.c; })
      .def_property_readonly("characteristic", [](const NumericContext& n) { return n.search.delta.to_string(); })
      .def("validation", [](const NumericContext& n) { return n.periods.validation.to_json().dump(); })
      .def("calibration", [](const NumericContext& n) { return n.calibration.to_json().dump(); })
      .def(
          "sigma",
          [](const NumericContext& n, const CVector3& u, int derivatives) {
            SigmaValue s = sigma_numeric(n.periods, u, derivatives);
            return py::make_tuple(s.value, s.gradient, s.hessian);
          },
          py::arg("u"), py::arg("derivatives") = 0)
      .def("abel", [](const NumericContext& n, cplx x, cplx y) { return n.abel(x, y); }, py::arg("x"), py::arg("y"))
      .def("save_periods", [](const NumericContext& n, const std::string& path) { save_periods(n.periods, path); });

  m.def(
      "numeric_context",
      [](const TrigonalCurve& c, int sigma_cutoff, std::uint64_t seed) {
        return build_numeric_context(c, sigma_expand(c, sigma_cutoff).series, seed);
      },
      py::arg("curve"), py::arg("sigma_cutoff") = 20, py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "check",
      [](const std::string& identity, const TrigonalCurve& c, const std::string& mode, int n, int sigma_cutoff,
         long min_order, std::uint64_t seed, int samples, double tol, const NumericContext* ctx) {
        HarnessOptions o;
        o.sigma_cutoff = sigma_cutoff;
        o.min_verified_order = min_order;
        o.seed = seed;
        o.samples = samples;
        o.tol = tol;
        o.numeric = ctx;
        CheckMode cm = parse_mode(mode);
        py::gil_scoped_release release;
        return run_check(identity, c, cm, n, o).to_json().dump();
      },
      py::arg("identity"), py::arg("curve"), py::arg("mode") = "exact", py::arg("n") = 3,
      py::arg("sigma_cutoff") = 20, py::arg("min_order") = 12, py::arg("seed") = 1, py::arg("samples") = 10,
      py::arg("tol") = 1e-5, py::arg("context") = nullptr);

  m.def(
      "acceptance",
      [](std::vector<int> only, std::uint64_t seed) {
        AcceptanceOptions o;
        o.only = std::move(only);
        o.seed = seed;
        nlohmann::json out = nlohmann::json::array();
        {
          py::gil_scoped_release release;
          for (const auto& r : run_acceptance(o)) out.push_back(to_json(r));
        }
        return out.dump();
      },
      py::arg("only") = std::vector<int>{}, py::arg("seed") = 1);
}
