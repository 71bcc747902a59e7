#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "finsler/curvature.hpp"
#include "finsler/dsl.hpp"
#include "finsler/errors.hpp"
#include "finsler/report.hpp"
#include "finsler/suite.hpp"
#include "finsler/variation.hpp"

namespace py = pybind11;
using namespace finsler;

namespace {

FinslerPoint point(const CVector& z, const CVector& v) {
  FinslerPoint p(z, v);
  validate_point(p);
  return p;
}

py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_finsler, mod) {
  mod.doc() = "Complex Finsler metric engine";

  py::register_exception<Error>(mod, "FinslerError", PyExc_ValueError);

  py::class_<FinslerMetric>(mod, "Metric")
      .def_property_readonly("name", &FinslerMetric::name)
      .def_property_readonly("dim", &FinslerMetric::dim)
      .def_property_readonly("has_analytic", &FinslerMetric::has_analytic)
      .def("jets_only", &FinslerMetric::jets_only)
      .def("G", [](const FinslerMetric& m, const CVector& z, const CVector& v) { return m.value(point(z, v)); })
      .def("levi", [](const FinslerMetric& m, const CVector& z, const CVector& v) {
        return levi_data(m.evaluate(point(z, v), 2)).matrix;
      })
      .def("gamma", [](const FinslerMetric& m, const CVector& z, const CVector& v) {
        const Tensor& t = point_geometry(m, point(z, v)).connection.gamma_semicolon;
        CMatrix g(m.dim(), m.dim());
        for (int a = 0; a < m.dim(); ++a) {
          for (int b = 0; b < m.dim(); ++b) g(a, b) = t(a, b);
        }
        return g;
      })
      .def("homogeneity_residuals", [](const FinslerMetric& m, const CVector& z, const CVector& v) {
        return to_python(residuals_to_json(homogeneity_residuals(m.evaluate(point(z, v)))));
      })
      .def("holomorphic_curvature", [](const FinslerMetric& m, const CVector& z, const CVector& v) {
        return holomorphic_curvature(m, point(z, v));
      });

  mod.def(
      "builtin",
      [](const std::string& name, int n, const std::map<std::string, double>& params,
         const std::vector<std::vector<std::string>>& g) { return builtin_metric(BuiltinSpec{name, n, params, g}); },
      py::arg("name"), py::arg("n") = 1, py::arg("params") = std::map<std::string, double>{},
      py::arg("g") = std::vector<std::vector<std::string>>{});
  mod.def("dsl", &dsl_metric, py::arg("expr"), py::arg("n"));

  mod.def(
      "classify",
      [](const FinslerMetric& m, int count, uint64_t seed) {
        const KahlerReport k = kahler_classify(m, random_points(m.dim(), count, seed), default_kahler_tolerance(m));
        return py::dict(py::arg("hermitian") = k.hermitian, py::arg("strongly_kahler") = k.strongly_kahler,
                        py::arg("kahler") = k.kahler, py::arg("weakly_kahler") = k.weakly_kahler);
      },
      py::arg("metric"), py::arg("count") = 20, py::arg("seed") = kDefaultSeed);

  mod.def(
      "geodesic",
      [](const FinslerMetric& m, const CVector& p, const CVector& v, double T, double tol) {
        GeodesicOptions o;
        o.tol = tol;
        return to_python(path_to_json(integrate_geodesic(m, p, v, T, o)));
      },
      py::arg("metric"), py::arg("start"), py::arg("velocity"), py::arg("T"), py::arg("tol") = 1e-9);
  mod.def("exp_map", [](const FinslerMetric& m, const CVector& p, const CVector& v) { return exp_map(m, p, v); });

  mod.def(
      "verify",
      [](const FinslerMetric& m, std::optional<double> c, int count, uint64_t seed, bool variations) {
        SuiteOptions o;
        o.samples.count = count;
        o.samples.seed = seed;
        o.curvature_c = c ? c : known_curvature_constant(m);
        o.variations = variations;
        return to_python(run_verify_suite(m, o).to_json());
      },
      py::arg("metric"), py::arg("c") = py::none(), py::arg("count") = 20, py::arg("seed") = kDefaultSeed,
      py::arg("variations") = true);
}
