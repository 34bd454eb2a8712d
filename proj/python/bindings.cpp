#include "oscistrip/config.hpp"
#include "oscistrip/geometry.hpp"
#include "oscistrip/nonlinearity.hpp"
#include "oscistrip/parallel.hpp"
#include "oscistrip/quadrature.hpp"
#include "oscistrip/studies.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace oscistrip;

namespace {

OscillationProfile profile_by_name(const std::string &name) {
  if (name == "two-plus-cos")
    return OscillationProfile::two_plus_cos();
  if (name == "constant")
    return OscillationProfile::constant(1.0);
  throw ConfigError("profile: expected 'two-plus-cos' or 'constant', got '" + name + "'");
}

ScalarField field_of(const py::object &f) {
  if (py::isinstance<py::float_>(f) || py::isinstance<py::int_>(f))
    return ScalarField::constant(f.cast<double>());
  auto fn = f.cast<std::function<double(double, double)>>();
  return ScalarField::from([fn](const Vec2 &p) {
    py::gil_scoped_acquire gil;
    return fn(p.x(), p.y());
  });
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core bindings of the oscistrip experiment library";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ExperimentConfig>(m, "Config")
      .def(py::init<>())
      .def_readwrite("ladder", &ExperimentConfig::ladder)
      .def_readwrite("h_interior", &ExperimentConfig::h_interior)
      .def_readwrite("h_boundary", &ExperimentConfig::h_boundary)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("out", &ExperimentConfig::out)
      .def_readwrite("mc_samples", &ExperimentConfig::mc_samples)
      .def("validate", &ExperimentConfig::validate)
      .def("echo", &ExperimentConfig::echo);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("suite_names", &suite_names);
  m.def("set_threads", &set_thread_count, py::arg("n"));

  m.def(
      "run_suite",
      [](const ExperimentConfig &cfg, const std::string &suite, const std::string &out) {
        RunReport r;
        {
          py::gil_scoped_release release;
          r = run_suite(cfg, suite, out);
        }
        py::list checks;
        for (const auto &c : r.checks)
          checks.append(py::dict(py::arg("id") = c.id, py::arg("description") = c.description,
                                 py::arg("acceptance") = c.acceptance,
                                 py::arg("passed") = c.passed, py::arg("detail") = c.detail));
        return py::dict(py::arg("suite") = r.suite, py::arg("passed") = r.passed(),
                        py::arg("checks") = checks, py::arg("csv") = r.csv_paths);
      },
      py::arg("config"), py::arg("suite"), py::arg("out"));

  m.def(
      "mu",
      [](const std::string &profile, double s) { return mu(profile_by_name(profile), s); },
      py::arg("profile"), py::arg("s") = 0.0);

  m.def(
      "conc_integral",
      [](double eps, const py::object &h, const py::object &phi, const std::string &profile) {
        const StripRegion region(BoundaryCurve::circle(), profile_by_name(profile), eps);
        return conc_integral(region, field_of(h), field_of(phi));
      },
      py::arg("epsilon"), py::arg("h") = 1.0, py::arg("phi") = 1.0,
      py::arg("profile") = "two-plus-cos",
      "(1/eps) times the integral of h*phi over the oscillating strip of the unit disk");

  m.def(
      "boundary_limit",
      [](const py::object &h, const py::object &phi, const std::string &profile) {
        const OscillationProfile g = profile_by_name(profile);
        return boundary_integral(
            BoundaryCurve::circle(), [g](double s) { return mu(g, s); }, field_of(h),
            field_of(phi));
      },
      py::arg("h") = 1.0, py::arg("phi") = 1.0, py::arg("profile") = "two-plus-cos");

  py::class_<Nonlinearity>(m, "Nonlinearity")
      .def_static("bistable", &Nonlinearity::bistable, py::arg("a") = 1.0, py::arg("b") = 1.0)
      .def_static("linear", &Nonlinearity::linear, py::arg("a"))
      .def_static("constant", &Nonlinearity::constant, py::arg("c"))
      .def_static("zero", &Nonlinearity::zero)
      .def("__call__", &Nonlinearity::value)
      .def("derivative", &Nonlinearity::derivative)
      .def("primitive", &Nonlinearity::primitive)
      .def("bound", &Nonlinearity::bound)
      .def("dissipation_threshold", &Nonlinearity::dissipation_threshold)
      .def_property_readonly("name", &Nonlinearity::name);
}
