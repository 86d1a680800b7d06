#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lognls/config.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_lognls, m) {
  m.doc() = "Semiclassical logarithmic Schrodinger toolbox";

  py::register_exception<lognls::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<lognls::ConstraintError>(m, "ConstraintError", PyExc_ValueError);
  py::register_exception<lognls::SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.def("scenarios", &lognls::list_scenarios,
        "One descriptive line per runnable scenario");

  m.def(
      "validate",
      [](const std::string& path) {
        lognls::RunConfig cfg = lognls::load_config(path);
        py::dict d;
        d["scenario"] = lognls::scenario_name(cfg.scenario);
        d["output_dir"] = lognls::resolve_output_dir(cfg.output_dir);
        d["T"] = cfg.T;
        d["lambda"] = cfg.lambda;
        d["alpha"] = cfg.alpha;
        d["packets"] = cfg.packets.size();
        return d;
      },
      py::arg("path"), "Parse and validate a config file; returns its key facts");

  m.def(
      "run",
      [](const std::string& path) {
        lognls::RunConfig cfg = lognls::load_config(path);
        {
          py::gil_scoped_release release;
          lognls::run_config(cfg);
        }
        return lognls::resolve_output_dir(cfg.output_dir);
      },
      py::arg("path"), "Execute a config file; returns the report directory");

  m.def("log_lipschitz_gap", &lognls::log_lipschitz_gap, py::arg("z1"), py::arg("z2"),
        "Pointwise almost-Lipschitz gap of z log|z|^2 (nonnegative for all pairs)");

  m.def("even_step_dt", &lognls::even_step_dt, py::arg("T"), py::arg("dt"),
        "Largest step <= dt with an even count that divides T exactly");

  m.def(
      "tau_path",
      [](double alpha0, double beta0, double lam, double omega, double T, double dt) {
        lognls::SampledPath hess;
        hess.dim = 1;
        hess.dt = T;
        hess.vals = {omega, omega};
        lognls::TauPath tp = lognls::integrate_tau(alpha0, beta0, lam, hess, 0, T, dt);
        return tp.tau;
      },
      py::arg("alpha0"), py::arg("beta0"), py::arg("lam"), py::arg("omega"), py::arg("T"),
      py::arg("dt"),
      "Width factor samples for a constant-curvature well, tau(0) = 1");
}
