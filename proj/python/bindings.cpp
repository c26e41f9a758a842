#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "odp/asymptotic.hpp"
#include "odp/drive.hpp"
#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/io.hpp"
#include "odp/josephson.hpp"
#include "odp/odecore.hpp"
#include "odp/specfun.hpp"
#include "odp/superlattice.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

odp::IntegratorConfig ode_config(double rtol, double atol) {
  odp::IntegratorConfig cfg;
  cfg.rel_tol = rtol;
  cfg.abs_tol = atol;
  return cfg;
}

py::dict rectification_dict(const odp::Rectification& r) {
  py::list members;
  for (const auto& m : r.members) {
    members.append(py::dict("v0"_a = m.v0, "w0"_a = m.w0, "v_dc"_a = m.v_dc, "u_dc"_a = m.u_dc,
                            "n_guess"_a = m.n_guess, "converged"_a = m.converged));
  }
  return py::dict("v_dc"_a = r.v_dc, "u_dc"_a = r.u_dc, "n_guess"_a = r.n_guess,
                  "broken"_a = r.broken, "status"_a = odp::status_name(r.status),
                  "members"_a = members);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Overdamped driven pendulum: exact stability, asymptotics and applications";
  m.attr("__version__") = odp::version();

  auto base = py::register_exception<odp::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<odp::InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<odp::IntegrationError>(m, "IntegrationError", base.ptr());
  py::register_exception<odp::DegenerateError>(m, "DegenerateError", base.ptr());
  py::register_exception<odp::AccuracyError>(m, "AccuracyError", base.ptr());
  py::register_exception<odp::TopologyError>(m, "TopologyError", base.ptr());
  py::register_exception<odp::ConsistencyError>(m, "ConsistencyError", base.ptr());
  py::register_exception<odp::PoleProximityError>(m, "PoleProximityError", base.ptr());

  py::class_<odp::Harmonic>(m, "Harmonic")
      .def(py::init([](double a, int k, double ph) { return odp::Harmonic{a, k, ph}; }),
           "amplitude"_a, "index"_a, "phase"_a = 0.0)
      .def_readonly("amplitude", &odp::Harmonic::amplitude)
      .def_readonly("index", &odp::Harmonic::index)
      .def_readonly("phase", &odp::Harmonic::phase);

  py::class_<odp::DriveSpec>(m, "Drive")
      .def_static("make", &odp::DriveSpec::make, "omega"_a, "F"_a, "G"_a)
      .def_static("sinusoidal", &odp::DriveSpec::sinusoidal, "f"_a, "omega"_a)
      .def_property_readonly("omega", &odp::DriveSpec::omega)
      .def_property_readonly("period", &odp::DriveSpec::period)
      .def("eval", [](const odp::DriveSpec& d, double t) {
        const auto v = d.eval(t);
        return py::make_tuple(v.F, v.G);
      })
      .def("check_symmetry", &odp::DriveSpec::check_symmetry, "grid_points"_a = 256)
      .def("scaled", &odp::DriveSpec::scaled)
      .def("to_json", [](const odp::DriveSpec& d) { return d.to_json().dump(); });

  m.def("half_monodromy_trace",
        [](const odp::DriveSpec& d, double rtol, double atol) {
          return odp::half_monodromy(d, ode_config(rtol, atol)).trace;
        },
        "drive"_a, "rtol"_a = 1e-10, "atol"_a = 1e-12);
  m.def("monodromy_report",
        [](const odp::DriveSpec& d, double rtol, double atol) {
          const auto r = odp::monodromy_report(d, ode_config(rtol, atol));
          return py::dict("trace"_a = r.half.trace, "det"_a = r.half.det(), "b0"_a = r.b0,
                          "lyapunov"_a = r.lyapunov, "rotation_n"_a = r.rotation_n,
                          "avg_theta"_a = r.avg_theta, "critical"_a = r.critical,
                          "warnings"_a = r.warnings);
        },
        "drive"_a, "rtol"_a = 1e-10, "atol"_a = 1e-12);
  m.def("avg_cos",
        [](const odp::DriveSpec& d, double rtol, double atol) {
          return odp::avg_cos(d, ode_config(rtol, atol));
        },
        "drive"_a, "rtol"_a = 1e-10, "atol"_a = 1e-12);
  m.def("periodic_solutions",
        [](const odp::DriveSpec& d, int samples) {
          const auto s = odp::periodic_solutions(d, {}, samples);
          return py::dict("t"_a = s.t, "theta1"_a = s.theta[0], "theta2"_a = s.theta[1],
                          "stable"_a = s.stable, "b0"_a = s.b0);
        },
        "drive"_a, "samples"_a = 512);
  m.def("fixed_points",
        [](const odp::DriveSpec& d) {
          const auto fp = odp::stroboscopic_fixed_points(d);
          return py::dict("all_fixed"_a = fp.all_fixed, "theta_star"_a = fp.theta_star,
                          "stable"_a = fp.stable, "residual"_a = fp.residual,
                          "trace"_a = fp.trace, "b0"_a = fp.b0);
        },
        "drive"_a);
  m.def("critical_amplitudes",
        [](double omega, double f_lo, double f_hi, int workers) {
          odp::CriticalScan scan;
          scan.workers = workers;
          return odp::critical_amplitudes(omega, f_lo, f_hi, {}, scan);
        },
        "omega"_a, "f_lo"_a, "f_hi"_a, "workers"_a = 1);
  m.def("critical_amplitudes_by",
        [](const std::string& method, double omega, double f_lo, double f_hi, int workers) {
          return odp::critical_amplitudes_by(odp::parse_method(method), omega, f_lo, f_hi, 0,
                                             1e-8, workers);
        },
        "method"_a, "omega"_a, "f_lo"_a, "f_hi"_a, "workers"_a = 1);
  m.def("bifurcation_sweep",
        [](double omega, double f_lo, double f_hi, int steps, int workers) {
          py::list out;
          for (const auto& r : odp::bifurcation_sweep(omega, f_lo, f_hi, steps, {}, workers)) {
            out.append(py::dict("f"_a = r.f, "theta_star"_a = r.theta_star,
                                "stability"_a = r.stability, "trace"_a = r.trace,
                                "b0"_a = r.b0));
          }
          return out;
        },
        "omega"_a, "f_lo"_a, "f_hi"_a, "steps"_a, "workers"_a = 1);

  m.def("elliptic_E", &odp::elliptic_E, "m"_a);
  m.def("mathieu_b", [](int k, double q) { return odp::mathieu_b(k, q); }, "k"_a, "q"_a);
  m.def("bessel_j0_root", &odp::bessel_j0_root, "k"_a);
  m.def("mathieu_trace", [](double f, double w) { return odp::mathieu_trace(f, w); }, "f"_a,
        "omega"_a);
  m.def("elliptic_trace", [](double f, double w) { return odp::elliptic_trace(f, w).trace; },
        "f"_a, "omega"_a);
  m.def("wkb_trace",
        [](const odp::DriveSpec& shape, double lambda) {
          return odp::wkb_half_monodromy(shape, lambda).trace;
        },
        "shape"_a, "lambda_"_a);
  m.def("wkb_ladder",
        [](const odp::DriveSpec& shape, const std::vector<double>& lambdas) {
          py::list out;
          for (const auto& c : odp::wkb_ladder(shape, lambdas)) {
            out.append(py::dict("lambda"_a = c.lambda, "exact"_a = c.exact, "wkb"_a = c.wkb,
                                "error"_a = c.error));
          }
          return out;
        },
        "shape"_a, "lambdas"_a);

  m.def("selfconsistent_K",
        [](double u0, double Omega, double gamma, int workers) {
          odp::KScan scan;
          scan.workers = workers;
          py::list out;
          for (const auto& r : odp::selfconsistent_K({u0, Omega, gamma, -1.0}, {}, scan)) {
            out.append(py::dict("K"_a = r.K, "A"_a = r.A, "n"_a = r.n,
                                "boundary"_a = r.boundary));
          }
          return out;
        },
        "u0"_a, "Omega"_a, "gamma"_a = 0.2, "workers"_a = 1);
  m.def("detect_rectification",
        [](double u0, double Omega, double gamma, int ensemble, int workers) {
          odp::RectifyConfig cfg;
          cfg.ensemble = ensemble;
          cfg.workers = workers;
          return rectification_dict(odp::detect_rectification({u0, Omega, gamma, -1.0}, cfg));
        },
        "u0"_a, "Omega"_a, "gamma"_a = 0.2, "ensemble"_a = 8, "workers"_a = 1);
  m.def("branch_map",
        [](double gamma, const std::vector<double>& f_grid, const std::vector<double>& w_grid,
           int workers) {
          py::list out;
          for (const auto& b : odp::branch_map(gamma, f_grid, w_grid, {}, workers)) {
            out.append(py::dict("f"_a = b.f, "omega"_a = b.omega, "A"_a = b.A, "n"_a = b.n,
                                "u0"_a = b.u0, "Omega"_a = b.Omega, "s"_a = b.s));
          }
          return out;
        },
        "gamma"_a, "f_grid"_a, "omega_grid"_a, "workers"_a = 1);

  m.def("absorption_series",
        [](double f, double omega, const std::vector<double>& Omegas, double eps) {
          const auto tables = odp::fourier_tables(f, omega);
          return odp::profile_series(tables, Omegas, eps);
        },
        "f"_a, "omega"_a, "Omegas"_a, "eps"_a = 1e-3);
  m.def("absorption_direct",
        [](double f, double omega, double Omega, double eps) {
          const auto v = odp::absorption_direct(f, omega, Omega, eps);
          return py::dict("a_jj"_a = v.a_jj, "half_difference"_a = v.half_difference,
                          "window"_a = v.window, "settled"_a = v.settled);
        },
        "f"_a, "omega"_a, "Omega"_a, "eps"_a = 1e-3);
  py::class_<odp::ProfileSample>(m, "ProfileSample")
      .def_readonly("Omega", &odp::ProfileSample::Omega)
      .def_readonly("a_jj", &odp::ProfileSample::a_jj);
  py::class_<odp::AbsorptionProfile>(m, "AbsorptionProfile")
      .def_readonly("f", &odp::AbsorptionProfile::f)
      .def_readonly("omega", &odp::AbsorptionProfile::omega)
      .def_readonly("eps", &odp::AbsorptionProfile::eps)
      .def_readonly("method", &odp::AbsorptionProfile::method)
      .def_readonly("samples", &odp::AbsorptionProfile::samples);
  m.def("probe_grid", &odp::probe_grid, "omega"_a, "Omega_max"_a, "per_harmonic"_a);
  m.def("gain_scan",
        [](const std::vector<double>& f_grid, const std::vector<double>& w_grid,
           int per_harmonic, int workers) {
          odp::GainScanOptions opts;
          opts.per_harmonic = per_harmonic;
          opts.workers = workers;
          py::list out;
          for (const auto& g : odp::gain_scan(f_grid, w_grid, {}, opts)) {
            out.append(py::dict("f"_a = g.f, "omega"_a = g.omega, "min_a"_a = g.min_a,
                                "beta"_a = g.beta, "gain"_a = g.gain, "critical"_a = g.critical,
                                "nearest_critical_f"_a = g.nearest_critical_f));
          }
          return out;
        },
        "f_grid"_a, "omega_grid"_a, "per_harmonic"_a = 200, "workers"_a = 1);
}
