// Acceptance suite: one PASS/FAIL line per criterion.
//   odp_acceptance            run all criteria
//   odp_acceptance --only N   run criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "odp/asymptotic.hpp"
#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/josephson.hpp"
#include "odp/perturbation.hpp"
#include "odp/specfun.hpp"
#include "odp/superlattice.hpp"

using namespace odp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double f_max_for(double omega, int count) { return 1.5 + omega * (3.2 * count + 2.0); }

std::vector<double> first_numeric(double omega, int count) {
  auto fs = critical_amplitudes(omega, 1e-3, f_max_for(omega, count), {}, {0, 1e-9, 1});
  if (static_cast<int>(fs.size()) > count) fs.resize(count);
  return fs;
}

std::vector<double> first_by(TraceMethod m, double omega, int count) {
  auto fs = critical_amplitudes_by(m, omega, 1e-3, f_max_for(omega, count));
  if (static_cast<int>(fs.size()) > count) fs.resize(count);
  return fs;
}

// Largest relative error of an approximation over the first `count` branches; infinity when a
// branch is missing.
double worst_error(TraceMethod m, const std::vector<double>& omegas, int count, std::string& where) {
  double worst = 0.0;
  for (double w : omegas) {
    const auto ex = first_numeric(w, count);
    const auto ap = first_by(m, w, count);
    if (ex.size() < static_cast<std::size_t>(count) || ap.size() < ex.size()) {
      where = fmt("omega=%g: missing branch", w);
      return INFINITY;
    }
    for (std::size_t k = 0; k < ex.size(); ++k) {
      const double e = std::abs(ap[k] - ex[k]) / ex[k];
      if (e > worst) {
        worst = e;
        where = fmt("omega=%g k=%zu f=%.6f vs %.6f", w, k + 1, ap[k], ex[k]);
      }
    }
  }
  return worst;
}

Outcome criterion1() {
  const auto fs = critical_amplitudes(0.3, 0.5, 3.2, {}, {0, 1e-9, 1});
  const double ref[3] = {1.356, 2.118, 2.956};
  bool ok = fs.size() == 3;
  for (std::size_t k = 0; ok && k < 3; ++k) ok = std::abs(fs[k] - ref[k]) <= 5e-3;
  std::string d = "roots";
  for (double f : fs) d += fmt(" %.6f", f);
  return {ok, d};
}

Outcome criterion2() {
  std::string where;
  const double e = worst_error(TraceMethod::Mathieu, {0.1, 0.2, 0.3}, 5, where);
  return {e <= 0.02, fmt("max rel error %.4f (%s), threshold 0.02", e, where.c_str())};
}

Outcome criterion3() {
  std::string where;
  const double e = worst_error(TraceMethod::Elliptic, {0.1, 0.2, 0.3}, 5, where);
  double ident = 0.0;
  for (double w : {0.1, 0.2, 0.3}) {
    for (double f : {1.2, 1.5, 2.5, 3.5}) {
      const auto plan = build_plan(DriveSpec::sinusoidal(f, w), 1.0);
      const auto E = elliptic_E(f * f);
      ident = std::max({ident, std::abs(E.real() / w - (plan.kappa0() + plan.kappa1())),
                        std::abs(E.imag() / w - plan.omega1())});
    }
  }
  return {e <= 0.03 && ident <= 1e-6,
          fmt("max rel error %.4f (%s); quadrature identity residual %.2e", e, where.c_str(),
              ident)};
}

Outcome criterion4() {
  const auto hi = critical_amplitudes(3.0, 1.0, 10.0);
  const double j0 = bessel_j0_root(1);
  const double ratio = hi.empty() ? INFINITY : hi[0] / 3.0 / j0;
  std::string wm, wb;
  const double em = worst_error(TraceMethod::Mathieu, {0.3}, 3, wm);
  const double eb = worst_error(TraceMethod::Bessel, {0.3}, 3, wb);
  return {std::abs(ratio - 1.0) <= 0.05 && eb > em,
          fmt("omega=3: f/omega / j01 = %.4f; omega=0.3 errors: bessel %.3f > mathieu %.3f", ratio,
              eb, em)};
}

Outcome criterion5() {
  std::mt19937_64 rng(20260415);
  std::uniform_real_distribution<double> amp(0.2, 2.0), g2(0.0, 0.5), om(0.3, 1.0),
      ph(0.0, 2 * std::numbers::pi);
  double cos_err = 0.0, det_err = 0.0, phase_err = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto d = DriveSpec::make(om(rng), {{amp(rng), 1, ph(rng)}, {0.3 * amp(rng), 3, ph(rng)}},
                                   {{1.0, 0, 0.0}, {g2(rng), 2, ph(rng)}});
    const auto h = half_monodromy(d);
    cos_err = std::max(cos_err, std::abs(avg_cos(d) - avg_cos_trajectory(d)));
    det_err = std::max(det_err, std::abs(h.det() + 1.0));
    for (double s : {0.25, 0.5, 0.8}) {
      const double tr = half_monodromy(d, {}, s * d.period()).trace;
      phase_err = std::max(phase_err, std::abs(tr - h.trace) / std::max(1.0, std::abs(h.trace)));
    }
  }
  return {cos_err <= 1e-6 && det_err <= 1e-8 && phase_err <= 1e-7,
          fmt("<G cos> vs 2|B0| %.2e, |det+1| %.2e, start-phase %.2e", cos_err, det_err,
              phase_err)};
}

Outcome criterion6() {
  const auto fs = critical_amplitudes(0.3, 2.9, 3.0, {}, {0, 1e-12, 1});
  if (fs.size() != 1) return {false, "critical point not found"};
  const double m = marginal_map_check(DriveSpec::sinusoidal(fs[0], 0.3), {}, 64);
  return {m <= 1e-3, fmt("f_c = %.10f, max |Pi(theta) - theta| = %.2e", fs[0], m)};
}

Outcome criterion7() {
  const auto pp = pitchfork_points({0.0, -1.0}, 0.1);
  const bool exact = std::abs(std::abs(pp.mu_at_zero) - 0.2) < 1e-12 &&
                     std::abs(std::abs(pp.mu_at_pi) - 0.2) < 1e-12 &&
                     pp.mu_at_zero * pp.mu_at_pi < 0.0;
  const auto fs = critical_amplitudes(0.3, 2.9, 3.0, {}, {0, 1e-9, 1});
  if (fs.size() != 1) return {false, "critical point not found"};
  const double fc = fs[0];
  const auto model = averaged_coefficients(DriveSpec::sinusoidal(fc + 1e-4, 0.3),
                                           AngleHarmonics{{{2, 1.0}}}, 4);
  const double h2 = model.a[1] < 0.0 ? -1.0 : 1.0;
  PerturbedOptions o;
  o.transient_periods = 80;
  o.samples_per_period = 16;
  o.extract_slow_phase = false;
  auto window = [&](double h) {
    double best = 0.0;
    for (double f = fc - 0.02; f <= fc + 0.02 + 1e-12; f += 0.0025) {
      for (double th0 : {-2.5, -1.0, 0.3, 1.5, 2.8}) {
        const auto r = integrate_perturbed(DriveSpec::sinusoidal(f, 0.3), AngleHarmonics{{{2, h}}},
                                           0.05, th0, 2, {}, o);
        best = std::max(best, r.symmetry_deviation);
      }
    }
    return best;
  };
  const double dev = window(h2);
  const double dev_plus = h2 > 0.0 ? dev : window(1.0);
  return {exact && dev > 0.05,
          fmt("pitchforks mu = %+.3g, %+.3g; a2[sin 2theta] = %.4f, h2 = %+g: max deviation "
              "%.3f rad (h2 = +1: %.3f)",
              pp.mu_at_zero, pp.mu_at_pi, model.a[1], h2, dev, dev_plus)};
}

Outcome criterion8() {
  const auto rows = wkb_ladder(DriveSpec::sinusoidal(1.2, 0.5), {5.0, 10.0, 20.0});
  const bool mono = rows[1].error < rows[0].error && rows[2].error < rows[1].error;
  const auto ex = first_numeric(0.1, 5);
  int bracketed = 0;
  for (double f : ex) {
    const double lo = trace_two_turning(build_plan(DriveSpec::sinusoidal(0.97 * f, 0.1), 1.0));
    const double hi = trace_two_turning(build_plan(DriveSpec::sinusoidal(1.03 * f, 0.1), 1.0));
    if ((lo > 0.0) != (hi > 0.0)) ++bracketed;
  }
  return {mono && bracketed == static_cast<int>(ex.size()) && ex.size() == 5,
          fmt("errors %.3e, %.3e, %.3e; closed form brackets %d/%zu criticals at omega=0.1",
              rows[0].error, rows[1].error, rows[2].error, bracketed, ex.size())};
}

Outcome criterion9() {
  const double eps = 1e-3;
  // (i)
  const auto t0 = fourier_tables(0.0, 0.5);
  double free_err = 0.0;
  for (double Om : {0.37, 1.0, 2.3}) {
    const double cf = eps * eps * Om * Om / (2.0 * (Om * Om + 1.0));
    free_err = std::max({free_err, std::abs(absorption_series(t0, Om, eps).a_jj - cf) / cf,
                         std::abs(absorption_direct(0.0, 0.5, Om, eps).a_jj - cf) / cf});
  }
  // (ii)
  const auto ta = fourier_tables(1.5, 0.149);
  const auto tb = fourier_tables(1.57, 0.13);
  const double conv = std::max(ta.convolution, tb.convolution);
  // (iii)
  const auto grid = probe_grid(0.13, 11.5 * 0.13, 400);
  const auto prof = profile_series(tb, grid, eps);
  int windows = 0, centred = 0;
  double min_a = INFINITY;
  for (std::size_t i = 0; i < prof.samples.size();) {
    min_a = std::min(min_a, prof.samples[i].a_jj);
    if (prof.samples[i].a_jj >= 0.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < prof.samples.size() && prof.samples[j].a_jj < 0.0) ++j;
    const double centre = 0.5 * (prof.samples[i].Omega + prof.samples[j - 1].Omega);
    const double k = std::max(1.0, std::round(centre / 0.26));
    ++windows;
    if (std::abs(centre - 2 * k * 0.13) <= 0.05 * 2 * k * 0.13) ++centred;
    i = j;
  }
  // (iv)
  double agree = 0.0;
  for (double Om : {0.7, 1.1, 1.45}) {
    const double s = absorption_series(ta, Om, eps).a_jj;
    const double d = absorption_direct(1.5, 0.149, Om, eps).a_jj;
    agree = std::max(agree, std::abs(s - d) / std::abs(s));
  }
  const bool ok = free_err <= 1e-6 && conv <= 1e-8 && centred >= 1 && agree <= 0.05;
  return {ok, fmt("(i) rel err %.2e (ii) convolution %.2e (iii) %d negative windows, %d centred, "
                  "min A/eps^2 %.3e (iv) series vs direct %.3f%%",
                  free_err, conv, windows, centred, min_a / (eps * eps), 100 * agree)};
}

std::vector<double> linspace(double a, double b, double step) {
  std::vector<double> v;
  for (int i = 0; a + i * step <= b + 1e-9; ++i) v.push_back(a + i * step);
  return v;
}

Outcome criterion10() {
  const auto map = branch_map(0.2, linspace(0.05, 8.0, 0.05), linspace(0.05, 1.0, 0.05));
  const auto ns = branch_indices(map);
  bool all = true;
  for (int n = 1; n <= 8; ++n) all = all && std::find(ns.begin(), ns.end(), n) != ns.end();
  auto cells = overlap_cells(map, 0.25, 0.1);
  std::stable_sort(cells.begin(), cells.end(),
                   [](const OverlapCell& a, const OverlapCell& b) { return a.n.size() > b.n.size(); });
  std::size_t roots = 0;
  OverlapCell where;
  for (std::size_t i = 0; i < std::min<std::size_t>(cells.size(), 5) && roots < 2; ++i) {
    roots = selfconsistent_K({cells[i].u0, cells[i].Omega, 0.2}).size();
    where = cells[i];
  }
  double broken_v = 0.0, broken_u0 = 0.0;
  for (double u0 : linspace(3.3, 3.7, 0.02)) {
    const auto r = detect_rectification({u0, 0.45, 0.2});
    for (const auto& m : r.members) {
      if (m.converged && std::abs(m.v_dc) > std::abs(broken_v)) {
        broken_v = m.v_dc;
        broken_u0 = u0;
      }
    }
  }
  double strong_v = 0.0;
  for (double Om : {0.2, 0.3, 0.45, 0.6, 0.8, 1.0}) {
    for (double u0 : linspace(0.5, 6.0, 0.25)) {
      for (const auto& m : detect_rectification({u0, Om, 0.5}).members) {
        strong_v = std::max(strong_v, std::abs(m.v_dc));
      }
    }
  }
  const bool ok = all && !cells.empty() && roots >= 2 && std::abs(broken_v) > 1e-3 &&
                  strong_v <= 1e-3;
  return {ok, fmt("branches 1..8 %s, %zu overlap cells, %zu K roots at (u0, Omega) = (%.3f, %.3f), "
                  "|<v>| = %.4f at u0 = %.2f (Gamma 0.2), max |<v>| = %.1e (Gamma 0.5)",
                  all ? "present" : "missing", cells.size(), roots, where.u0, where.Omega,
                  std::abs(broken_v), broken_u0, strong_v)};
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<std::pair<std::function<Outcome()>, double>> criteria{
      {criterion1, 60}, {criterion2, 120}, {criterion3, 0},  {criterion4, 0},
      {criterion5, 0},  {criterion6, 0},   {criterion7, 0},  {criterion8, 0},
      {criterion9, 300}, {criterion10, 600}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only && only != id) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].first();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double budget = criteria[i].second;
    if (budget > 0.0 && secs > budget) {
      out.pass = false;
      out.detail += fmt("; runtime over %.0f s budget", budget);
    }
    std::printf("criterion %d: %s  %s [%.1f s]\n", id, out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
