#include "odp/josephson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "odp/drive.hpp"
#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/odecore.hpp"
#include "odp/parallel.hpp"

namespace odp {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// c_k = (1/M) sum_j g_j exp(-2 pi i k j / M), k = -K..K.
std::vector<cplx> dft(const std::vector<double>& g, int K) {
  const std::size_t m = g.size();
  std::vector<cplx> tw(m);
  for (std::size_t j = 0; j < m; ++j) tw[j] = std::polar(1.0, -2.0 * kPi * j / m);
  std::vector<cplx> out(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    const long ml = static_cast<long>(m);
    const auto step = static_cast<std::size_t>(((k % ml) + ml) % ml);
    cplx s = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < m; ++j) {
      s += g[j] * tw[idx];
      idx += step;
      if (idx >= m) idx -= m;
    }
    out[k + K] = s / static_cast<double>(m);
  }
  return out;
}

double max_abs(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& c : v) s = std::max(s, std::abs(c));
  return s;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

std::complex<double> FourierTables::b(int k) const {
  return std::abs(k) <= K ? b_coef[k + K] : cplx{};
}

std::complex<double> FourierTables::d(int k) const {
  return std::abs(k) <= K ? d_coef[k + K] : cplx{};
}

FourierTables fourier_tables(double f, double omega, const IntegratorConfig& cfg,
                             const FourierOptions& opts) {
  if (!(omega > 0.0) || !(f >= 0.0)) throw InvalidParameter("need f >= 0 and omega > 0");
  if (opts.K < 2 || opts.max_K < opts.K) throw InvalidParameter("bad truncation settings");
  const FloquetAnalysis fa(DriveSpec::sinusoidal(f, omega), cfg);
  const auto& orbit = fa.stable();
  const double half = 0.5 * fa.half().period;
  const double beta = orbit.mean_gcos();
  const double beta_lin = 2.0 * std::abs(fa.exps().b0);
  const Vec2 q0 = fa.pair().init[fa.stable_branch() - 1];

  for (int K = opts.K;; K *= 2) {
    const int m = std::max(1024, 16 * K);
    std::vector<double> gp(m), gm(m), lp(m), lm(m);
    for (int j = 0; j < m; ++j) {
      const double t = half * j / m;
      const double c = orbit.gcos_integral(t) - beta * t;
      gp[j] = std::exp(c);
      gm[j] = std::exp(-c);
    }
    const auto lin = integrate_linear_sampled(fa.drive(), {q0.x, q0.y}, 0.0, half, m, cfg);
    const double n0 = q0.x * q0.x + q0.y * q0.y;
    for (int j = 0; j < m; ++j) {
      const auto& q = lin.q[j];
      const double v = (q.q1 * q.q1 + q.q2 * q.q2) / n0 * std::exp(-beta_lin * lin.t[j]);
      lp[j] = v;
      lm[j] = 1.0 / v;
    }

    FourierTables tab;
    tab.f = f;
    tab.omega = omega;
    tab.beta = beta;
    tab.K = K;
    tab.b_coef = dft(gp, K);
    tab.d_coef = dft(gm, K);
    const double sb = max_abs(tab.b_coef), sd = max_abs(tab.d_coef);
    tab.last_term = std::max({std::abs(tab.b(K)), std::abs(tab.b(-K))}) / sb;
    tab.last_term = std::max({tab.last_term, std::abs(tab.d(K)) / sd, std::abs(tab.d(-K)) / sd});
    for (int n = -K / 2; n <= K / 2; ++n) {
      cplx s = 0.0;
      for (int k = -K; k <= K; ++k) s += tab.b(n - k) * tab.d(k);
      tab.convolution = std::max(tab.convolution, std::abs(s - (n == 0 ? 1.0 : 0.0)));
    }
    if (tab.convolution > opts.convolution_tol || tab.last_term > opts.last_term_tol) {
      if (2 * K > opts.max_K) {
        throw AccuracyError("Fourier tables did not converge up to K = " + std::to_string(K),
                            std::max(tab.convolution, tab.last_term));
      }
      continue;
    }
    tab.cross_check = std::max(max_diff(tab.b_coef, dft(lp, K)) / sb,
                               max_diff(tab.d_coef, dft(lm, K)) / sd);
    if (tab.cross_check > opts.cross_tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "Fourier tables: orbit and linear-system routes differ by %.3g (f=%g, omega=%g)",
                    tab.cross_check, f, omega);
      throw ConsistencyError(buf);
    }
    return tab;
  }
}

SeriesValue absorption_series(const FourierTables& tables, double Omega, double eps) {
  if (!(Omega > 0.0)) throw InvalidParameter("probe frequency must be positive");
  const double o2 = Omega * Omega;
  cplx sum = 0.0;
  double size = 0.0;
  SeriesValue out;
  for (int k = -tables.K; k <= tables.K; ++k) {
    const cplx z{tables.beta, 2.0 * k * tables.omega};
    const cplx den = o2 + z * z;
    if (std::abs(den) < 1e-12) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "probe frequency %.12g sits on the pole k = %d", Omega, k);
      throw PoleProximityError(buf);
    }
    const cplx term = tables.b(k) * tables.d(-k) * o2 / den;
    sum += term;
    size += std::abs(term);
    if (std::abs(k) == tables.K) out.last_term += std::abs(term);
  }
  const double pre = 0.5 * eps * eps;
  out.a_jj = pre * sum.real();
  out.imag = pre * sum.imag();
  out.last_term *= pre;
  if (std::abs(out.imag) > 1e-10 * std::max(1.0, pre * size)) {
    throw ConsistencyError("absorption series has a non-negligible imaginary part");
  }
  return out;
}

DirectValue absorption_direct(double f, double omega, double Omega, double eps,
                              const DirectConfig& cfg) {
  if (!(omega > 0.0) || !(Omega > 0.0) || !(f >= 0.0)) {
    throw InvalidParameter("need f >= 0 and positive frequencies");
  }
  if (!(eps > 0.0) || eps > 1e-2) throw InvalidParameter("probe amplitude must lie in (0, 1e-2]");
  cfg.ode.validate();
  const auto drive = DriveSpec::sinusoidal(f, omega);
  const FloquetAnalysis fa(drive, cfg.ode);
  const double beta = 2.0 * std::abs(fa.exps().b0);
  const double T = drive.period();
  const double P = 2.0 * kPi / Omega;

  DirectValue out;
  double transient = std::max(cfg.transient_pump_periods * T, 20.0 / beta);
  if (transient > cfg.max_transient) {
    transient = cfg.max_transient;
    out.settled = false;
  }
  const double half_probes = std::ceil(0.5 * cfg.min_pump_periods * T / P);
  const double half_window = half_probes * P;
  out.window = 2.0 * half_window;

  // (theta_0, delta = theta_eps - theta_0, int delta' eps cos(Omega t))
  auto rhs = [&](double t, const State<3>& y) -> State<3> {
    const double probe = eps * std::cos(Omega * t);
    const double dsin = 2.0 * std::cos(y[0] + 0.5 * y[1]) * std::sin(0.5 * y[1]);
    const double dd = probe - dsin;
    return {f * std::sin(omega * t) - std::sin(y[0]), dd, dd * probe};
  };
  State<3> y{fa.stable().theta_star(), 0.0, 0.0};
  y = integrate<3>(rhs, 0.0, y, transient, cfg.ode);
  y[2] = 0.0;
  y = integrate<3>(rhs, transient, y, transient + half_window, cfg.ode);
  const double first = y[2];
  y = integrate<3>(rhs, transient + half_window, y, transient + out.window, cfg.ode);
  const double second = y[2] - first;
  out.a_jj = y[2] / out.window;
  out.half_difference = std::abs(first - second) / half_window;
  return out;
}

std::vector<double> probe_grid(double omega, double omega_max, int per_harmonic) {
  if (!(omega > 0.0) || !(omega_max > 0.0) || per_harmonic < 1) {
    throw InvalidParameter("bad probe grid");
  }
  const double step = 2.0 * omega / per_harmonic;
  std::vector<double> out;
  for (long j = 0;; ++j) {
    const double v = (j + 0.5) * step;
    if (v > omega_max) break;
    out.push_back(v);
  }
  return out;
}

AbsorptionProfile profile_series(const FourierTables& tables, const std::vector<double>& Omegas,
                                 double eps) {
  AbsorptionProfile p{tables.f, tables.omega, eps, "series", {}};
  for (double W : Omegas) p.samples.push_back({W, absorption_series(tables, W, eps).a_jj});
  return p;
}

AbsorptionProfile profile_direct(double f, double omega, const std::vector<double>& Omegas,
                                 double eps, const DirectConfig& cfg, int workers) {
  AbsorptionProfile p{f, omega, eps, "direct", {}};
  const auto vals = parallel_map(
      Omegas.size(), [&](std::size_t i) { return absorption_direct(f, omega, Omegas[i], eps, cfg); },
      workers);
  for (std::size_t i = 0; i < Omegas.size(); ++i) p.samples.push_back({Omegas[i], vals[i].a_jj});
  return p;
}

std::vector<GainPoint> gain_scan(const std::vector<double>& f_grid,
                                 const std::vector<double>& omega_grid,
                                 const IntegratorConfig& cfg, const GainScanOptions& opts) {
  for (double f : f_grid) {
    if (!(f > 0.0)) throw InvalidParameter("f grid must be positive");
  }
  for (double w : omega_grid) {
    if (!(w > 0.0)) throw InvalidParameter("omega grid must be positive");
  }
  if (f_grid.empty() || omega_grid.empty()) return {};
  const double f_hi = 1.1 * *std::max_element(f_grid.begin(), f_grid.end());
  CriticalScan cs;
  cs.f_tol = 1e-8;
  const auto criticals = parallel_map(
      omega_grid.size(),
      [&](std::size_t j) { return critical_amplitudes(omega_grid[j], 0.0, f_hi, cfg, cs); },
      opts.workers);

  const std::size_t nf = f_grid.size();
  return parallel_map(
      nf * omega_grid.size(),
      [&](std::size_t idx) {
        const std::size_t j = idx / nf;
        GainPoint g;
        g.f = f_grid[idx % nf];
        g.omega = omega_grid[j];
        g.nearest_critical_f = std::numeric_limits<double>::quiet_NaN();
        for (double c : criticals[j]) {
          if (std::isnan(g.nearest_critical_f) ||
              std::abs(c - g.f) < std::abs(g.nearest_critical_f - g.f)) {
            g.nearest_critical_f = c;
          }
        }
        try {
          const auto tab = fourier_tables(g.f, g.omega, cfg, opts.fourier);
          g.beta = tab.beta;
          g.min_a = std::numeric_limits<double>::infinity();
          for (double W : probe_grid(g.omega, opts.omega_max_multiple * g.omega,
                                     opts.per_harmonic)) {
            g.min_a = std::min(g.min_a, absorption_series(tab, W, 1.0).a_jj);
          }
          g.gain = g.min_a < 0.0;
        } catch (const Error&) {
          g.critical = true;
          g.min_a = std::numeric_limits<double>::quiet_NaN();
        }
        return g;
      },
      opts.workers);
}

double even_harmonic_fraction(double f, double omega, const IntegratorConfig& cfg,
                              int harmonics) {
  if (harmonics < 1) throw InvalidParameter("need at least one harmonic");
  const auto drive = DriveSpec::sinusoidal(f, omega);
  const FloquetAnalysis fa(drive, cfg);
  const auto& orbit = fa.stable();
  const double T = drive.period();
  const int m = std::max(2048, 8 * harmonics);
  std::vector<double> rate(m);
  for (int j = 0; j < m; ++j) {
    const double t = T * j / m;
    rate[j] = pendulum_rhs(drive, t, orbit.theta(t));
  }
  const auto c = dft(rate, harmonics);
  double even = 0.0, total = 0.0;
  for (int h = -harmonics; h <= harmonics; ++h) {
    const double pw = std::norm(c[h + harmonics]);
    total += pw;
    if (h % 2 == 0) even += pw;
  }
  return total > 0.0 ? even / total : 0.0;
}

void write_profile_csv(std::ostream& os, const AbsorptionProfile& p) {
  os << "Omega,A_JJ,f,omega,eps,method\n";
  char buf[256];
  for (const auto& s : p.samples) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.6g,%s\n", s.Omega, s.a_jj, p.f,
                  p.omega, p.eps, p.method.c_str());
    os << buf;
  }
}

void write_gain_csv(std::ostream& os, const std::vector<GainPoint>& pts) {
  os << "f,omega,min_A,gain,nearest_critical_f\n";
  char buf[192];
  for (const auto& g : pts) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%d,%.10g\n", g.f, g.omega, g.min_a,
                  g.gain ? 1 : 0, g.nearest_critical_f);
    os << buf;
  }
}

}  // namespace odp
