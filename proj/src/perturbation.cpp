#include "odp/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "odp/error.hpp"

namespace odp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double angle_sum(const AngleHarmonics& h, double theta) {
  double s = 0.0;
  for (const auto& [m, amp] : h.terms) s += amp * std::sin(m * theta);
  return s;
}

Vec2 solve_superposition(const Vec2& p1, const Vec2& p2, const Vec2& x) {
  const double det = wronskian(p1, p2);
  return {(x.x * p2.y - x.y * p2.x) / det, (p1.x * x.y - p1.y * x.x) / det};
}

}  // namespace

double perturbation_value(const Perturbation& h, double theta, double t) {
  if (const auto* a = std::get_if<AngleHarmonics>(&h)) return angle_sum(*a, theta);
  const auto& tone = std::get<ExternalTone>(h);
  return tone.amplitude * std::cos(tone.omega2 * t);
}

std::vector<SpectralPeak> spectral_peaks(const std::vector<double>& x, double dt,
                                         double max_frequency, int count) {
  const std::size_t n = x.size();
  if (n < 8 || !(dt > 0.0)) return {};

  // Least-squares linear detrend, then Hann window.
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i);
    st += ti;
    sx += x[i];
    stt += ti * ti;
    stx += ti * x[i];
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * stx - st * sx) / (nn * stt - st * st);
  const double icpt = (sx - slope * st) / nn;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(kTwoPi * i / (nn - 1.0));
    y[i] = w * (x[i] - icpt - slope * static_cast<double>(i));
  }

  const double dnu = kTwoPi / (nn * dt);
  const auto bins = static_cast<std::size_t>(
      std::min(std::floor(max_frequency / dnu), std::floor(nn / 2.0)));
  std::vector<double> mag(bins + 2, 0.0);
  for (std::size_t k = 1; k <= bins + 1 && k < n; ++k) {
    const std::complex<double> step = std::polar(1.0, -kTwoPi * k / nn);
    std::complex<double> ph = 1.0, acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += y[i] * ph;
      ph *= step;
      if ((i & 1023) == 1023) ph /= std::abs(ph);
    }
    mag[k] = std::abs(acc) * 2.0 / nn;
  }

  std::vector<SpectralPeak> peaks;
  for (std::size_t k = 1; k <= bins; ++k) {
    if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1]) {
      // Parabolic interpolation on the log magnitude for a sub-bin frequency.
      double shift = 0.0;
      if (mag[k - 1] > 0.0 && mag[k + 1] > 0.0) {
        const double a = std::log(mag[k - 1]), b = std::log(mag[k]), c = std::log(mag[k + 1]);
        const double den = a - 2.0 * b + c;
        if (den < 0.0) shift = 0.5 * (a - c) / den;
      }
      peaks.push_back({(static_cast<double>(k) + shift) * dnu, mag[k]});
    }
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const SpectralPeak& p, const SpectralPeak& q) { return p.magnitude > q.magnitude; });
  if (peaks.size() > static_cast<std::size_t>(std::max(count, 0))) peaks.resize(count);
  return peaks;
}

std::vector<double> extract_slow_phase(const FloquetAnalysis& fa, const std::vector<double>& t,
                                       const std::vector<double>& theta) {
  if (t.size() != theta.size()) throw InvalidParameter("time and angle series differ in length");
  const auto& b1 = fa.branch(1);
  const auto& b2 = fa.branch(2);
  std::vector<double> psi(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Vec2 x{std::sin(0.5 * theta[i]), std::cos(0.5 * theta[i])};
    const Vec2 cs = solve_superposition(b1.periodic_part(t[i]), b2.periodic_part(t[i]), x);
    double p = 2.0 * std::atan2(cs.y, cs.x);
    if (i > 0) p = psi[i - 1] + std::remainder(p - psi[i - 1], kTwoPi);
    psi[i] = p;
  }
  return psi;
}

PerturbedRun integrate_perturbed(const DriveSpec& drive, const Perturbation& h, double eps,
                                 double theta0, int periods, const IntegratorConfig& cfg,
                                 const PerturbedOptions& opts) {
  if (!(eps >= 0.0 && eps <= 0.2)) throw InvalidParameter("eps must lie in [0, 0.2]");
  if (periods < 1) throw InvalidParameter("at least one recorded period is required");
  if (opts.transient_periods < 0 || opts.samples_per_period < 2) {
    throw InvalidParameter("invalid sampling options");
  }
  const double T = drive.period();
  auto rhs = [&](double t, const State<2>& y) -> State<2> {
    const auto d = drive.eval(t);
    const double dth = d.F - d.G * std::sin(y[0]) + eps * perturbation_value(h, y[0], t);
    return {dth, y[0]};
  };
  const double t_rec = opts.transient_periods * T;
  double th = theta0;
  if (opts.transient_periods > 0) th = integrate<2>(rhs, 0.0, State<2>{theta0, 0.0}, t_rec, cfg)[0];
  const auto traj = integrate_dense<2>(rhs, t_rec, State<2>{th, 0.0}, t_rec + periods * T, cfg);

  PerturbedRun run;
  const int n = periods * opts.samples_per_period;
  run.t.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = t_rec + T * i / opts.samples_per_period;
    run.t.push_back(t);
    run.theta.push_back(traj(t)[0]);
  }
  for (int k = 0; k < periods; ++k) {
    const double a = traj(t_rec + k * T)[1];
    const double b = traj(t_rec + (k + 1) * T)[1];
    run.period_mean.push_back((b - a) / T);
  }
  run.symmetry_deviation = std::abs(std::remainder(run.period_mean.back(), kPi));

  const double dt = T / opts.samples_per_period;
  const double fmax = opts.max_frequency > 0.0 ? opts.max_frequency : 4.0 * drive.omega();
  if (opts.extract_slow_phase) {
    const FloquetAnalysis fa(drive, cfg);
    run.psi = extract_slow_phase(fa, run.t, run.theta);
    run.peaks = spectral_peaks(run.psi, dt, fmax, opts.peak_count);
  } else {
    std::vector<double> s(run.theta.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(run.theta[i]);
    run.peaks = spectral_peaks(s, dt, fmax, opts.peak_count);
  }
  return run;
}

double PerturbationModel::rhs(double psi) const {
  double s = -mu * std::sin(psi);
  for (std::size_t k = 0; k < a.size(); ++k) s += eps * a[k] * std::sin((k + 1.0) * psi);
  return s;
}

PerturbationModel averaged_coefficients(const FloquetAnalysis& fa, const AngleHarmonics& h,
                                        int k_max, double eps, int t_grid, int psi_grid) {
  if (k_max < 1) throw InvalidParameter("k_max must be at least 1");
  if (t_grid < 8 || t_grid % 2 != 0) throw InvalidParameter("time grid must be even and >= 8");
  if (psi_grid < 2 * k_max + 2) throw InvalidParameter("psi grid too coarse for k_max");
  const double T = fa.half().period;
  std::vector<Vec2> p1(t_grid), p2(t_grid);
  for (int j = 0; j < t_grid; ++j) {
    const double t = T * j / t_grid;
    p1[j] = fa.branch(1).periodic_part(t);
    p2[j] = fa.branch(2).periodic_part(t);
  }
  std::vector<double> avg(psi_grid), psi(psi_grid);
  for (int l = 0; l < psi_grid; ++l) {
    psi[l] = -kPi + kTwoPi * l / psi_grid;
    const double c = std::cos(0.5 * psi[l]), s = std::sin(0.5 * psi[l]);
    double acc = 0.0;
    for (int j = 0; j < t_grid; ++j) {
      const Vec2 xi = p1[j] * c + p2[j] * s;
      const double th = 2.0 * std::atan2(xi.x, xi.y);
      acc += xi.dot(xi) * angle_sum(h, th);
    }
    avg[l] = acc / t_grid;
  }

  PerturbationModel m;
  m.mu = 2.0 * fa.exps().b0;
  m.eps = eps;
  m.a.assign(k_max, 0.0);
  m.cos_residual.assign(k_max + 1, 0.0);
  for (int l = 0; l < psi_grid; ++l) {
    m.cos_residual[0] -= avg[l] / psi_grid;
    for (int k = 1; k <= k_max; ++k) {
      m.a[k - 1] -= 2.0 * avg[l] * std::sin(k * psi[l]) / psi_grid;
      m.cos_residual[k] -= 2.0 * avg[l] * std::cos(k * psi[l]) / psi_grid;
    }
  }
  return m;
}

PerturbationModel averaged_coefficients(const DriveSpec& drive, const AngleHarmonics& h,
                                        int k_max, double eps, const IntegratorConfig& cfg) {
  return averaged_coefficients(FloquetAnalysis(drive, cfg), h, k_max, eps);
}

namespace {

// p(x) with sin(psi) p(cos psi) = -mu sin psi + eps sum a_k sin k psi (Chebyshev U).
double reduced(double mu, const std::vector<double>& a, double eps, double x) {
  double s = -mu, u_prev = 0.0, u = 1.0;
  for (double ak : a) {
    s += eps * ak * u;
    const double next = 2.0 * x * u - u_prev;
    u_prev = u;
    u = next;
  }
  return s;
}

double slope_at(double mu, const std::vector<double>& a, double eps, double psi) {
  double s = -mu * std::cos(psi);
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += eps * a[k] * (k + 1.0) * std::cos((k + 1.0) * psi);
  }
  return s;
}

}  // namespace

std::vector<Equilibrium> psirat_equilibria(double mu, const std::vector<double>& a, double eps) {
  if (!std::isfinite(mu) || !std::isfinite(eps)) throw InvalidParameter("non-finite input");
  std::vector<double> psis{0.0, kPi};
  constexpr int kScan = 4096;
  auto p = [&](double x) { return reduced(mu, a, eps, x); };
  double x_prev = -1.0, p_prev = p(-1.0);
  for (int i = 1; i <= kScan; ++i) {
    const double x = -1.0 + 2.0 * i / kScan;
    const double pv = p(x);
    double root = std::nan("");
    if (pv == 0.0 && i < kScan) {
      root = x;
    } else if (p_prev != 0.0 && pv != 0.0 && (pv > 0.0) != (p_prev > 0.0)) {
      double lo = x_prev, hi = x, flo = p_prev;
      for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
    }
    if (std::isfinite(root) && std::abs(root) < 1.0 - 1e-12) {
      const double ps = std::acos(root);
      psis.push_back(ps);
      psis.push_back(-ps);
    }
    x_prev = x;
    p_prev = pv;
  }
  std::sort(psis.begin(), psis.end());
  std::vector<Equilibrium> out;
  for (double ps : psis) {
    Equilibrium e;
    e.psi = ps;
    e.slope = slope_at(mu, a, eps, ps);
    e.stable = e.slope < 0.0;
    out.push_back(e);
  }
  return out;
}

PitchforkPoints pitchfork_points(const std::vector<double>& a, double eps) {
  PitchforkPoints pp;
  double third_zero = 0.0, third_pi = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double k = i + 1.0;
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^k
    pp.mu_at_zero += eps * k * a[i];
    pp.mu_at_pi -= eps * sign * k * a[i];
    third_zero -= eps * k * k * k * a[i];
    third_pi -= eps * sign * k * k * k * a[i];
  }
  // Third derivative of the right-hand side at the base point, evaluated at the pitchfork.
  third_zero += pp.mu_at_zero;
  third_pi -= pp.mu_at_pi;
  pp.supercritical_at_zero = third_zero < 0.0;
  pp.supercritical_at_pi = third_pi < 0.0;
  return pp;
}

}  // namespace odp
