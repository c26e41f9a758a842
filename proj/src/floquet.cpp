#include "odp/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "odp/error.hpp"
#include "odp/odecore.hpp"
#include "odp/parallel.hpp"

namespace odp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double a) { return std::remainder(a, kTwoPi); }

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

HalfMonodromy half_monodromy(const DriveSpec& drive, const IntegratorConfig& cfg,
                             double start_phase) {
  const double T = drive.period();
  const double t0 = start_phase;
  const double t1 = start_phase + 0.5 * T;
  const auto c1 = integrate_linear(drive, {1.0, 0.0}, t0, t1, cfg);
  const auto c2 = integrate_linear(drive, {0.0, 1.0}, t0, t1, cfg);
  const Mat2 U = Mat2::from_columns({c1.q1, c1.q2}, {c2.q1, c2.q2});
  HalfMonodromy h;
  h.matrix = kReflect * U;
  h.trace = h.matrix.trace();
  h.period = T;
  return h;
}

Exponents exponents(const HalfMonodromy& half) {
  Exponents e;
  e.b0 = 2.0 / half.period * std::asinh(0.5 * half.trace);
  e.lyapunov = -2.0 * std::abs(e.b0);
  return e;
}

FloquetPair floquet_pair(const HalfMonodromy& half) {
  if (half.critical()) {
    throw DegenerateError(
        fmt("half-monodromy trace %.3g is at an exchange of stability; Floquet vectors are not "
            "separated (use stroboscopic_fixed_points or marginal_map_check there)",
            half.trace));
  }
  const Mat2& m = half.matrix;
  const double tr = half.trace;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - m.det()));
  const std::array<double, 2> mu{0.5 * tr + disc, 0.5 * tr - disc};

  FloquetPair p;
  for (int i = 0; i < 2; ++i) {
    const Vec2 a{m.a12, mu[i] - m.a11};
    const Vec2 b{mu[i] - m.a22, m.a21};
    Vec2 v = a.norm() >= b.norm() ? a : b;
    v = v * (1.0 / v.norm());
    p.init[i] = v;
    p.multiplier[i] = mu[i];
  }
  double w = wronskian(p.init[0], p.init[1]);
  if (w < 0.0) {
    p.init[1] = p.init[1] * -1.0;
    w = -w;
  }
  const double scale = 1.0 / std::sqrt(w);
  p.init[0] = p.init[0] * scale;
  p.init[1] = p.init[1] * scale;
  return p;
}

PeriodicBranch::PeriodicBranch(const DriveSpec& drive, int branch, const Vec2& floquet_init,
                               bool stable, const IntegratorConfig& cfg)
    : branch_(branch),
      stable_(stable),
      period_(drive.period()),
      theta_star_(2.0 * std::atan2(floquet_init.x, floquet_init.y)),
      norm0_(floquet_init.norm()) {
  auto rhs = [&drive](double t, const State<3>& y) -> State<3> {
    const auto d = drive.eval(t);
    const double c = std::cos(y[0]);
    return {d.F - d.G * std::sin(y[0]), d.G * c, y[0]};
  };
  const double T = period_;
  if (stable_) {
    orbit_ = integrate_dense<3>(rhs, 0.0, State<3>{theta_star_, 0.0, 0.0}, T, cfg);
    const auto end = orbit_(T);
    mean_gcos_ = end[1] / T;
    mean_theta_ = end[2] / T;
  } else {
    // The unstable solution attracts in reverse time.
    orbit_ = integrate_dense<3>(rhs, T, State<3>{theta_star_, 0.0, 0.0}, 0.0, cfg);
    const auto start = orbit_(0.0);
    theta_shift_ = kTwoPi * std::round((theta_star_ - start[0]) / kTwoPi);
    gcos_offset_ = start[1];
    mean_gcos_ = -start[1] / T;
    mean_theta_ = -start[2] / T + theta_shift_;
  }
}

double PeriodicBranch::wrap_time(double t, int& periods) const {
  const double k = std::floor(t / period_);
  periods = static_cast<int>(k);
  double r = t - k * period_;
  if (r >= period_) r -= period_;
  return r;
}

double PeriodicBranch::theta(double t) const {
  int k = 0;
  const double r = wrap_time(t, k);
  return orbit_(r)[0] + theta_shift_;
}

double PeriodicBranch::gcos_integral(double t) const { return orbit_(t)[1] - gcos_offset_; }

Vec2 PeriodicBranch::floquet(double t) const {
  const double th = orbit_(t)[0] + theta_shift_;
  const double amp = norm0_ * std::exp(0.5 * gcos_integral(t));
  return {amp * std::sin(0.5 * th), amp * std::cos(0.5 * th)};
}

Vec2 PeriodicBranch::periodic_part(double t) const {
  int k = 0;
  const double r = wrap_time(t, k);
  const auto y = orbit_(r);
  const double th = y[0] + theta_shift_;
  const double amp = norm0_ * std::exp(0.5 * (y[1] - gcos_offset_ - mean_gcos_ * r));
  return {amp * std::sin(0.5 * th), amp * std::cos(0.5 * th)};
}

FloquetAnalysis::FloquetAnalysis(const DriveSpec& drive, const IntegratorConfig& cfg)
    : drive_(drive), half_(half_monodromy(drive, cfg)) {
  exps_ = exponents(half_);
  pair_ = floquet_pair(half_);
  const bool first_stable = half_.trace > 0.0;
  auto dense = cfg;
  dense.dense_output = true;
  branches_.emplace_back(drive_, 1, pair_.init[0], first_stable, dense);
  branches_.emplace_back(drive_, 2, pair_.init[1], !first_stable, dense);
}

RotationIndex FloquetAnalysis::rotation_index(int branch_id) const {
  constexpr int kGrid = 2048;
  constexpr double kZero = 1e-9;
  const auto& br = branch(branch_id);
  const double T = half_.period;
  const double half_T = 0.5 * T;
  auto c = [&](double t) { return std::cos(0.5 * br.theta(t)); };

  RotationIndex out;
  std::vector<double> roots;
  if (std::abs(c(0.0)) < kZero) roots.push_back(0.0);

  double t_prev = 0.0;
  double c_prev = c(0.0);
  for (int j = 1; j <= kGrid; ++j) {
    const double t = half_T * j / kGrid;
    const double cv = c(t);
    if (std::abs(cv) < kZero) continue;
    if (std::abs(c_prev) >= kZero && (cv > 0.0) != (c_prev > 0.0)) {
      double lo = t_prev, hi = t, flo = c_prev;
      for (int it = 0; it < 60 && hi - lo > 1e-13 * T; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = c(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (root < half_T) roots.push_back(root);
    }
    t_prev = t;
    c_prev = cv;
  }
  out.n = static_cast<int>(roots.size());

  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i] - roots[i - 1] < T * 1e-6) {
      out.warnings.push_back(fmt("zeros at t=%.9g and t=%.9g are closer than T*1e-6; suspected "
                                 "non-simple root",
                                 roots[i - 1], roots[i]));
    }
  }

  // Simple-root precondition on F.
  const double scale = std::max(drive_.f_bound(), 1e-300);
  if (drive_.f_nontrivial()) {
    constexpr int kFGrid = 2048;
    double tp = 0.0, fp = drive_.eval(0.0).F;
    for (int j = 1; j <= kFGrid; ++j) {
      const double t = T * j / kFGrid;
      const double fv = drive_.eval(t).F;
      if (fp == 0.0 || (fv > 0.0) != (fp > 0.0)) {
        double lo = tp, hi = t;
        if (fp != 0.0) {
          for (int it = 0; it < 80 && hi - lo > 1e-14 * T; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((drive_.eval(mid).F > 0.0) == (fp > 0.0)) lo = mid; else hi = mid;
          }
        }
        const double root = fp == 0.0 ? tp : 0.5 * (lo + hi);
        if (std::abs(drive_.derivative(root).F) < 1e-8 * scale * drive_.omega()) {
          out.warnings.push_back(fmt("F has a non-simple zero near t=%.9g", root));
        }
      }
      tp = t;
      fp = fv;
    }
  }

  // Consequence check: <theta_i> = n pi (mod 2 pi).
  const double m = std::abs(std::remainder(br.mean_theta() - out.n * std::numbers::pi, kTwoPi));
  if (m > 1e-4) {
    out.warnings.push_back(fmt("rotation index parity disagrees with <theta> (offset %.3g rad)", m));
  }
  return out;
}

MonodromyReport monodromy_report(const DriveSpec& drive, const IntegratorConfig& cfg) {
  MonodromyReport r;
  r.half = half_monodromy(drive, cfg);
  const auto e = exponents(r.half);
  r.b0 = e.b0;
  r.lyapunov = e.lyapunov;
  r.critical = r.half.critical();
  if (r.critical) {
    r.warnings.push_back("exchange of stability: Floquet vectors and branches not resolved");
    return r;
  }
  const FloquetAnalysis fa(drive, cfg);
  r.floquet_init = fa.pair().init;
  for (int i = 0; i < 2; ++i) {
    auto ri = fa.rotation_index(i + 1);
    r.rotation_n[i] = ri.n;
    for (auto& w : ri.warnings) r.warnings.push_back(std::move(w));
    double a = std::fmod(fa.branch(i + 1).mean_theta(), kTwoPi);
    if (a < 0.0) a += kTwoPi;
    r.avg_theta[i] = a;
  }
  return r;
}

PeriodicSolutions periodic_solutions(const DriveSpec& drive, const IntegratorConfig& cfg,
                                     int samples) {
  if (samples < 2) throw InvalidParameter("periodic_solutions needs at least two samples");
  const FloquetAnalysis fa(drive, cfg);
  PeriodicSolutions out;
  out.b0 = fa.exps().b0;
  const double T = drive.period();
  for (int j = 0; j < samples; ++j) out.t.push_back(T * j / samples);
  for (int i = 0; i < 2; ++i) {
    const auto& br = fa.branch(i + 1);
    out.stable[i] = br.stable();
    for (double t : out.t) out.theta[i].push_back(br.theta(t));
  }
  return out;
}

RotationIndex rotation_index(const DriveSpec& drive, int branch, const IntegratorConfig& cfg) {
  if (branch != 1 && branch != 2) throw InvalidParameter("branch must be 1 or 2");
  return FloquetAnalysis(drive, cfg).rotation_index(branch);
}

double avg_cos(const DriveSpec& drive, const IntegratorConfig& cfg) {
  return 2.0 * std::abs(exponents(half_monodromy(drive, cfg)).b0);
}

double avg_cos_trajectory(const DriveSpec& drive, const IntegratorConfig& cfg, double theta0,
                          int max_transient_periods) {
  const double T = drive.period();
  const double b0 = std::abs(exponents(half_monodromy(drive, cfg)).b0);
  double periods = 20.0;
  if (b0 > 0.0) periods = std::max(periods, std::ceil(10.0 / b0 / T));
  periods = std::min(periods, static_cast<double>(std::max(20, max_transient_periods)));
  const double t_start = periods * T;
  auto rhs = [&drive](double t, const State<2>& y) -> State<2> {
    const auto d = drive.eval(t);
    return {d.F - d.G * std::sin(y[0]), d.G * std::cos(y[0])};
  };
  const double th = integrate<2>(rhs, 0.0, State<2>{theta0, 0.0}, t_start, cfg)[0];
  const auto end = integrate<2>(rhs, t_start, State<2>{th, 0.0}, t_start + T, cfg);
  return end[1] / T;
}

double stroboscopic_map(const DriveSpec& drive, double theta, const IntegratorConfig& cfg) {
  auto plain = cfg;
  plain.dense_output = false;
  return integrate_pendulum(drive, theta, 0.0, drive.period(), plain).theta_end;
}

double inverse_stroboscopic_map(const DriveSpec& drive, double theta,
                                const IntegratorConfig& cfg) {
  auto rhs = [&drive](double t, const State<1>& y) -> State<1> {
    return {pendulum_rhs(drive, t, y[0])};
  };
  return integrate<1>(rhs, drive.period(), State<1>{theta}, 0.0, cfg)[0];
}

FixedPoints stroboscopic_fixed_points(const DriveSpec& drive, const IntegratorConfig& cfg) {
  FixedPoints fp;
  const auto half = half_monodromy(drive, cfg);
  fp.trace = half.trace;
  fp.b0 = exponents(half).b0;
  if (half.critical()) {
    fp.all_fixed = true;
    fp.theta_star = {std::nan(""), std::nan("")};
    return fp;
  }
  const auto pair = floquet_pair(half);
  const bool first_stable = half.trace > 0.0;
  for (int i = 0; i < 2; ++i) {
    const double th = 2.0 * std::atan2(pair.init[i].x, pair.init[i].y);
    fp.theta_star[i] = wrap_pi(th);
    fp.stable[i] = (i == 0) == first_stable;
    const double image = fp.stable[i] ? stroboscopic_map(drive, th, cfg)
                                      : inverse_stroboscopic_map(drive, th, cfg);
    fp.residual[i] = circular_distance(image, th);
  }
  return fp;
}

std::vector<double> critical_amplitudes(double omega, double f_lo, double f_hi,
                                        const IntegratorConfig& cfg, const CriticalScan& scan) {
  if (!(omega > 0.0)) throw InvalidParameter("omega must be positive");
  if (!(f_hi > f_lo) || f_lo < 0.0 || !std::isfinite(f_hi)) {
    throw InvalidParameter("amplitude range must satisfy 0 <= f_lo < f_hi < inf");
  }
  if (!(scan.f_tol > 0.0)) throw InvalidParameter("bisection tolerance must be positive");
  const int steps = scan.scan_steps > 0
                        ? scan.scan_steps
                        : std::max(8, static_cast<int>(std::ceil((f_hi - f_lo) / (omega / 8.0))));
  auto trace_at = [&](double f) {
    return half_monodromy(DriveSpec::sinusoidal(f, omega), cfg).trace;
  };
  std::vector<double> fs(steps + 1);
  for (int i = 0; i <= steps; ++i) fs[i] = f_lo + (f_hi - f_lo) * i / steps;
  const auto tr = parallel_map(fs.size(), [&](std::size_t i) { return trace_at(fs[i]); },
                               scan.workers);

  struct Bracket {
    double lo, hi, tlo;
  };
  std::vector<Bracket> brackets;
  std::vector<double> exact;
  for (int i = 0; i < steps; ++i) {
    if (tr[i] == 0.0) {
      exact.push_back(fs[i]);
    } else if (tr[i + 1] != 0.0 && (tr[i] > 0.0) != (tr[i + 1] > 0.0)) {
      brackets.push_back({fs[i], fs[i + 1], tr[i]});
    }
  }
  if (tr[steps] == 0.0) exact.push_back(fs[steps]);

  auto roots = parallel_map(
      brackets.size(),
      [&](std::size_t b) {
        double lo = brackets[b].lo, hi = brackets[b].hi, tlo = brackets[b].tlo;
        while (hi - lo > scan.f_tol) {
          const double mid = 0.5 * (lo + hi);
          const double tm = trace_at(mid);
          if (tm == 0.0) return mid;
          if ((tm > 0.0) == (tlo > 0.0)) {
            lo = mid;
            tlo = tm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      },
      scan.workers);
  roots.insert(roots.end(), exact.begin(), exact.end());
  std::sort(roots.begin(), roots.end());
  return roots;
}

double marginal_map_check(const DriveSpec& drive, const IntegratorConfig& cfg, int grid) {
  if (grid < 1) throw InvalidParameter("theta grid must be non-empty");
  double worst = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double th = -std::numbers::pi + kTwoPi * j / grid;
    worst = std::max(worst, circular_distance(stroboscopic_map(drive, th, cfg), th));
  }
  return worst;
}

}  // namespace odp
