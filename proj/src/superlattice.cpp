#include "odp/superlattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <limits>
#include <set>

#include "odp/drive.hpp"
#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/odecore.hpp"
#include "odp/parallel.hpp"
#include "odp/roots.hpp"

namespace odp {

namespace {

constexpr double kPi = std::numbers::pi;

// (v, w, int v, int u)
auto balance_rhs(const SlParams& p) {
  return [&p](double t, const State<4>& y) -> State<4> {
    const double u = balance_field(p, t, y[0]);
    return {-u * y[1] - p.gamma * y[0], u * y[0] - p.gamma * (y[1] - p.w_eq), y[0], u};
  };
}

double whole_periods(double span, double period) {
  return std::ceil(span / period - 1e-9) * period;
}

}  // namespace

double SlParams::period() const { return 2.0 * kPi / Omega; }

void SlParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidParameter("Gamma must be positive");
  if (!(u0 >= 0.0) || !std::isfinite(u0)) throw InvalidParameter("u0 must be non-negative");
  if (!(Omega > 0.0) || !std::isfinite(Omega)) throw InvalidParameter("Omega must be positive");
  if (w_eq != -1.0) throw InvalidParameter("w_eq is fixed to -1");
}

double balance_field(const SlParams& p, double t, double v) {
  const double incident = -p.u0 * std::cos(p.Omega * t);
  return p.gamma == 0.0 ? incident : incident - v / p.gamma;
}

BalanceRun integrate_balance(const SlParams& p, double v0, double w0, double t0, double span,
                             const IntegratorConfig& cfg, int samples_per_period) {
  if (p.gamma != 0.0) p.validate();
  else if (!(p.Omega > 0.0) || !(p.u0 >= 0.0)) throw InvalidParameter("bad drive parameters");
  if (v0 * v0 + w0 * w0 > 1.0 + 1e-12) {
    throw InvalidParameter("initial (v, w) must lie inside the unit disk");
  }
  if (!(span > 0.0)) throw InvalidParameter("span must be positive");
  cfg.validate();
  const auto rhs = balance_rhs(p);
  BalanceRun run;
  const State<4> y0{v0, w0, 0.0, 0.0};
  if (!cfg.dense_output) {
    const auto y = integrate<4>(rhs, t0, y0, t0 + span, cfg);
    run.v_end = y[0];
    run.w_end = y[1];
    return run;
  }
  const auto traj = integrate_dense<4>(rhs, t0, y0, t0 + span, cfg);
  const int count =
      std::max(1, static_cast<int>(std::ceil(span / p.period() * samples_per_period)));
  for (int i = 0; i <= count; ++i) {
    const double t = t0 + span * i / count;
    const auto y = traj(t);
    run.t.push_back(t);
    run.v.push_back(y[0]);
    run.w.push_back(y[1]);
  }
  run.v_end = run.v.back();
  run.w_end = run.w.back();
  return run;
}

const char* status_name(RectifyStatus s) {
  switch (s) {
    case RectifyStatus::Symmetric: return "symmetric";
    case RectifyStatus::Broken: return "broken";
    case RectifyStatus::Undecided: return "undecided";
  }
  return "?";
}

namespace {

// Passages of theta = atan2(-v, -w) through pi over one period, halved.
int count_half_rotations(const SlParams& p, const State<4>& y0, double t0,
                         const IntegratorConfig& cfg) {
  const auto traj = integrate_dense<4>(balance_rhs(p), t0, y0, t0 + p.period(), cfg);
  constexpr int kSamples = 1024;
  int crossings = 0;
  double vprev = y0[0];
  for (int i = 1; i <= kSamples; ++i) {
    const auto y = traj(t0 + p.period() * i / kSamples);
    if (y[1] > 0.0 && (y[0] > 0.0) != (vprev > 0.0)) ++crossings;
    vprev = y[0];
  }
  return (crossings + 1) / 2;
}

MemberResult run_member(const SlParams& p, const RectifyConfig& cfg, double v0, double w0) {
  const double T = p.period();
  const auto rhs = balance_rhs(p);
  MemberResult m{v0, w0};
  const double block = whole_periods(std::max(cfg.transient_periods * T, 20.0 / p.gamma), T);
  double t = 0.0;
  State<4> y{v0, w0, 0.0, 0.0};
  y = integrate<4>(rhs, t, y, t + block, cfg.ode);
  t += block;
  for (int round = 0; round <= cfg.extra_rounds; ++round) {
    const auto next = integrate<4>(rhs, t, y, t + T, cfg.ode);
    const double d = std::hypot(next[0] - y[0], next[1] - y[1]);
    y = next;
    t += T;
    if (d < cfg.periodic_tol) {
      m.converged = true;
      break;
    }
    if (round < cfg.extra_rounds) {
      y = integrate<4>(rhs, t, y, t + block, cfg.ode);
      t += block;
    }
  }
  y[2] = y[3] = 0.0;
  const State<4> start = y;
  const double span = cfg.average_periods * T;
  y = integrate<4>(rhs, t, y, t + span, cfg.ode);
  m.v_dc = y[2] / span;
  m.u_dc = y[3] / span;
  m.n_guess = count_half_rotations(p, start, t, cfg.ode);
  return m;
}

}  // namespace

Rectification detect_rectification(const SlParams& p, const RectifyConfig& cfg) {
  p.validate();
  cfg.ode.validate();
  if (cfg.ensemble < 1 || cfg.average_periods < 1 || cfg.transient_periods < 0 ||
      !(cfg.ensemble_radius > 0.0 && cfg.ensemble_radius <= 1.0)) {
    throw InvalidParameter("bad rectification configuration");
  }
  const int m = cfg.ensemble;
  auto members = parallel_map(
      static_cast<std::size_t>(m),
      [&](std::size_t k) {
        const double phi = 2.0 * kPi * (k + 0.5) / m;
        const double r = k % 2 == 0 ? cfg.ensemble_radius : 0.5 * cfg.ensemble_radius;
        return run_member(p, cfg, r * std::sin(phi), r * std::cos(phi));
      },
      cfg.workers);

  Rectification out;
  bool any_undecided = false;
  const MemberResult* best = nullptr;
  for (const auto& mr : members) {
    if (!mr.converged) {
      any_undecided = true;
      continue;
    }
    if (!best || std::abs(mr.v_dc) > std::abs(best->v_dc)) best = &mr;
    if (std::abs(mr.v_dc) > cfg.broken_threshold) out.broken = true;
  }
  if (!best) {
    for (const auto& mr : members) {
      if (!best || std::abs(mr.v_dc) > std::abs(best->v_dc)) best = &mr;
    }
  }
  out.v_dc = best->v_dc;
  out.u_dc = best->u_dc;
  out.n_guess = best->n_guess;
  out.status = out.broken ? RectifyStatus::Broken
               : any_undecided ? RectifyStatus::Undecided
                               : RectifyStatus::Symmetric;
  out.members = std::move(members);
  return out;
}

PendulumLimitReport pendulum_limit_check(const SlParams& p, const IntegratorConfig& cfg,
                                         int window_periods, double v0, double w0) {
  p.validate();
  if (p.gamma > 0.3) throw InvalidParameter("pendulum limit check needs Gamma <= 0.3");
  if (window_periods < 1) throw InvalidParameter("window must cover at least one period");
  const double T = p.period();
  const double transient = whole_periods(std::max(50.0 * T, 20.0 / p.gamma), T);
  const auto settled = integrate_balance(p, v0, w0, 0.0, transient, cfg);

  IntegratorConfig dense = cfg;
  dense.dense_output = true;
  constexpr int kPerPeriod = 256;
  const auto run = integrate_balance(p, settled.v_end, settled.w_end, transient,
                                     window_periods * T, dense, kPerPeriod);

  PendulumLimitReport rep;
  rep.periods = window_periods;
  const std::size_t n = run.t.size();
  std::vector<double> amp(n), theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    amp[i] = std::hypot(run.v[i], run.w[i]);
    theta[i] = std::atan2(-run.v[i], -run.w[i]);
    if (i > 0) theta[i] = theta[i - 1] + std::remainder(theta[i] - theta[i - 1], 2.0 * kPi);
  }
  rep.a_min = *std::min_element(amp.begin(), amp.end());
  if (rep.a_min < 1e-6) {
    throw DegenerateError("amplitude A near 0: the (A, theta) coordinates are singular");
  }
  double a_sum = 0.0, th_sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a_sum += amp[i];
    th_sum += theta[i];
  }
  rep.a_mean = a_sum / static_cast<double>(n - 1);
  rep.theta_mean = std::remainder(th_sum / static_cast<double>(n - 1), 2.0 * kPi);
  for (int k = 0; k < window_periods; ++k) {
    const auto b = amp.begin() + k * kPerPeriod;
    const auto [lo, hi] = std::minmax_element(b, b + kPerPeriod + 1);
    double mean = 0.0;
    for (auto it = b; it != b + kPerPeriod; ++it) mean += *it;
    mean /= kPerPeriod;
    rep.a_variation = std::max(rep.a_variation, (*hi - *lo) / mean);
  }
  rep.k_mean = rep.a_mean / p.gamma + p.gamma / rep.a_mean;

  const double K = rep.k_mean;
  auto rhs = [&](double t, const State<1>& y) -> State<1> {
    return {p.u0 * std::cos(p.Omega * t) - K * std::sin(y[0])};
  };
  const auto reduced = integrate_dense<1>(rhs, run.t.front(), State<1>{theta.front()},
                                          run.t.back(), cfg);
  for (std::size_t i = 0; i < n; ++i) {
    rep.phase_error =
        std::max(rep.phase_error, circular_distance(theta[i], reduced(run.t[i])[0]));
  }
  return rep;
}

double normalized_avg_cos(double f, double omega, const IntegratorConfig& cfg) {
  const auto drive = DriveSpec::sinusoidal(f, omega);
  const auto half = half_monodromy(drive, cfg);
  if (std::isfinite(half.trace)) return 2.0 * std::abs(exponents(half).b0);
  return avg_cos_trajectory(drive, cfg);
}

int normalized_branch_index(double f, double omega, const IntegratorConfig& cfg) {
  const FloquetAnalysis fa(DriveSpec::sinusoidal(f, omega), cfg);
  return fa.rotation_index(fa.stable_branch()).n;
}

std::vector<KRoot> selfconsistent_K(const SlParams& p, const IntegratorConfig& cfg,
                                    const KScan& scan) {
  p.validate();
  const double k_lo = 2.0, k_hi = 10.0 / p.gamma;
  if (!(k_hi > k_lo)) return {};
  auto amplitude = [&](double K) { return normalized_avg_cos(p.u0 / K, p.Omega / K, cfg); };
  auto residual = [&](double K) {
    const double A = amplitude(K);
    if (!(A > 0.0)) return -std::numeric_limits<double>::infinity();
    return K - A / p.gamma - p.gamma / A;
  };
  const auto ks = scan_roots(residual, k_lo, k_hi, scan.steps, scan.tol, scan.workers);
  std::vector<KRoot> roots;
  for (double K : ks) {
    const double r = residual(K);
    if (!std::isfinite(r) || std::abs(r) > 1e-3 * K) continue;  // bracket straddled A = 0
    KRoot root;
    root.K = K;
    root.A = amplitude(K);
    root.boundary = root.A <= p.gamma * (1.0 + 1e-6);
    try {
      root.n = normalized_branch_index(p.u0 / K, p.Omega / K, cfg);
    } catch (const DegenerateError&) {
      root.n = -1;
    }
    roots.push_back(root);
  }
  return roots;
}

NormalizedDataset NormalizedDataset::compute(const std::vector<double>& f_grid,
                                             const std::vector<double>& omega_grid,
                                             const IntegratorConfig& cfg, int workers) {
  for (double f : f_grid) {
    if (!(f > 0.0)) throw InvalidParameter("f grid must be positive");
  }
  for (double w : omega_grid) {
    if (!(w > 0.0)) throw InvalidParameter("omega grid must be positive");
  }
  NormalizedDataset out;
  if (f_grid.empty() || omega_grid.empty()) return out;
  const double f_max = *std::max_element(f_grid.begin(), f_grid.end());

  CriticalScan cs;
  cs.f_tol = 1e-9;
  const auto criticals = parallel_map(
      omega_grid.size(),
      [&](std::size_t j) { return critical_amplitudes(omega_grid[j], 0.0, f_max, cfg, cs); },
      workers);

  const std::size_t nf = f_grid.size();
  out.points_ = parallel_map(
      nf * omega_grid.size(),
      [&](std::size_t idx) {
        const std::size_t j = idx / nf;
        NormalizedPoint pt;
        pt.f = f_grid[idx % nf];
        pt.omega = omega_grid[j];
        const auto half = half_monodromy(DriveSpec::sinusoidal(pt.f, pt.omega), cfg);
        pt.critical = half.critical();
        pt.b0 = std::isfinite(half.trace)
                    ? exponents(half).b0
                    : 0.5 * avg_cos_trajectory(DriveSpec::sinusoidal(pt.f, pt.omega), cfg);
        const auto& c = criticals[j];
        pt.n = static_cast<int>(std::lower_bound(c.begin(), c.end(), pt.f) - c.begin());
        return pt;
      },
      workers);
  return out;
}

std::vector<BranchPoint> branch_map(const NormalizedDataset& data, double gamma) {
  if (!(gamma > 0.0)) throw InvalidParameter("Gamma must be positive");
  std::vector<BranchPoint> out;
  for (const auto& pt : data.points()) {
    const double A = 2.0 * std::abs(pt.b0);
    if (pt.critical || A < gamma) continue;
    BranchPoint b;
    b.f = pt.f;
    b.omega = pt.omega;
    b.A = A;
    b.n = pt.n;
    b.s = A / gamma + gamma / A;
    b.u0 = b.s * pt.f;
    b.Omega = b.s * pt.omega;
    b.gamma = gamma;
    out.push_back(b);
  }
  return out;
}

std::vector<BranchPoint> branch_map(double gamma, const std::vector<double>& f_grid,
                                    const std::vector<double>& omega_grid,
                                    const IntegratorConfig& cfg, int workers) {
  return branch_map(NormalizedDataset::compute(f_grid, omega_grid, cfg, workers), gamma);
}

std::vector<int> branch_indices(const std::vector<BranchPoint>& map) {
  std::set<int> s;
  for (const auto& b : map) s.insert(b.n);
  return {s.begin(), s.end()};
}

std::vector<OverlapCell> overlap_cells(const std::vector<BranchPoint>& map, double du0,
                                       double dOmega) {
  if (!(du0 > 0.0) || !(dOmega > 0.0)) throw InvalidParameter("cell sizes must be positive");
  std::map<std::pair<long, long>, std::set<int>> cells;
  for (const auto& b : map) {
    cells[{std::lround(std::floor(b.u0 / du0)), std::lround(std::floor(b.Omega / dOmega))}]
        .insert(b.n);
  }
  std::vector<OverlapCell> out;
  for (const auto& [key, ns] : cells) {
    if (ns.size() < 2) continue;
    out.push_back({(key.first + 0.5) * du0, (key.second + 0.5) * dOmega, {ns.begin(), ns.end()}});
  }
  return out;
}

void write_branch_csv(std::ostream& os, const std::vector<BranchPoint>& map) {
  os << "f,omega,A,n,u0,Omega,s,gamma\n";
  char buf[256];
  for (const auto& b : map) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%d,%.10g,%.10g,%.10g,%.10g\n", b.f, b.omega,
                  b.A, b.n, b.u0, b.Omega, b.s, b.gamma);
    os << buf;
  }
}

void write_rectification_header(std::ostream& os) {
  os << "u0,Omega,gamma,v_dc,u_dc,broken,n_guess\n";
}

void write_rectification_row(std::ostream& os, const SlParams& p, const Rectification& r) {
  const int flag = r.status == RectifyStatus::Undecided ? -1 : (r.broken ? 1 : 0);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d\n", p.u0, p.Omega, p.gamma,
                r.v_dc, r.u_dc, flag, r.n_guess);
  os << buf;
}

}  // namespace odp
