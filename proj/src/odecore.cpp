#include "odp/odecore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "odp/error.hpp"

namespace odp {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2)) {
    throw InvalidParameter("integrator tolerances must lie in (0, 1e-2]");
  }
  if (!(max_step > 0.0)) throw InvalidParameter("integrator max_step must be positive");
}

double angle_of(const LinearState& q) { return 2.0 * std::atan2(q.q1, q.q2); }

LinearState linear_state_of(double theta) {
  return {std::sin(0.5 * theta), std::cos(0.5 * theta)};
}

double circular_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
}

double pendulum_rhs(const DriveSpec& drive, double t, double theta) {
  const auto d = drive.eval(t);
  return d.F - d.G * std::sin(theta);
}

namespace {

void require_forward(double t0, double t1) {
  if (!(t1 > t0)) throw InvalidParameter("integration end time must exceed start time");
}

std::vector<double> uniform_times(double t0, double t1, int count) {
  std::vector<double> ts(count + 1);
  for (int i = 0; i <= count; ++i) ts[i] = t0 + (t1 - t0) * i / count;
  return ts;
}

}  // namespace

PendulumRun integrate_pendulum(const DriveSpec& drive, double theta0, double t0, double t1,
                               const IntegratorConfig& cfg, int samples_per_period) {
  require_forward(t0, t1);
  auto rhs = [&](double t, const State<1>& y) -> State<1> { return {pendulum_rhs(drive, t, y[0])}; };
  PendulumRun run;
  if (!cfg.dense_output) {
    run.theta_end = integrate<1>(rhs, t0, State<1>{theta0}, t1, cfg)[0];
    return run;
  }
  const auto traj = integrate_dense<1>(rhs, t0, State<1>{theta0}, t1, cfg);
  const int count =
      std::max(1, static_cast<int>(std::ceil((t1 - t0) / drive.period() * samples_per_period)));
  run.t = uniform_times(t0, t1, count);
  run.theta.reserve(run.t.size());
  for (double t : run.t) run.theta.push_back(traj(t)[0]);
  run.theta_end = run.theta.back();
  return run;
}

namespace {

auto linear_rhs(const DriveSpec& drive) {
  return [&drive](double t, const State<2>& q) -> State<2> {
    const auto d = drive.eval(t);
    return {0.5 * (-d.G * q[0] + d.F * q[1]), 0.5 * (-d.F * q[0] + d.G * q[1])};
  };
}

}  // namespace

LinearState integrate_linear(const DriveSpec& drive, const LinearState& q0, double t0, double t1,
                             const IntegratorConfig& cfg) {
  require_forward(t0, t1);
  const auto y = integrate<2>(linear_rhs(drive), t0, State<2>{q0.q1, q0.q2}, t1, cfg);
  return {y[0], y[1]};
}

LinearRun integrate_linear_sampled(const DriveSpec& drive, const LinearState& q0, double t0,
                                   double t1, int samples, const IntegratorConfig& cfg) {
  require_forward(t0, t1);
  const auto traj = integrate_dense<2>(linear_rhs(drive), t0, State<2>{q0.q1, q0.q2}, t1, cfg);
  LinearRun run;
  run.t = uniform_times(t0, t1, std::max(1, samples));
  for (double t : run.t) {
    const auto y = traj(t);
    run.q.push_back({y[0], y[1]});
  }
  return run;
}

double pendulum_vs_linear_consistency(const DriveSpec& drive, double theta0, int periods,
                                      const IntegratorConfig& cfg, int samples_per_period) {
  if (periods < 1) throw InvalidParameter("consistency check needs at least one period");
  const double t1 = periods * drive.period();
  auto dense = cfg;
  dense.dense_output = true;
  const auto run = integrate_pendulum(drive, theta0, 0.0, t1, dense, samples_per_period);
  const auto lin = integrate_linear_sampled(drive, linear_state_of(theta0), 0.0, t1,
                                            static_cast<int>(run.t.size()) - 1, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    worst = std::max(worst, circular_distance(run.theta[i], angle_of(lin.q[i])));
  }
  return worst;
}

void write_pendulum_csv(std::ostream& os, const PendulumRun& run) {
  os << "t,theta\n";
  char buf[64];
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", run.t[i], run.theta[i]);
    os << buf;
  }
}

void write_linear_csv(std::ostream& os, const LinearRun& run) {
  os << "t,q1,q2\n";
  char buf[96];
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", run.t[i], run.q[i].q1, run.q[i].q2);
    os << buf;
  }
}

}  // namespace odp
