#pragma once

#include <iosfwd>
#include <vector>

#include "odp/drive.hpp"
#include "odp/ode.hpp"

namespace odp {

/// State of the linear system q' = A(t) q, A = 1/2 [[-G, F], [-F, G]].
struct LinearState {
  double q1 = 0.0;
  double q2 = 0.0;
};

/// theta = 2 atan2(q1, q2), in (-2 pi, 2 pi].
double angle_of(const LinearState& q);
/// Unit vector (sin(theta/2), cos(theta/2)) that maps back to theta.
LinearState linear_state_of(double theta);

/// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

struct PendulumRun {
  double theta_end = 0.0;              ///< unwrapped theta(t1)
  std::vector<double> t;               ///< dense samples (only when cfg.dense_output)
  std::vector<double> theta;
};

/// Right-hand side of theta' = F(t) - G(t) sin theta.
double pendulum_rhs(const DriveSpec& drive, double t, double theta);

/// Integrates the overdamped pendulum from theta0 at t0 to t1 (t1 > t0). When
/// cfg.dense_output is set, `samples_per_period` uniformly spaced samples per drive period
/// are returned.
PendulumRun integrate_pendulum(const DriveSpec& drive, double theta0, double t0, double t1,
                               const IntegratorConfig& cfg, int samples_per_period = 128);

/// Propagates q' = A(t) q from t0 to t1 (t1 > t0).
LinearState integrate_linear(const DriveSpec& drive, const LinearState& q0, double t0, double t1,
                             const IntegratorConfig& cfg);

/// Dense propagation of the linear system, sampled at samples + 1 evenly spaced times.
struct LinearRun {
  std::vector<double> t;
  std::vector<LinearState> q;
};
LinearRun integrate_linear_sampled(const DriveSpec& drive, const LinearState& q0, double t0,
                                   double t1, int samples, const IntegratorConfig& cfg);

/// Integrates the pendulum and the linear system from matched initial data over `periods`
/// drive periods and returns the largest circular distance between theta(t) and C[Q(t)].
double pendulum_vs_linear_consistency(const DriveSpec& drive, double theta0, int periods,
                                      const IntegratorConfig& cfg, int samples_per_period = 200);

/// CSV export: columns t,theta.
void write_pendulum_csv(std::ostream& os, const PendulumRun& run);
/// CSV export: columns t,q1,q2.
void write_linear_csv(std::ostream& os, const LinearRun& run);

}  // namespace odp
