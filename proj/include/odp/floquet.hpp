#pragma once

// Exact stability analysis of  theta' + G(t) sin theta = F(t)  for drives in the half-period
// symmetry class, through the linear system  q' = A(t) q,  theta = 2 atan(q1 / q2).
//
// Branch numbering follows the sign of the half-monodromy multipliers: branch 1 belongs to
// the positive multiplier exp(B0 T/2) and has <theta> = pi (mod 2 pi); branch 2 belongs to the
// negative multiplier -exp(-B0 T/2) and has <theta> = 0 (mod 2 pi). The pendulum solution
// built from the growing Floquet solution is the stable one.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "odp/drive.hpp"
#include "odp/linalg.hpp"
#include "odp/ode.hpp"

namespace odp {

/// |tr M~| below this value marks an exchange of stability.
inline constexpr double kCriticalTrace = 1e-6;

/// M~ = e~ U(s + T/2, s): the half-period map followed by the reflection diag(1, -1).
struct HalfMonodromy {
  Mat2 matrix;
  double trace = 0.0;
  double period = 0.0;

  double det() const { return matrix.det(); }
  bool critical() const { return std::abs(trace) < kCriticalTrace; }
};

/// Integrates the linear system over half a period from start phase s.
HalfMonodromy half_monodromy(const DriveSpec& drive, const IntegratorConfig& cfg = {},
                             double start_phase = 0.0);

struct Exponents {
  double b0 = 0.0;        ///< (2/T) arcsinh(tr M~ / 2)
  double lyapunov = 0.0;  ///< -2 |B0|
};

Exponents exponents(const HalfMonodromy& half);

/// Eigenvectors of M~ normalised to equal length and unit Wronskian
/// init[0].x * init[1].y - init[0].y * init[1].x = 1. Index 0 is branch 1.
struct FloquetPair {
  std::array<Vec2, 2> init;
  std::array<double, 2> multiplier{};
};

/// Throws DegenerateError when |tr M~| < kCriticalTrace.
FloquetPair floquet_pair(const HalfMonodromy& half);

/// One symmetric periodic pendulum solution theta_i over a drive period, carried together
/// with the log-amplitude of its Floquet solution, so that
/// Phi_i(t) = |Phi_i(0)| exp(1/2 int_0^t G cos theta_i) (sin(theta_i/2), cos(theta_i/2)).
class PeriodicBranch {
 public:
  PeriodicBranch(const DriveSpec& drive, int branch, const Vec2& floquet_init, bool stable,
                 const IntegratorConfig& cfg);

  int branch() const { return branch_; }
  bool stable() const { return stable_; }
  double period() const { return period_; }
  /// Stroboscopic fixed point theta*_i = 2 atan2(Phi_i1(0), Phi_i2(0)).
  double theta_star() const { return theta_star_; }

  /// Unwrapped theta_i(t) for any t (extended periodically).
  double theta(double t) const;
  /// int_0^t G cos theta_i (t in [0, T]).
  double gcos_integral(double t) const;
  /// <G cos theta_i> over one period.
  double mean_gcos() const { return mean_gcos_; }
  /// <theta_i> over one period (unwrapped).
  double mean_theta() const { return mean_theta_; }

  /// Floquet solution Phi_i(t), t in [0, T].
  Vec2 floquet(double t) const;
  /// Oscillating part P~_i(t) = exp(-Re B_i t) Phi_i(t); T-periodic.
  Vec2 periodic_part(double t) const;

 private:
  double wrap_time(double t, int& periods) const;

  int branch_;
  bool stable_;
  double period_;
  double theta_star_;
  double norm0_;
  double theta_shift_ = 0.0;
  double gcos_offset_ = 0.0;
  double mean_gcos_ = 0.0;
  double mean_theta_ = 0.0;
  DenseTrajectory<3> orbit_;  // (theta, int G cos theta, int theta)
};

struct RotationIndex {
  int n = 0;
  std::vector<std::string> warnings;
};

/// Everything the exact analysis yields for one drive. Throws DegenerateError at criticality.
class FloquetAnalysis {
 public:
  explicit FloquetAnalysis(const DriveSpec& drive, const IntegratorConfig& cfg = {});

  const DriveSpec& drive() const { return drive_; }
  const HalfMonodromy& half() const { return half_; }
  const Exponents& exps() const { return exps_; }
  const FloquetPair& pair() const { return pair_; }
  /// branch is 1 or 2.
  const PeriodicBranch& branch(int branch) const { return branches_.at(branch - 1); }
  int stable_branch() const { return branches_[0].stable() ? 1 : 2; }
  const PeriodicBranch& stable() const { return branch(stable_branch()); }
  const PeriodicBranch& unstable() const { return branch(3 - stable_branch()); }

  /// Number of zeros of Phi_{i,2} on [0, T/2).
  RotationIndex rotation_index(int branch) const;

 private:
  DriveSpec drive_;
  HalfMonodromy half_;
  Exponents exps_;
  FloquetPair pair_;
  std::vector<PeriodicBranch> branches_;
};

struct MonodromyReport {
  HalfMonodromy half;
  double b0 = 0.0;
  double lyapunov = 0.0;
  std::array<Vec2, 2> floquet_init{};
  std::array<int, 2> rotation_n{};
  std::array<double, 2> avg_theta{};  ///< in [0, 2 pi)
  bool critical = false;
  std::vector<std::string> warnings;
};

/// Full report; at criticality only the trace data is filled and `critical` is set.
MonodromyReport monodromy_report(const DriveSpec& drive, const IntegratorConfig& cfg = {});

struct PeriodicSolutions {
  std::vector<double> t;
  std::array<std::vector<double>, 2> theta;  ///< branch 1, branch 2 (unwrapped)
  std::array<bool, 2> stable{};
  double b0 = 0.0;
};

PeriodicSolutions periodic_solutions(const DriveSpec& drive, const IntegratorConfig& cfg = {},
                                     int samples = 512);

RotationIndex rotation_index(const DriveSpec& drive, int branch, const IntegratorConfig& cfg = {});

/// <G cos theta> of the stable solution, 2 |B0|.
double avg_cos(const DriveSpec& drive, const IntegratorConfig& cfg = {});

/// Direct time average of G cos theta over one period after a transient of
/// max(20 periods, 10/|B0|) (capped at max_transient_periods).
double avg_cos_trajectory(const DriveSpec& drive, const IntegratorConfig& cfg = {},
                          double theta0 = 0.3, int max_transient_periods = 4000);

/// One-period stroboscopic map Pi(theta) and its inverse.
double stroboscopic_map(const DriveSpec& drive, double theta, const IntegratorConfig& cfg = {});
double inverse_stroboscopic_map(const DriveSpec& drive, double theta,
                                const IntegratorConfig& cfg = {});

struct FixedPoints {
  bool all_fixed = false;  ///< exchange of stability: every theta is fixed
  std::array<double, 2> theta_star{};  ///< wrapped to (-pi, pi]
  std::array<bool, 2> stable{};
  /// |Pi(theta*) - theta*| for the stable point, |Pi^-1(theta*) - theta*| for the unstable one.
  std::array<double, 2> residual{};
  double trace = 0.0;
  double b0 = 0.0;
};

FixedPoints stroboscopic_fixed_points(const DriveSpec& drive, const IntegratorConfig& cfg = {});

struct CriticalScan {
  int scan_steps = 0;   ///< 0 picks a step of about omega/8 in f
  double f_tol = 1e-6;  ///< bisection stops when the bracket is narrower
  int workers = 1;
};

/// Critical amplitudes of F = f sin(omega t), G = 1 in [f_lo, f_hi] (sign changes of tr M~).
std::vector<double> critical_amplitudes(double omega, double f_lo, double f_hi,
                                        const IntegratorConfig& cfg = {},
                                        const CriticalScan& scan = {});

/// max over a uniform theta grid of |Pi(theta) - theta| (circular distance).
double marginal_map_check(const DriveSpec& drive, const IntegratorConfig& cfg = {},
                          int grid = 64);

}  // namespace odp
