#pragma once

// Lateral superlattice under ac irradiation: scaled balance equations for the electron
// velocity v and energy w,
//   v' = -u w - Gamma v,   w' = u v - Gamma (w - w_eq),   u = -u0 cos(Omega t) - v / Gamma,
// and their pendulum limit  theta' + K sin theta = u0 cos(Omega t),  K = A/Gamma + Gamma/A,
// reached through v = -A sin theta, w = -A cos theta.

#include <iosfwd>
#include <string>
#include <vector>

#include "odp/ode.hpp"

namespace odp {

struct SlParams {
  double u0 = 0.0;
  double Omega = 1.0;
  double gamma = 0.2;
  double w_eq = -1.0;

  double period() const;
  /// Throws InvalidParameter unless gamma > 0, u0 >= 0, Omega > 0 and w_eq = -1.
  void validate() const;
};

struct BalanceRun {
  std::vector<double> t;
  std::vector<double> v;
  std::vector<double> w;
  double v_end = 0.0;
  double w_end = 0.0;
};

/// Integrates the balance equations over [t0, t0 + span]. With gamma = 0 the sheet term of the
/// field law is dropped (u = -u0 cos(Omega t)) and the scattering terms vanish.
/// Samples are returned when cfg.dense_output is set.
BalanceRun integrate_balance(const SlParams& p, double v0, double w0, double t0, double span,
                             const IntegratorConfig& cfg = {}, int samples_per_period = 128);

/// Field u(t) for the state velocity v.
double balance_field(const SlParams& p, double t, double v);

enum class RectifyStatus { Symmetric, Broken, Undecided };
const char* status_name(RectifyStatus s);

struct RectifyConfig {
  int ensemble = 8;
  double ensemble_radius = 0.9;
  int transient_periods = 50;   ///< at least this many, and at least 20/Gamma in time
  int average_periods = 20;
  int extra_rounds = 8;         ///< additional transient blocks granted before giving up
  double periodic_tol = 1e-6;   ///< stroboscopic return distance accepted as periodic
  double broken_threshold = 1e-3;
  int workers = 1;
  IntegratorConfig ode{1e-9, 1e-11};
};

struct MemberResult {
  double v0 = 0.0;
  double w0 = 0.0;
  double v_dc = 0.0;
  double u_dc = 0.0;
  int n_guess = 0;
  bool converged = false;
};

struct Rectification {
  double v_dc = 0.0;  ///< member with the largest |<v>|
  double u_dc = 0.0;
  int n_guess = 0;
  bool broken = false;
  RectifyStatus status = RectifyStatus::Symmetric;
  std::vector<MemberResult> members;
};

Rectification detect_rectification(const SlParams& p, const RectifyConfig& cfg = {});

struct PendulumLimitReport {
  double a_mean = 0.0;
  double a_min = 0.0;
  double a_variation = 0.0;  ///< largest (max - min)/mean of A over one period, window periods
  double k_mean = 0.0;       ///< A/Gamma + Gamma/A at the mean amplitude
  double phase_error = 0.0;  ///< largest circular distance to the reduced pendulum over the window
  double theta_mean = 0.0;   ///< window average of theta, wrapped to (-pi, pi]
  int periods = 0;
};

/// Requires gamma <= 0.3. Throws DegenerateError when A comes near 0 in the window.
PendulumLimitReport pendulum_limit_check(const SlParams& p, const IntegratorConfig& cfg = {},
                                         int window_periods = 5, double v0 = 0.0,
                                         double w0 = -1.0);

struct KRoot {
  double K = 0.0;
  double A = 0.0;
  int n = 0;
  bool boundary = false;  ///< A <= Gamma: outside the validity of the pendulum limit
};

struct KScan {
  int steps = 400;
  double tol = 1e-6;
  int workers = 1;
};

/// Average cosine 2|B0| of the normalized pendulum theta' + sin theta = f cos(omega t).
double normalized_avg_cos(double f, double omega, const IntegratorConfig& cfg = {});

/// Stable-branch index n of the normalized pendulum (number of exchanges of stability
/// crossed between 0 and f at fixed omega).
int normalized_branch_index(double f, double omega, const IntegratorConfig& cfg = {});

/// All roots of K - A/Gamma - Gamma/A, A = A(K), on K in [2, 10/Gamma].
std::vector<KRoot> selfconsistent_K(const SlParams& p, const IntegratorConfig& cfg = {},
                                    const KScan& scan = {});

struct NormalizedPoint {
  double f = 0.0;
  double omega = 0.0;
  double b0 = 0.0;
  int n = 0;
  bool critical = false;
};

/// Normalized-pendulum samples on an (f, omega) grid; built once and remapped per Gamma.
class NormalizedDataset {
 public:
  static NormalizedDataset compute(const std::vector<double>& f_grid,
                                   const std::vector<double>& omega_grid,
                                   const IntegratorConfig& cfg = {}, int workers = 1);

  const std::vector<NormalizedPoint>& points() const { return points_; }

 private:
  std::vector<NormalizedPoint> points_;
};

struct BranchPoint {
  double f = 0.0;
  double omega = 0.0;
  double A = 0.0;
  int n = 0;
  double u0 = 0.0;
  double Omega = 0.0;
  double s = 0.0;
  double gamma = 0.0;
};

/// Maps the dataset to (u0, Omega) = s (f, omega), s = A/Gamma + Gamma/A; drops A < Gamma.
std::vector<BranchPoint> branch_map(const NormalizedDataset& data, double gamma);
std::vector<BranchPoint> branch_map(double gamma, const std::vector<double>& f_grid,
                                    const std::vector<double>& omega_grid,
                                    const IntegratorConfig& cfg = {}, int workers = 1);

/// Distinct branch indices present in a map, ascending.
std::vector<int> branch_indices(const std::vector<BranchPoint>& map);

struct OverlapCell {
  double u0 = 0.0;
  double Omega = 0.0;
  std::vector<int> n;
};

/// Bins the map into cells of size (du0, dOmega) and returns the cells that hold more than
/// one branch index, cell centres as coordinates.
std::vector<OverlapCell> overlap_cells(const std::vector<BranchPoint>& map, double du0,
                                       double dOmega);

void write_branch_csv(std::ostream& os, const std::vector<BranchPoint>& map);
/// Columns u0,Omega,gamma,v_dc,u_dc,broken,n_guess; broken is 1, 0, or -1 for undecided.
void write_rectification_header(std::ostream& os);
void write_rectification_row(std::ostream& os, const SlParams& p, const Rectification& r);

}  // namespace odp
