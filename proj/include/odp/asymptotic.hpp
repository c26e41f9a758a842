#pragma once

// Approximate traces of the half monodromy for large or slow drives.
//
// lambda-embedding: a plan is built for a drive *shape* (F, G) and a large parameter lambda;
// the physical drive is (lambda F, lambda G). The (f, omega) functions for the sinusoidal
// drive use lambda = 1 on the physical drive. Rescaling time by omega turns that into
// lambda = 1/omega on the shape (f sin s, 1); the segment integrals carry the same 1/omega.

#include <string>
#include <vector>

#include "odp/drive.hpp"
#include "odp/linalg.hpp"
#include "odp/ode.hpp"

namespace odp {

/// Piecewise WKB data of  y'' + lambda^2 R(t) y = 0,  R = (F^2 - G^2)/4,  over [0, T/2].
struct WkbPlan {
  DriveSpec drive;            ///< shape actually used (time-shifted if R(0) >= 0 required it)
  double shift = 0.0;         ///< time shift applied to the input drive
  double lambda = 1.0;
  std::vector<double> turning_points;  ///< t_1 .. t_N in (0, T/2)
  std::vector<double> xi;              ///< int |R|^{1/2} over each of the N + 1 segments
  double r0 = 0.0;                     ///< |R(0)|^{1/4}
  double r1 = 0.0;                     ///< R'(0)
  double sign_g0 = 1.0;                ///< sgn G(0)
  bool near_degenerate = false;        ///< a segment between turning points is nearly empty
  bool valid = true;                   ///< lambda * xi > 1 on every segment between turning points

  double alpha() const;  ///< exp(lambda * xi_N)
  /// kappa_0, omega_1, kappa_1 of the two-turning-point case (TopologyError otherwise).
  double kappa0() const;
  double omega1() const;
  double kappa1() const;
};

struct PlanOptions {
  bool allow_shift = true;  ///< time-shift the drive when R(0) >= 0
};

/// Throws InvalidParameter when R(0) >= 0 and shifting is disabled, TopologyError when R never
/// becomes negative, DegenerateError for a suspected double root of R.
WkbPlan build_plan(const DriveSpec& shape, double lambda, const PlanOptions& opts = {});

struct WkbMonodromy {
  Mat2 matrix;
  double trace = 0.0;
  std::vector<std::string> warnings;
};

WkbMonodromy wkb_half_monodromy(const WkbPlan& plan);
WkbMonodromy wkb_half_monodromy(const DriveSpec& shape, double lambda);

struct WkbComparison {
  double lambda = 0.0;
  double exact = 0.0;   ///< numeric tr M~ of the scaled drive
  double wkb = 0.0;
  double error = 0.0;   ///< |wkb - exact| / ||M~_exact||_F
};

/// WKB against the exact half monodromy of (lambda F, lambda G) for each lambda.
std::vector<WkbComparison> wkb_ladder(const DriveSpec& shape, const std::vector<double>& lambdas,
                                      const IntegratorConfig& cfg = {});

/// Two-turning-point closed form of tr M~.
double trace_two_turning(const WkbPlan& plan);

/// -(1/omega) S(a, q; pi), S'' + (a - 2q cos 2t) S = 0, S(0) = 0, S'(0) = 1,
/// a = (f^2 - 2)/(8 omega^2), q = f^2/(16 omega^2).
double mathieu_trace(double f, double omega, const IntegratorConfig& cfg = {});

struct MathieuCritical {
  double omega = 0.0;
  double f = 0.0;
  int k = 0;
  bool found = false;  ///< false marks a gap (no root in the searched range)
};

/// Solves (f^2 - 2)/(8 omega^2) = b_k(f^2/(16 omega^2)) for f at each omega.
std::vector<MathieuCritical> critical_curves_mathieu(int k, const std::vector<double>& omegas,
                                                     int workers = 1);
MathieuCritical mathieu_critical(int k, double omega);

struct EllipticTrace {
  double trace = 0.0;
  bool oscillatory = true;  ///< false for f <= 1 (purely hyperbolic limit)
};

/// Closed-form trace from the complete elliptic integral E(f^2).
EllipticTrace elliptic_trace(double f, double omega);

/// High-frequency estimate f = omega * (k-th zero of J0).
double bessel_baseline(double omega, int k);

enum class TraceMethod { Numeric, Mathieu, Elliptic, Wkb, Bessel };

const char* method_name(TraceMethod m);
TraceMethod parse_method(const std::string& name);

/// Critical amplitudes in [f_lo, f_hi] for the sinusoidal drive at omega, found as sign
/// changes of the method's trace (Bessel: the baseline values inside the range).
std::vector<double> critical_amplitudes_by(TraceMethod method, double omega, double f_lo,
                                           double f_hi, int steps = 0, double f_tol = 1e-8,
                                           int workers = 1);

}  // namespace odp
