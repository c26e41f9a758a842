#include "odp/asymptotic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/roots.hpp"
#include "odp/specfun.hpp"

namespace odp {

namespace {

constexpr double kPi = std::numbers::pi;

double r_of(const DriveSpec& d, double t) {
  const auto v = d.eval(t);
  return 0.25 * (v.F * v.F - v.G * v.G);
}

double r_dot(const DriveSpec& d, double t) {
  const auto v = d.eval(t);
  const auto dv = d.derivative(t);
  return 0.5 * (v.F * dv.F - v.G * dv.G);
}

// int_a^b sqrt|R|, with t = a + u^2 and t = b - u^2 on the two halves so that square-root
// behaviour at either end becomes smooth.
double segment_integral(const DriveSpec& d, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  const double m = 0.5 * (a + b);
  auto left = [&](double u) { return std::sqrt(std::abs(r_of(d, a + u * u))) * 2.0 * u; };
  auto right = [&](double u) { return std::sqrt(std::abs(r_of(d, b - u * u))) * 2.0 * u; };
  const double w = std::sqrt(m - a);
  return gauss_kronrod<double, 61>::integrate(left, 0.0, w, 20, 1e-14) +
         gauss_kronrod<double, 61>::integrate(right, 0.0, w, 20, 1e-14);
}

}  // namespace

double WkbPlan::alpha() const { return std::exp(lambda * xi.back()); }

double WkbPlan::kappa0() const {
  if (turning_points.size() != 2) throw TopologyError("closed form needs exactly two turning points");
  return xi[0];
}

double WkbPlan::omega1() const {
  if (turning_points.size() != 2) throw TopologyError("closed form needs exactly two turning points");
  return xi[1];
}

double WkbPlan::kappa1() const {
  if (turning_points.size() != 2) throw TopologyError("closed form needs exactly two turning points");
  return xi[2];
}

WkbPlan build_plan(const DriveSpec& shape, double lambda, const PlanOptions& opts) {
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
  const double half_T = 0.5 * shape.period();
  constexpr int kGrid = 4096;

  WkbPlan plan{.drive = shape, .shift = 0.0, .lambda = lambda, .turning_points = {}, .xi = {}};
  if (r_of(shape, 0.0) >= 0.0) {
    if (!opts.allow_shift) {
      throw InvalidParameter("R(0) >= 0; enable the time shift to move t = 0 into R < 0");
    }
    double best_t = 0.0, best_r = r_of(shape, 0.0);
    for (int j = 1; j < kGrid; ++j) {
      const double t = half_T * j / kGrid;
      const double r = r_of(shape, t);
      if (r < best_r) {
        best_r = r;
        best_t = t;
      }
    }
    if (best_r >= 0.0) throw TopologyError("R(t) >= 0 throughout; no exponential segment exists");
    plan.shift = best_t;
    plan.drive = shape.time_shifted(best_t);
  }
  const DriveSpec& d = plan.drive;

  double r_scale = 0.0;
  std::vector<double> rs(kGrid + 1);
  for (int j = 0; j <= kGrid; ++j) {
    rs[j] = r_of(d, half_T * j / kGrid);
    r_scale = std::max(r_scale, std::abs(rs[j]));
  }
  auto rf = [&](double t) { return r_of(d, t); };
  for (int j = 0; j < kGrid; ++j) {
    if ((rs[j] > 0.0) != (rs[j + 1] > 0.0) && rs[j] != 0.0 && rs[j + 1] != 0.0) {
      const double tp =
          bisect(rf, half_T * j / kGrid, half_T * (j + 1) / kGrid, rs[j], 1e-14 * half_T);
      if (std::abs(r_dot(d, tp)) < 1e-9 * r_scale * d.omega()) {
        throw DegenerateError("R has a suspected double root near a turning point");
      }
      plan.turning_points.push_back(tp);
    }
  }

  std::vector<double> pts{0.0};
  pts.insert(pts.end(), plan.turning_points.begin(), plan.turning_points.end());
  pts.push_back(half_T);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    plan.xi.push_back(segment_integral(d, pts[i], pts[i + 1]));
  }
  for (std::size_t i = 1; i + 1 < plan.xi.size(); ++i) {
    if (plan.xi[i] < 1e-3) plan.near_degenerate = true;
    if (lambda * plan.xi[i] <= 1.0) plan.valid = false;
  }

  plan.r0 = std::pow(std::abs(r_of(d, 0.0)), 0.25);
  plan.r1 = r_dot(d, 0.0);
  plan.sign_g0 = d.eval(0.0).G >= 0.0 ? 1.0 : -1.0;
  return plan;
}

WkbMonodromy wkb_half_monodromy(const WkbPlan& plan) {
  const double lam = plan.lambda;
  const double r0 = plan.r0;
  const double r05 = std::pow(r0, 5);
  const double r1 = plan.r1;
  const double al = plan.alpha();

  const Mat2 s0{0.5 * r0 - r1 / (8.0 * lam * r05), 1.0 / (2.0 * lam * r0),
                r0 + r1 / (4.0 * lam * r05), -1.0 / (lam * r0)};
  const Mat2 s1{al / r0, 1.0 / (2.0 * al * r0), al * (lam * r0 + r1 / (4.0 * r05)),
                (-0.5 * lam * r0 + r1 / (8.0 * r05)) / al};

  Mat2 v = s0;
  for (std::size_t k = 0; k < plan.turning_points.size(); ++k) {
    const double x = lam * plan.xi[k];
    Mat2 w;
    if (k % 2 == 0) {
      w = {2.0 * std::exp(x), 0.0, 0.0, 0.5 * std::exp(-x)};
    } else {
      w = {std::cos(x), -std::sin(x), std::sin(x), std::cos(x)};
    }
    v = w * v;
  }
  v = s1 * v;

  // Y = (q_c, q_c') with q' = lambda A(0) q, propagated component by component.
  const auto d0 = plan.drive.eval(0.0);
  const Mat2 a0{-0.5 * lam * d0.G, 0.5 * lam * d0.F, -0.5 * lam * d0.F, 0.5 * lam * d0.G};
  Mat2 u;
  for (int j = 0; j < 2; ++j) {
    const Vec2 q0 = j == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    const Vec2 dq = a0 * q0;
    const double y1 = (v * Vec2{q0.x, dq.x}).x;
    const double y2 = (v * Vec2{q0.y, dq.y}).x;
    if (j == 0) {
      u.a11 = y1;
      u.a21 = y2;
    } else {
      u.a12 = y1;
      u.a22 = y2;
    }
  }
  WkbMonodromy out;
  out.matrix = kReflect * u;
  out.trace = out.matrix.trace();
  if (!plan.valid) {
    out.warnings.push_back("lambda * xi <= 1 on a segment between turning points; WKB "
                           "validity heuristic violated");
  }
  if (plan.near_degenerate) out.warnings.push_back("nearly merging turning points");
  return out;
}

WkbMonodromy wkb_half_monodromy(const DriveSpec& shape, double lambda) {
  return wkb_half_monodromy(build_plan(shape, lambda));
}

double trace_two_turning(const WkbPlan& plan) {
  if (plan.turning_points.size() != 2) {
    throw TopologyError("two-turning-point formula applies to N = 2 only (N = " +
                        std::to_string(plan.turning_points.size()) + ")");
  }
  const double lam = plan.lambda;
  const double k0 = plan.xi[0], w1 = plan.xi[1], k1 = plan.xi[2];
  return -2.0 * plan.sign_g0 *
         (std::sinh((k0 + k1) * lam + std::numbers::ln2) * std::cos(w1 * lam) +
          std::cosh((k0 - k1) * lam) * std::sin(w1 * lam));
}

double mathieu_trace(double f, double omega, const IntegratorConfig& cfg) {
  if (!(f >= 0.0) || !(omega > 0.0)) throw InvalidParameter("need f >= 0 and omega > 0");
  const double a = (f * f - 2.0) / (8.0 * omega * omega);
  const double q = f * f / (16.0 * omega * omega);
  auto rhs = [a, q](double t, const State<2>& y) -> State<2> {
    return {y[1], -(a - 2.0 * q * std::cos(2.0 * t)) * y[0]};
  };
  const auto y = integrate<2>(rhs, 0.0, State<2>{0.0, 1.0}, kPi, cfg);
  return -y[0] / omega;
}

MathieuCritical mathieu_critical(int k, double omega) {
  if (k < 1) throw InvalidParameter("branch index k must be >= 1");
  if (!(omega > 0.0)) throw InvalidParameter("omega must be positive");
  const double w2 = omega * omega;
  auto h = [&](double f) { return (f * f - 2.0) / (8.0 * w2) - mathieu_b(k, f * f / (16.0 * w2)); };
  MathieuCritical out{omega, 0.0, k, false};
  const double f_max = 400.0 * omega;  // q stays within the Mathieu limit
  const double step = 0.02 * std::max(1.0, omega);
  double lo = 0.0, hlo = h(0.0);
  for (double f = step; f <= f_max; f += step) {
    const double hv = h(f);
    if ((hv > 0.0) != (hlo > 0.0)) {
      out.f = bisect(h, lo, f, hlo, 1e-8);
      out.found = true;
      return out;
    }
    lo = f;
    hlo = hv;
  }
  return out;
}

std::vector<MathieuCritical> critical_curves_mathieu(int k, const std::vector<double>& omegas,
                                                     int workers) {
  return parallel_map(omegas.size(), [&](std::size_t i) { return mathieu_critical(k, omegas[i]); },
                      workers);
}

EllipticTrace elliptic_trace(double f, double omega) {
  if (!(f >= 0.0) || !(omega > 0.0)) throw InvalidParameter("need f >= 0 and omega > 0");
  const auto e = elliptic_E(f * f);
  EllipticTrace out;
  out.oscillatory = f > 1.0;
  const double arg = e.imag() / omega;
  out.trace = -2.0 * std::sinh(e.real() / omega + std::numbers::ln2) * std::cos(arg) -
              2.0 * std::sin(arg);
  return out;
}

double bessel_baseline(double omega, int k) {
  if (!(omega > 0.0)) throw InvalidParameter("omega must be positive");
  return omega * bessel_j0_root(k);
}

const char* method_name(TraceMethod m) {
  switch (m) {
    case TraceMethod::Numeric: return "numeric";
    case TraceMethod::Mathieu: return "mathieu";
    case TraceMethod::Elliptic: return "elliptic";
    case TraceMethod::Wkb: return "wkb";
    case TraceMethod::Bessel: return "bessel";
  }
  return "?";
}

TraceMethod parse_method(const std::string& name) {
  for (auto m : {TraceMethod::Numeric, TraceMethod::Mathieu, TraceMethod::Elliptic,
                 TraceMethod::Wkb, TraceMethod::Bessel}) {
    if (name == method_name(m)) return m;
  }
  throw InvalidParameter("unknown method '" + name +
                         "' (expected numeric, mathieu, elliptic, wkb or bessel)");
}

std::vector<double> critical_amplitudes_by(TraceMethod method, double omega, double f_lo,
                                           double f_hi, int steps, double f_tol, int workers) {
  if (!(omega > 0.0)) throw InvalidParameter("omega must be positive");
  if (!(f_hi > f_lo) || f_lo < 0.0) throw InvalidParameter("need 0 <= f_lo < f_hi");
  const int n = steps > 0 ? steps
                          : std::max(16, static_cast<int>(std::ceil((f_hi - f_lo) / (omega / 8.0))));
  switch (method) {
    case TraceMethod::Numeric:
      return critical_amplitudes(omega, f_lo, f_hi, {}, {n, f_tol, workers});
    case TraceMethod::Mathieu: {
      std::vector<double> out;
      for (int k = 1;; ++k) {
        const auto c = mathieu_critical(k, omega);
        if (!c.found || c.f > f_hi) break;
        if (c.f >= f_lo) out.push_back(c.f);
      }
      return out;
    }
    case TraceMethod::Bessel: {
      std::vector<double> out;
      for (int k = 1;; ++k) {
        const double f = bessel_baseline(omega, k);
        if (f > f_hi) break;
        if (f >= f_lo) out.push_back(f);
      }
      return out;
    }
    case TraceMethod::Elliptic:
      return scan_roots([omega](double f) { return elliptic_trace(f, omega).trace; }, f_lo, f_hi,
                        n, f_tol, workers);
    case TraceMethod::Wkb:
      return scan_roots(
          [omega](double f) {
            try {
              return wkb_half_monodromy(DriveSpec::sinusoidal(f, omega), 1.0).trace;
            } catch (const DegenerateError&) {
              return std::nan("");
            }
          },
          f_lo, f_hi, n, f_tol, workers);
  }
  return {};
}

std::vector<WkbComparison> wkb_ladder(const DriveSpec& shape, const std::vector<double>& lambdas,
                                      const IntegratorConfig& cfg) {
  std::vector<WkbComparison> out;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    const auto exact = half_monodromy(shape.scaled(lambda), cfg);
    const auto wkb = wkb_half_monodromy(shape, lambda);
    out.push_back({lambda, exact.trace, wkb.trace,
                   std::abs(wkb.trace - exact.trace) / exact.matrix.frobenius()});
  }
  return out;
}

}  // namespace odp
