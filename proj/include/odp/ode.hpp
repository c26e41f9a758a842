#pragma once

// Dormand-Prince 5(4) embedded pair with the standard 4th-order continuous extension.
// Works on fixed-size states; integrates forward or backward in time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "odp/error.hpp"

namespace odp {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  bool dense_output = false;
  std::size_t max_steps = 20'000'000;

  /// Throws InvalidParameter unless tolerances lie in (0, 1e-2] and max_step > 0.
  void validate() const;
};

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted step together with its interpolation coefficients.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> coef{};

  double t1() const { return t0 + h; }
  const State<N>& start() const { return coef[0]; }

  State<N> operator()(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = coef[0][i] +
             s * (coef[1][i] + s1 * (coef[2][i] + s * (coef[3][i] + s1 * coef[4][i])));
    }
    return y;
  }
};

/// Piecewise dense solution assembled from accepted steps (monotone in time, either direction).
template <std::size_t N>
class DenseTrajectory {
 public:
  void push(const DenseStep<N>& s) { steps_.push_back(s); }
  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }
  double t_begin() const { return steps_.front().t0; }
  double t_end() const { return steps_.back().t1(); }
  std::span<const DenseStep<N>> steps() const { return steps_; }

  /// Interpolated state; t is clamped to the covered interval.
  State<N> operator()(double t) const {
    const bool forward = steps_.front().h > 0.0;
    auto it = forward
                  ? std::upper_bound(steps_.begin(), steps_.end(), t,
                                     [](double v, const DenseStep<N>& s) { return v < s.t0; })
                  : std::upper_bound(steps_.begin(), steps_.end(), t,
                                     [](double v, const DenseStep<N>& s) { return v > s.t0; });
    if (it != steps_.begin()) --it;
    return (*it)(t);
  }

 private:
  std::vector<DenseStep<N>> steps_;
};

namespace detail {

// Butcher tableau of DOPRI5.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 may be smaller than t0) and returns y(t1).
/// on_step(const DenseStep<N>&) is invoked for every accepted step, in time order.
template <std::size_t N, class Rhs, class OnStep>
State<N> integrate(Rhs&& rhs, double t0, State<N> y, double t1, const IntegratorConfig& cfg,
                   OnStep&& on_step) {
  using namespace detail;
  cfg.validate();
  if (t1 == t0) return y;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmax = std::min(cfg.max_step, span);

  auto err_norm = [&](const State<N>& y0, const State<N>& y1, const State<N>& e) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      acc += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(acc / N);
  };

  State<N> k1 = rhs(t0, y);

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    State<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h * k1[i];
    const State<N> f1 = rhs(t0 + dir * h, y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
      der2 += ((f1[i] - k1[i]) / sk) * ((f1[i] - k1[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, hmax});
    h = std::min(std::max(h, 1e-9 * span), hmax);
  }

  double t = t0;
  std::size_t nsteps = 0;
  bool last_rejected = false;
  State<N> k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  DenseStep<N> step;

  while (dir * (t1 - t) > 0.0) {
    if (++nsteps > cfg.max_steps) {
      throw IntegrationError("integrator step budget exhausted at t=" + std::to_string(t), t);
    }
    if (h < 1e-15 * std::max(1.0, std::abs(t))) {
      throw IntegrationError("step size underflow (stiff or singular problem) at t=" +
                                 std::to_string(t),
                             t);
    }
    bool final_step = false;
    if (h >= std::abs(t1 - t) * (1.0 - 1e-12)) {
      h = std::abs(t1 - t);
      final_step = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    k2 = rhs(t + c2 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tnew = final_step ? t1 : t + hs;
    k6 = rhs(t + hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs(tnew, ynew);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double en = err_norm(y, ynew, err);
    if (!std::isfinite(en)) {
      h *= 0.1;
      last_rejected = true;
      continue;
    }
    if (en <= 1.0) {
      step.t0 = t;
      step.h = hs;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = hs * k1[i] - dy;
        step.coef[0][i] = y[i];
        step.coef[1][i] = dy;
        step.coef[2][i] = bspl;
        step.coef[3][i] = dy - hs * k7[i] - bspl;
        step.coef[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                d7 * k7[i]);
      }
      on_step(static_cast<const DenseStep<N>&>(step));
      t = tnew;
      y = ynew;
      k1 = k7;
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, hmax);
      last_rejected = false;
      if (final_step) break;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      last_rejected = true;
    }
  }
  return y;
}

template <std::size_t N, class Rhs>
State<N> integrate(Rhs&& rhs, double t0, State<N> y, double t1, const IntegratorConfig& cfg) {
  return integrate<N>(std::forward<Rhs>(rhs), t0, y, t1, cfg, [](const DenseStep<N>&) {});
}

/// Integrates and records every step into a dense trajectory.
template <std::size_t N, class Rhs>
DenseTrajectory<N> integrate_dense(Rhs&& rhs, double t0, State<N> y, double t1,
                                   const IntegratorConfig& cfg) {
  DenseTrajectory<N> traj;
  integrate<N>(std::forward<Rhs>(rhs), t0, y, t1, cfg,
               [&](const DenseStep<N>& s) { traj.push(s); });
  return traj;
}

}  // namespace odp
