#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "odp/error.hpp"
#include "odp/parallel.hpp"

namespace odp {

/// Bisects a bracket [lo, hi] with sign change until it is narrower than tol.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, double flo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// All sign changes of fn on a uniform grid of `steps` intervals over [lo, hi], each bisected
/// to tol. Grid evaluations run on `workers` threads; the result is sorted.
inline std::vector<double> scan_roots(const std::function<double(double)>& fn, double lo,
                                      double hi, int steps, double tol, int workers = 1) {
  if (!(hi > lo) || steps < 1) throw InvalidParameter("root scan needs hi > lo and steps >= 1");
  std::vector<double> xs(steps + 1);
  for (int i = 0; i <= steps; ++i) xs[i] = lo + (hi - lo) * i / steps;
  const auto fx = parallel_map(xs.size(), [&](std::size_t i) { return fn(xs[i]); }, workers);
  std::vector<double> roots;
  for (int i = 0; i < steps; ++i) {
    if (fx[i] == 0.0) {
      roots.push_back(xs[i]);
    } else if (fx[i + 1] != 0.0 && (fx[i] > 0.0) != (fx[i + 1] > 0.0) && std::isfinite(fx[i]) &&
               std::isfinite(fx[i + 1])) {
      roots.push_back(bisect(fn, xs[i], xs[i + 1], fx[i], tol));
    }
  }
  if (fx[steps] == 0.0) roots.push_back(xs[steps]);
  return roots;
}

}  // namespace odp
