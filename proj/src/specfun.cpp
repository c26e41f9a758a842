#include "odp/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "odp/error.hpp"

namespace odp {

namespace {

constexpr double kPi = std::numbers::pi;

template <class Fn>
double gk(Fn&& fn, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  if (b <= a) return 0.0;
  return gauss_kronrod<double, 61>::integrate(fn, a, b, 20, 1e-14);
}

}  // namespace

std::complex<double> elliptic_E(double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidParameter("elliptic_E needs finite m >= 0");
  const double half_pi = 0.5 * kPi;
  if (m <= 1.0) {
    auto fn = [m](double t) {
      const double s = std::sin(t);
      return std::sqrt(std::max(0.0, 1.0 - m * s * s));
    };
    if (m < 0.9) return {gk(fn, 0.0, half_pi), 0.0};
    // The integrand behaves like cos t near pi/2 only at m = 1; near it the endpoint is
    // nearly singular, so substitute t = pi/2 - u^2.
    const double split = half_pi - 0.5;
    const double head = gk(fn, 0.0, split);
    const double tail = gk([&](double u) { return fn(half_pi - u * u) * 2.0 * u; }, 0.0,
                           std::sqrt(half_pi - split));
    return {head + tail, 0.0};
  }
  // Kink at sin^2 t* = 1/m; u = sqrt|t - t*| removes the square-root behaviour on both sides.
  const double ts = std::asin(1.0 / std::sqrt(m));
  auto radicand = [m](double t) {
    const double s = std::sin(t);
    return 1.0 - m * s * s;
  };
  const double re =
      gk([&](double u) { return std::sqrt(std::max(0.0, radicand(ts - u * u))) * 2.0 * u; }, 0.0,
         std::sqrt(ts));
  const double im = gk(
      [&](double u) { return std::sqrt(std::max(0.0, -radicand(ts + u * u))) * 2.0 * u; }, 0.0,
      std::sqrt(half_pi - ts));
  return {re, im};
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal matrix (diag d, off-diagonal e) below x.
int sturm_count(const std::vector<double>& d, double e, double x) {
  int count = 0;
  double piv = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    piv = d[i] - x - (i == 0 ? 0.0 : e * e / piv);
    if (piv == 0.0) piv = -1e-300;
    if (piv < 0.0) ++count;
  }
  return count;
}

double kth_eigenvalue(const std::vector<double>& d, double e, int index) {
  double lo = d.front() - 2.0 * std::abs(e), hi = d.front() + 2.0 * std::abs(e);
  for (double v : d) {
    lo = std::min(lo, v - 2.0 * std::abs(e));
    hi = std::max(hi, v + 2.0 * std::abs(e));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) >= index) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double mathieu_b_truncated(int k, double q, int dim) {
  std::vector<double> d(dim);
  if (k % 2 == 1) {
    for (int i = 0; i < dim; ++i) d[i] = (2.0 * i + 1.0) * (2.0 * i + 1.0);
    d[0] -= q;
    return kth_eigenvalue(d, q, (k + 1) / 2);
  }
  for (int i = 0; i < dim; ++i) d[i] = (2.0 * i + 2.0) * (2.0 * i + 2.0);
  return kth_eigenvalue(d, q, k / 2);
}

}  // namespace

double mathieu_b(int k, double q, double q_limit) {
  if (k < 1) throw InvalidParameter("Mathieu index k must be >= 1");
  if (!std::isfinite(q) || std::abs(q) > q_limit) {
    throw InvalidParameter("|q| exceeds the configured Mathieu limit");
  }
  constexpr int kMaxDim = 1 << 14;
  int dim = std::max(20, 2 * static_cast<int>(std::ceil(std::sqrt(std::abs(q)))) + k + 10);
  double prev = mathieu_b_truncated(k, q, dim);
  while (dim < kMaxDim) {
    dim *= 2;
    const double next = mathieu_b_truncated(k, q, dim);
    const double change = std::abs(next - prev);
    if (change < 1e-9) return next;
    prev = next;
  }
  throw AccuracyError("Mathieu truncation did not converge at dimension " + std::to_string(dim),
                      std::abs(prev - mathieu_b_truncated(k, q, dim / 2)));
}

namespace {

// Hankel asymptotic form J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), nu in {0, 1}.
double bessel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0, term = 1.0, last = 1e300;
  for (int k = 1; k < 60; ++k) {
    const double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    const double next = term * f;
    if (std::abs(next) > last) break;  // asymptotic series starts diverging
    last = std::abs(next);
    term = next;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_series(int nu, double x) {
  const double h = -0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= h / (m * static_cast<double>(m + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  return x <= 12.0 ? bessel_series(0, x) : bessel_asymptotic(0, x);
}

double bessel_j1(double x) {
  const double s = x < 0.0 ? -1.0 : 1.0;
  x = std::abs(x);
  return s * (x <= 12.0 ? bessel_series(1, x) : bessel_asymptotic(1, x));
}

double bessel_j0_root(int k) {
  if (k < 1) throw InvalidParameter("root index must be >= 1");
  const double beta = (k - 0.25) * kPi;
  double x = beta + 1.0 / (8.0 * beta) - 31.0 / (384.0 * beta * beta * beta);
  double lo = beta - 0.5, hi = beta + 0.5;
  if (bessel_j0(lo) * bessel_j0(hi) > 0.0) {
    throw AccuracyError("J0 root bracket failed", std::abs(bessel_j0(x)));
  }
  const bool lo_positive = bessel_j0(lo) > 0.0;
  for (int it = 0; it < 100; ++it) {
    const double fx = bessel_j0(x);
    if ((fx > 0.0) == lo_positive) lo = x; else hi = x;
    double next = x + fx / bessel_j1(x);  // J0' = -J1
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-14 * x) return next;
    x = next;
  }
  return x;
}

}  // namespace odp
