#pragma once

#include <complex>

namespace odp {

/// Complete elliptic integral of the second kind, E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt,
/// for m >= 0 with the principal square root, so Im E(m) >= 0 when m > 1.
std::complex<double> elliptic_E(double m);

inline constexpr double kMathieuQLimit = 1e4;

/// Characteristic value b_k(q) of the odd (sine-type) Mathieu functions se_k, k >= 1.
/// Throws AccuracyError if truncation does not settle below 1e-9 within the dimension cap.
double mathieu_b(int k, double q, double q_limit = kMathieuQLimit);

double bessel_j0(double x);
double bessel_j1(double x);

/// k-th positive zero of J0 (k >= 1), to 1e-10 or better.
double bessel_j0_root(int k);

}  // namespace odp
