#pragma once

// Small-signal absorption of a Josephson point contact,
//   theta' + sin theta = f sin(omega t) + eps cos(Omega t),
// linearised about the stable symmetric pump orbit. A_JJ = eps <cos(Omega t) d(delta theta)/dt>,
// so A_JJ < 0 is gain.

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "odp/ode.hpp"

namespace odp {

/// Fourier coefficients of exp(+c(t)) (b_k) and exp(-c(t)) (d_k), c = int_0^t (cos theta - beta),
/// at frequencies 2 k omega, k = -K..K.
struct FourierTables {
  double f = 0.0;
  double omega = 0.0;
  double beta = 0.0;  ///< <cos theta> on the stable orbit
  int K = 0;
  std::vector<std::complex<double>> b_coef;
  std::vector<std::complex<double>> d_coef;
  double cross_check = 0.0;     ///< pendulum-orbit vs linear-system discrepancy, relative to scale
  double convolution = 0.0;     ///< max_{|n| <= K/2} |sum_k b_{n-k} d_k - delta_n0|
  double last_term = 0.0;       ///< max |b_{+-K}|, |d_{+-K}| relative to scale

  std::complex<double> b(int k) const;  ///< zero outside |k| <= K
  std::complex<double> d(int k) const;
};

struct FourierOptions {
  int K = 32;                  ///< starting truncation, doubled as needed
  int max_K = 1024;
  double convolution_tol = 1e-8;
  double last_term_tol = 1e-10;
  double cross_tol = 1e-6;
};

/// Throws DegenerateError near an exchange of stability, ConsistencyError when the two routes
/// disagree, AccuracyError when max_K is reached.
FourierTables fourier_tables(double f, double omega, const IntegratorConfig& cfg = {},
                             const FourierOptions& opts = {});

struct SeriesValue {
  double a_jj = 0.0;
  double imag = 0.0;       ///< imaginary part of the truncated sum
  double last_term = 0.0;  ///< magnitude of the |k| = K terms
};

/// Truncated series for A_JJ, including the eps^2 / 2 prefactor. Throws PoleProximityError
/// when a denominator falls below 1e-12 and ConsistencyError if the imaginary residual
/// exceeds 1e-10.
SeriesValue absorption_series(const FourierTables& tables, double Omega, double eps);

struct DirectConfig {
  int min_pump_periods = 200;
  int transient_pump_periods = 20;
  double max_transient = 2e5;  ///< time budget for 20 / beta
  IntegratorConfig ode{1e-11, 1e-14};
};

struct DirectValue {
  double a_jj = 0.0;
  double half_difference = 0.0;  ///< |A(first half) - A(second half)| of the window
  double window = 0.0;
  bool settled = true;           ///< false: the transient budget was too short (undecided)
};

/// Two-tone simulation of the junction, probe effect isolated against the unprobed orbit.
DirectValue absorption_direct(double f, double omega, double Omega, double eps,
                              const DirectConfig& cfg = {});

struct ProfileSample {
  double Omega = 0.0;
  double a_jj = 0.0;
};

struct AbsorptionProfile {
  double f = 0.0;
  double omega = 0.0;
  double eps = 0.0;
  std::string method;
  std::vector<ProfileSample> samples;
};

/// Probe frequencies (j + 1/2) * 2 omega / per_harmonic up to omega_max; never on 2 k omega.
std::vector<double> probe_grid(double omega, double omega_max, int per_harmonic);

AbsorptionProfile profile_series(const FourierTables& tables, const std::vector<double>& Omegas,
                                 double eps);
AbsorptionProfile profile_direct(double f, double omega, const std::vector<double>& Omegas,
                                 double eps, const DirectConfig& cfg = {}, int workers = 1);

struct GainPoint {
  double f = 0.0;
  double omega = 0.0;
  double min_a = 0.0;  ///< min over the probe grid of A_JJ / eps^2
  double beta = 0.0;
  bool gain = false;
  bool critical = false;  ///< tables unavailable (at an exchange of stability)
  double nearest_critical_f = 0.0;  ///< NaN when none in range
};

struct GainScanOptions {
  double omega_max_multiple = 11.5;
  int per_harmonic = 200;
  int workers = 1;
  FourierOptions fourier{};
};

std::vector<GainPoint> gain_scan(const std::vector<double>& f_grid,
                                 const std::vector<double>& omega_grid,
                                 const IntegratorConfig& cfg = {},
                                 const GainScanOptions& opts = {});

/// Fraction of the power of theta' on the stable pump orbit carried by even multiples of omega
/// (harmonics 0..harmonics).
double even_harmonic_fraction(double f, double omega, const IntegratorConfig& cfg = {},
                              int harmonics = 64);

void write_profile_csv(std::ostream& os, const AbsorptionProfile& p);
void write_gain_csv(std::ostream& os, const std::vector<GainPoint>& pts);

}  // namespace odp
