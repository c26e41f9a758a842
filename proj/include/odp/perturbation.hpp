#pragma once

// Perturbed pendulum  theta' + G sin theta = F + eps H  and the slow-phase description
// theta = C[cos(psi/2) Phi_1 + sin(psi/2) Phi_2], whose exact form is psi' = -2 B0 sin psi
// - eps |Xi|^2 H and whose averaged form is psi' = -mu sin psi + eps sum a_k sin k psi.

#include <utility>
#include <variant>
#include <vector>

#include "odp/floquet.hpp"

namespace odp {

/// H = sum h_m sin(m theta); pairs are (m, h_m).
struct AngleHarmonics {
  std::vector<std::pair<int, double>> terms;
};

/// H = amplitude cos(omega2 t).
struct ExternalTone {
  double amplitude = 1.0;
  double omega2 = 1.0;
};

using Perturbation = std::variant<AngleHarmonics, ExternalTone>;

double perturbation_value(const Perturbation& h, double theta, double t);

/// Angular frequency and windowed-DFT magnitude of a spectral maximum.
struct SpectralPeak {
  double frequency = 0.0;
  double magnitude = 0.0;
};

/// Largest local maxima of the Hann-windowed, linearly detrended spectrum of a uniformly
/// sampled signal, restricted to angular frequencies in (0, max_frequency].
std::vector<SpectralPeak> spectral_peaks(const std::vector<double>& x, double dt,
                                         double max_frequency, int count);

/// psi from (t, theta) by inverting [P~_1 P~_2] (c, s) = (sin(theta/2), cos(theta/2)),
/// psi = 2 atan2(s, c); the returned series is unwrapped.
std::vector<double> extract_slow_phase(const FloquetAnalysis& fa, const std::vector<double>& t,
                                       const std::vector<double>& theta);

struct PerturbedOptions {
  int transient_periods = 0;
  int samples_per_period = 64;
  bool extract_slow_phase = true;  ///< needs a non-critical drive
  double max_frequency = 0.0;      ///< 0 means 4 omega
  int peak_count = 3;
};

struct PerturbedRun {
  std::vector<double> t;
  std::vector<double> theta;
  std::vector<double> psi;          ///< empty unless extracted
  std::vector<double> period_mean;  ///< <theta> of each recorded drive period
  double symmetry_deviation = 0.0;  ///< |<theta> of the last period mod pi|, nearest multiple
  std::vector<SpectralPeak> peaks;  ///< of psi when extracted, otherwise of sin theta
};

/// Integrates the perturbed pendulum for `periods` recorded drive periods after
/// opts.transient_periods discarded ones. eps must lie in [0, 0.2].
PerturbedRun integrate_perturbed(const DriveSpec& drive, const Perturbation& h, double eps,
                                 double theta0, int periods, const IntegratorConfig& cfg = {},
                                 const PerturbedOptions& opts = {});

struct PerturbationModel {
  std::vector<double> a;             ///< a_1 .. a_K
  std::vector<double> cos_residual;  ///< cosine projections k = 0 .. K (zero by symmetry)
  double mu = 0.0;                   ///< 2 B0
  double eps = 0.0;

  /// -mu sin psi + eps sum a_k sin k psi
  double rhs(double psi) const;
};

/// Averages |Xi|^2 H(theta(psi, t)) over a drive period and projects onto harmonics of psi.
/// H must satisfy H(-theta) = -H(theta), which the sine-sum form guarantees.
PerturbationModel averaged_coefficients(const FloquetAnalysis& fa, const AngleHarmonics& h,
                                        int k_max, double eps = 1.0, int t_grid = 512,
                                        int psi_grid = 256);
PerturbationModel averaged_coefficients(const DriveSpec& drive, const AngleHarmonics& h,
                                        int k_max, double eps = 1.0,
                                        const IntegratorConfig& cfg = {});

struct Equilibrium {
  double psi = 0.0;
  double slope = 0.0;  ///< d psi'/d psi at the equilibrium
  bool stable = false;
};

/// Zeros of -mu sin psi + eps sum a_k sin k psi on (-pi, pi], a[0] = a_1. Sorted by psi.
std::vector<Equilibrium> psirat_equilibria(double mu, const std::vector<double>& a, double eps);

struct PitchforkPoints {
  double mu_at_zero = 0.0;  ///< mu where psi = 0 changes stability
  double mu_at_pi = 0.0;    ///< mu where psi = pi changes stability
  bool supercritical_at_zero = false;
  bool supercritical_at_pi = false;
};

PitchforkPoints pitchfork_points(const std::vector<double>& a, double eps);

}  // namespace odp
