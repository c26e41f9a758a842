#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace odp {

/// One trigonometric term. F terms evaluate as amplitude * sin(index * omega * t + phase),
/// G terms as amplitude * cos(index * omega * t + phase).
struct Harmonic {
  double amplitude = 0.0;
  int index = 0;
  double phase = 0.0;
};

struct DriveValue {
  double F = 0.0;
  double G = 0.0;
};

/// Periodic forcing pair (F, G) of the overdamped pendulum  theta' + G(t) sin theta = F(t).
///
/// The typed constructor only admits odd harmonics in F and even (or zero) harmonics in G,
/// which makes F(t + T/2) = -F(t) and G(t + T/2) = G(t) hold by construction.
/// Immutable after construction.
class DriveSpec {
 public:
  /// Validating constructor; throws InvalidParameter on omega <= 0 or on a harmonic index
  /// outside the symmetry class.
  static DriveSpec make(double omega, std::vector<Harmonic> F, std::vector<Harmonic> G);

  /// Builds a drive without the harmonic-index restriction. Used to probe
  /// check_symmetry() with deliberately broken drives; omega must still be positive.
  static DriveSpec unchecked(double omega, std::vector<Harmonic> F, std::vector<Harmonic> G);

  /// F(t) = f sin(omega t), G(t) = 1.
  static DriveSpec sinusoidal(double f, double omega);

  double omega() const { return omega_; }
  double period() const;
  const std::vector<Harmonic>& f_terms() const { return f_; }
  const std::vector<Harmonic>& g_terms() const { return g_; }

  DriveValue eval(double t) const;
  /// Time derivatives (F', G').
  DriveValue derivative(double t) const;

  /// max over a uniform grid on [0, T) of |F(t+T/2) + F(t)| + |G(t+T/2) - G(t)|.
  double check_symmetry(int grid_points) const;

  /// Drive with F -> lambda F and G -> lambda G.
  DriveSpec scaled(double lambda) const;
  /// Drive evaluated at t + shift (phases advanced accordingly).
  DriveSpec time_shifted(double shift) const;

  /// Largest |F| amplitude bound: sum of |amplitudes|.
  double f_bound() const;
  bool f_nontrivial() const;

  nlohmann::json to_json() const;
  static DriveSpec from_json(const nlohmann::json& j);

 private:
  DriveSpec(double omega, std::vector<Harmonic> F, std::vector<Harmonic> G)
      : omega_(omega), f_(std::move(F)), g_(std::move(G)) {}

  double omega_ = 1.0;
  std::vector<Harmonic> f_;
  std::vector<Harmonic> g_;
};

}  // namespace odp
