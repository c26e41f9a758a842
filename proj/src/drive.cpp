#include "odp/drive.hpp"

#include <cmath>
#include <numbers>

#include "odp/error.hpp"

namespace odp {

namespace {

void require_positive_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidParameter("drive frequency omega must be positive and finite");
  }
}

void require_finite(const std::vector<Harmonic>& terms) {
  for (const auto& h : terms) {
    if (!std::isfinite(h.amplitude) || !std::isfinite(h.phase)) {
      throw InvalidParameter("harmonic amplitude and phase must be finite");
    }
  }
}

}  // namespace

DriveSpec DriveSpec::make(double omega, std::vector<Harmonic> F, std::vector<Harmonic> G) {
  require_positive_omega(omega);
  require_finite(F);
  require_finite(G);
  for (const auto& h : F) {
    if (h.index <= 0 || h.index % 2 == 0) {
      throw InvalidParameter("F harmonics must have odd positive index, got " +
                             std::to_string(h.index));
    }
  }
  for (const auto& h : G) {
    if (h.index < 0 || h.index % 2 != 0) {
      throw InvalidParameter("G harmonics must have even non-negative index, got " +
                             std::to_string(h.index));
    }
  }
  return DriveSpec(omega, std::move(F), std::move(G));
}

DriveSpec DriveSpec::unchecked(double omega, std::vector<Harmonic> F, std::vector<Harmonic> G) {
  require_positive_omega(omega);
  return DriveSpec(omega, std::move(F), std::move(G));
}

DriveSpec DriveSpec::sinusoidal(double f, double omega) {
  if (!(f >= 0.0)) throw InvalidParameter("sinusoidal amplitude f must be non-negative");
  return make(omega, {{f, 1, 0.0}}, {{1.0, 0, 0.0}});
}

double DriveSpec::period() const { return 2.0 * std::numbers::pi / omega_; }

DriveValue DriveSpec::eval(double t) const {
  DriveValue v;
  for (const auto& h : f_) v.F += h.amplitude * std::sin(h.index * omega_ * t + h.phase);
  for (const auto& h : g_) v.G += h.amplitude * std::cos(h.index * omega_ * t + h.phase);
  return v;
}

DriveValue DriveSpec::derivative(double t) const {
  DriveValue v;
  for (const auto& h : f_) {
    const double k = h.index * omega_;
    v.F += h.amplitude * k * std::cos(k * t + h.phase);
  }
  for (const auto& h : g_) {
    const double k = h.index * omega_;
    v.G -= h.amplitude * k * std::sin(k * t + h.phase);
  }
  return v;
}

double DriveSpec::check_symmetry(int grid_points) const {
  if (grid_points < 8) throw InvalidParameter("check_symmetry needs at least 8 grid points");
  const double T = period();
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = T * i / grid_points;
    const auto a = eval(t);
    const auto b = eval(t + 0.5 * T);
    worst = std::max(worst, std::abs(b.F + a.F) + std::abs(b.G - a.G));
  }
  return worst;
}

DriveSpec DriveSpec::scaled(double lambda) const {
  auto F = f_;
  auto G = g_;
  for (auto& h : F) h.amplitude *= lambda;
  for (auto& h : G) h.amplitude *= lambda;
  return DriveSpec(omega_, std::move(F), std::move(G));
}

DriveSpec DriveSpec::time_shifted(double shift) const {
  auto F = f_;
  auto G = g_;
  for (auto& h : F) h.phase = std::remainder(h.phase + h.index * omega_ * shift, 2.0 * std::numbers::pi);
  for (auto& h : G) h.phase = std::remainder(h.phase + h.index * omega_ * shift, 2.0 * std::numbers::pi);
  return DriveSpec(omega_, std::move(F), std::move(G));
}

double DriveSpec::f_bound() const {
  double s = 0.0;
  for (const auto& h : f_) s += std::abs(h.amplitude);
  return s;
}

bool DriveSpec::f_nontrivial() const {
  for (const auto& h : f_) {
    if (h.amplitude != 0.0) return true;
  }
  return false;
}

nlohmann::json DriveSpec::to_json() const {
  auto terms = [](const std::vector<Harmonic>& hs) {
    auto arr = nlohmann::json::array();
    for (const auto& h : hs) arr.push_back({{"amp", h.amplitude}, {"k", h.index}, {"phase", h.phase}});
    return arr;
  };
  return {{"omega", omega_}, {"F", terms(f_)}, {"G", terms(g_)}};
}

DriveSpec DriveSpec::from_json(const nlohmann::json& j) {
  auto terms = [](const nlohmann::json& arr) {
    std::vector<Harmonic> hs;
    for (const auto& e : arr) {
      hs.push_back({e.at("amp").get<double>(), e.at("k").get<int>(), e.value("phase", 0.0)});
    }
    return hs;
  };
  try {
    return make(j.at("omega").get<double>(), terms(j.at("F")), terms(j.value("G", nlohmann::json::array())));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed drive JSON: ") + e.what());
  }
}

}  // namespace odp
