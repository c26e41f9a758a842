#include <doctest.h>

#include <cmath>
#include <numbers>

#include "odp/error.hpp"
#include "odp/perturbation.hpp"

using namespace odp;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("perturbation") {
  TEST_CASE("pitchfork points of the averaged equation") {
    const auto pp = pitchfork_points({0.0, -1.0}, 0.1);
    CHECK(std::abs(std::abs(pp.mu_at_zero) - 0.2) < 1e-12);
    CHECK(std::abs(std::abs(pp.mu_at_pi) - 0.2) < 1e-12);
    CHECK(pp.mu_at_zero == doctest::Approx(-pp.mu_at_pi));
    CHECK_FALSE(pp.supercritical_at_zero);
    CHECK(pitchfork_points({0.0, 1.0}, 0.1).supercritical_at_zero);
  }

  TEST_CASE("equilibria of the averaged equation") {
    // -mu sin psi - 0.1 sin 2 psi: intermediate root at cos psi = -5 mu.
    const double mu = 0.1;
    const auto eq = psirat_equilibria(mu, {0.0, -1.0}, 0.1);
    int interior = 0;
    for (const auto& e : eq) {
      const double g = -mu * std::sin(e.psi) - 0.1 * std::sin(2 * e.psi);
      CHECK(std::abs(g) < 1e-10);
      if (std::abs(std::sin(e.psi)) > 1e-6) {
        ++interior;
        CHECK(std::cos(e.psi) == doctest::Approx(-5 * mu));
        CHECK_FALSE(e.stable);
      }
    }
    CHECK(interior == 2);
    // Outside the window only 0 and pi remain.
    CHECK(psirat_equilibria(0.3, {0.0, -1.0}, 0.1).size() == 2);
  }

  TEST_CASE("averaged coefficients at an exchange of stability") {
    const auto fs = critical_amplitudes(0.3, 2.9, 3.0, {}, {0, 1e-9, 1});
    REQUIRE(fs.size() == 1);
    const auto model = averaged_coefficients(DriveSpec::sinusoidal(fs[0] + 1e-4, 0.3),
                                             AngleHarmonics{{{2, 1.0}}}, 4);
    REQUIRE(model.a.size() == 4);
    CHECK(model.a[1] < 0.0);
    for (double r : model.cos_residual) CHECK(std::abs(r) < 1e-8);
    CHECK(std::abs(model.mu) < 1e-2);
  }

  TEST_CASE("spectral peaks find a pure tone") {
    std::vector<double> x;
    const double dt = 0.05;
    for (int i = 0; i < 4000; ++i) x.push_back(0.3 * i * dt + std::sin(1.3 * i * dt));
    const auto peaks = spectral_peaks(x, dt, 4.0, 1);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].frequency == doctest::Approx(1.3).epsilon(0.01));
  }

  TEST_CASE("unperturbed run keeps the symmetric orbit") {
    PerturbedOptions o;
    o.transient_periods = 30;
    const auto run = integrate_perturbed(DriveSpec::sinusoidal(1.7, 0.3), AngleHarmonics{{{2, 1.0}}},
                                         0.0, 0.4, 2, {}, o);
    CHECK(run.symmetry_deviation < 1e-6);
    REQUIRE_FALSE(run.psi.empty());
    CHECK(std::abs(std::sin(run.psi.back())) < 1e-4);
  }

  TEST_CASE("symmetry-broken window near the third exchange") {
    PerturbedOptions o;
    o.transient_periods = 80;
    o.samples_per_period = 16;
    o.extract_slow_phase = false;
    double best = 0.0;
    for (double th0 : {-1.0, 0.3, 1.5}) {
      const auto r = integrate_perturbed(DriveSpec::sinusoidal(2.955, 0.3), AngleHarmonics{{{2, -1.0}}},
                                         0.05, th0, 2, {}, o);
      best = std::max(best, r.symmetry_deviation);
    }
    CHECK(best > 0.05);
  }

  TEST_CASE("perturbation strength is bounded") {
    CHECK_THROWS_AS(integrate_perturbed(DriveSpec::sinusoidal(1.0, 0.3), ExternalTone{1.0, 0.7}, 0.5,
                                        0.0, 1),
                    InvalidParameter);
    CHECK(perturbation_value(ExternalTone{2.0, 0.5}, 1.0, kPi) == doctest::Approx(2.0 * std::cos(0.5 * kPi)));
  }
}
