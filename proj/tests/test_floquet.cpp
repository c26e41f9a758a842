#include <doctest.h>

#include <cmath>
#include <numbers>

#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/odecore.hpp"

using namespace odp;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("floquet") {
  TEST_CASE("undriven closed form") {
    // F = 0, G = 1: U(T/2) = diag(e^{-T/4}, e^{T/4}), reflected trace -2 sinh(T/4).
    const double w = 0.3;
    const auto half = half_monodromy(DriveSpec::sinusoidal(0.0, w));
    CHECK(half.trace == doctest::Approx(-2.0 * std::sinh(2 * kPi / w / 4)).epsilon(1e-9));
    CHECK(std::abs(half.det() + 1.0) < 1e-8);
  }

  TEST_CASE("critical amplitudes at omega 0.3") {
    const auto fs = critical_amplitudes(0.3, 0.5, 3.2, {}, {0, 1e-9, 1});
    REQUIRE(fs.size() == 3);
    CHECK(fs[0] == doctest::Approx(1.355886568).epsilon(1e-8));
    CHECK(fs[1] == doctest::Approx(2.118066091).epsilon(1e-8));
    CHECK(fs[2] == doctest::Approx(2.955829832).epsilon(1e-8));
  }

  TEST_CASE("critical amplitudes at lower frequencies") {
    const auto a = critical_amplitudes(0.1, 1.0, 2.0);
    REQUIRE(a.size() >= 3);
    CHECK(a[0] == doctest::Approx(1.105281).epsilon(2e-6));
    CHECK(a[1] == doctest::Approx(1.324347).epsilon(2e-6));
    const auto b = critical_amplitudes(0.2, 1.0, 2.3);
    REQUIRE(b.size() == 3);
    CHECK(b[2] == doctest::Approx(2.217995).epsilon(2e-6));
  }

  TEST_CASE("determinant and start-phase invariance") {
    const auto d = DriveSpec::make(0.45, {{1.8, 1, 0.2}, {0.5, 3, 1.1}}, {{1.0, 0, 0.0}, {0.35, 2, 0.4}});
    const auto h0 = half_monodromy(d);
    CHECK(std::abs(h0.det() + 1.0) < 1e-8);
    for (double s : {0.7, 3.1, 9.0}) {
      CHECK(std::abs(half_monodromy(d, {}, s).trace - h0.trace) < 1e-7 * std::max(1.0, std::abs(h0.trace)));
    }
  }

  TEST_CASE("average cosine equals twice the exponent") {
    for (double f : {0.8, 1.7, 2.5}) {
      const auto d = DriveSpec::sinusoidal(f, 0.5);
      const double exact = avg_cos(d);
      CHECK(exact == doctest::Approx(2.0 * std::abs(exponents(half_monodromy(d)).b0)).epsilon(1e-12));
      CHECK(std::abs(avg_cos_trajectory(d) - exact) < 1e-6);
    }
  }

  TEST_CASE("floquet pair normalisation") {
    const FloquetAnalysis fa(DriveSpec::sinusoidal(1.7, 0.3));
    const auto& p = fa.pair();
    CHECK(p.init[0].x * p.init[1].y - p.init[0].y * p.init[1].x == doctest::Approx(1.0));
    CHECK(std::hypot(p.init[0].x, p.init[0].y) == doctest::Approx(std::hypot(p.init[1].x, p.init[1].y)));
    CHECK(p.multiplier[0] * p.multiplier[1] == doctest::Approx(-1.0));
    // The stable orbit belongs to the growing solution.
    CHECK(fa.stable().mean_gcos() == doctest::Approx(2.0 * std::abs(fa.exps().b0)).epsilon(1e-8));
    CHECK(fa.unstable().mean_gcos() == doctest::Approx(-2.0 * std::abs(fa.exps().b0)).epsilon(1e-8));
  }

  TEST_CASE("branch switch across the third exchange") {
    const FloquetAnalysis below(DriveSpec::sinusoidal(2.9, 0.3));
    const FloquetAnalysis above(DriveSpec::sinusoidal(3.0, 0.3));
    const double m_below = std::remainder(below.stable().mean_theta(), 2 * kPi);
    const double m_above = std::remainder(above.stable().mean_theta(), 2 * kPi);
    CHECK(std::abs(m_below) < 1e-6);
    CHECK(std::abs(std::abs(m_above) - kPi) < 1e-6);
    CHECK(below.rotation_index(below.stable_branch()).n == 2);
    CHECK(above.rotation_index(above.stable_branch()).n == 3);
  }

  TEST_CASE("stroboscopic fixed points") {
    const auto fp = stroboscopic_fixed_points(DriveSpec::sinusoidal(1.7, 0.3));
    CHECK_FALSE(fp.all_fixed);
    CHECK(fp.stable[0] != fp.stable[1]);
    CHECK(fp.residual[0] < 1e-8);
    CHECK(fp.residual[1] < 1e-8);
    CHECK(circular_distance(fp.theta_star[0], fp.theta_star[1]) > 1e-3);
  }

  TEST_CASE("marginal map at an exchange of stability") {
    const auto fs = critical_amplitudes(0.3, 2.9, 3.0, {}, {0, 1e-12, 1});
    REQUIRE(fs.size() == 1);
    const auto d = DriveSpec::sinusoidal(fs[0], 0.3);
    CHECK(marginal_map_check(d) < 1e-3);
    CHECK_THROWS_AS(FloquetAnalysis{d}, DegenerateError);
    CHECK(monodromy_report(d).critical);
  }

  TEST_CASE("first exchange at high frequency") {
    const auto fs = critical_amplitudes(3.0, 1.0, 8.0);
    REQUIRE_FALSE(fs.empty());
    CHECK(fs[0] == doctest::Approx(7.31071).epsilon(1e-5));
  }

  TEST_CASE("invalid ranges") {
    CHECK_THROWS_AS(critical_amplitudes(0.3, 2.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(critical_amplitudes(-0.3, 1.0, 2.0), InvalidParameter);
  }
}
