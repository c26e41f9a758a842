#include <doctest.h>

#include <cmath>
#include <numbers>

#include "odp/error.hpp"
#include "odp/odecore.hpp"

using namespace odp;

TEST_SUITE("odecore") {
  TEST_CASE("harmonic oscillator and dense output") {
    auto rhs = [](double, const State<2>& y) { return State<2>{y[1], -y[0]}; };
    IntegratorConfig cfg{1e-11, 1e-13};
    const auto y = integrate<2>(rhs, 0.0, {0.0, 1.0}, 10.0, cfg);
    CHECK(y[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-9));
    const auto traj = integrate_dense<2>(rhs, 0.0, {0.0, 1.0}, 10.0, cfg);
    for (double t : {0.37, 2.5, 7.77}) CHECK(std::abs(traj(t)[0] - std::sin(t)) < 1e-8);
    const auto back = integrate<2>(rhs, 10.0, y, 0.0, cfg);
    CHECK(std::abs(back[1] - 1.0) < 1e-8);
  }

  TEST_CASE("tolerances are validated") {
    IntegratorConfig bad{0.5, 1e-12};
    CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  }

  TEST_CASE("angle mapping") {
    for (double th : {-3.0, -1.0, 0.0, 0.5, 3.1}) {
      CHECK(circular_distance(angle_of(linear_state_of(th)), th) < 1e-14);
    }
    CHECK(circular_distance(0.1, 2 * std::numbers::pi - 0.1) == doctest::Approx(0.2));
  }

  TEST_CASE("undriven pendulum relaxes to zero") {
    const auto d = DriveSpec::sinusoidal(0.0, 1.0);
    const auto run = integrate_pendulum(d, 2.0, 0.0, 20.0, {});
    CHECK(std::abs(run.theta_end) < 1e-7);
    // theta' = -sin theta has tan(theta/2) = tan(theta0/2) e^{-t}.
    const auto r1 = integrate_pendulum(d, 2.0, 0.0, 1.0, {});
    CHECK(r1.theta_end == doctest::Approx(2.0 * std::atan(std::tan(1.0) * std::exp(-1.0))));
  }

  TEST_CASE("pendulum and linear system agree") {
    const auto d = DriveSpec::make(0.4, {{1.7, 1, 0.0}, {0.3, 3, 0.5}}, {{1.0, 0, 0.0}, {0.2, 2, 0.0}});
    CHECK(pendulum_vs_linear_consistency(d, 0.7, 5, {}) < 1e-8);
    CHECK(pendulum_vs_linear_consistency(DriveSpec::sinusoidal(2.5, 0.3), -2.0, 3, {}) < 1e-8);
  }

  TEST_CASE("linear growth law") {
    const auto d = DriveSpec::sinusoidal(1.5, 0.5);
    const auto run = integrate_linear_sampled(d, {0.3, 0.9}, 0.0, 6.0, 7, {});
    REQUIRE(run.t.size() == 8);
    CHECK(run.t.back() == doctest::Approx(6.0));
    const auto q = integrate_linear(d, {0.3, 0.9}, 0.0, 6.0, {});
    CHECK(q.q1 == doctest::Approx(run.q.back().q1).epsilon(1e-9));
  }
}
