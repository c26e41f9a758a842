#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/superlattice.hpp"

using namespace odp;

TEST_SUITE("superlattice") {
  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((SlParams{1.0, 0.5, -0.1}.validate()), InvalidParameter);
    CHECK_THROWS_AS((SlParams{1.0, 0.0, 0.2}.validate()), InvalidParameter);
    CHECK_THROWS_AS(integrate_balance({1.0, 0.5, 0.2}, 1.0, 1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(pendulum_limit_check({1.0, 0.5, 0.5}), InvalidParameter);
  }

  TEST_CASE("conservation without scattering") {
    const SlParams p{1.3, 0.7, 0.0};
    const auto run = integrate_balance(p, 0.3, -0.6, 0.0, 10 * 2 * M_PI / 0.7);
    CHECK(std::abs(std::hypot(run.v_end, run.w_end) - std::hypot(0.3, -0.6)) < 1e-8);
  }

  TEST_CASE("relaxation to equilibrium without field") {
    const auto run = integrate_balance({0.0, 0.5, 0.2}, 0.4, 0.2, 0.0, 200.0);
    CHECK(std::abs(run.v_end) < 1e-6);
    CHECK(std::abs(run.w_end + 1.0) < 1e-6);
    const auto lim = pendulum_limit_check({0.0, 0.5, 0.2});
    CHECK(lim.a_mean == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(lim.theta_mean) < 1e-6);
  }

  TEST_CASE("pendulum limit at small scattering") {
    const auto r = pendulum_limit_check({1.5, 0.5, 0.05});
    CHECK(r.a_variation < 1e-3);
    CHECK(r.phase_error < 1e-4);
    CHECK(r.k_mean == doctest::Approx(r.a_mean / 0.05 + 0.05 / r.a_mean));
  }

  TEST_CASE("normalized pendulum quantities") {
    const double ac = normalized_avg_cos(1.5, 0.5);
    CHECK(ac == doctest::Approx(avg_cos(DriveSpec::sinusoidal(1.5, 0.5))).epsilon(1e-8));
    CHECK(normalized_branch_index(0.5, 0.3) == 0);
    CHECK(normalized_branch_index(1.7, 0.3) == 1);
    CHECK(normalized_branch_index(3.0, 0.3) == 3);
  }

  TEST_CASE("self-consistent K roots") {
    const auto zero = selfconsistent_K({0.0, 0.5, 0.2});
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].K == doctest::Approx(5.2).epsilon(1e-5));
    CHECK(zero[0].A == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(zero[0].n == 0);
    const auto multi = selfconsistent_K({3.375, 0.35, 0.2});
    REQUIRE(multi.size() == 5);
    CHECK(multi.front().K == doctest::Approx(2.101443).epsilon(1e-5));
    CHECK(multi.back().K == doctest::Approx(4.402666).epsilon(1e-5));
    for (const auto& r : multi) {
      CHECK(r.K == doctest::Approx(r.A / 0.2 + 0.2 / r.A).epsilon(1e-3));
    }
  }

  TEST_CASE("dataset branch count matches the rotation index") {
    const std::vector<double> fs{0.5, 1.2, 1.7, 2.5, 3.0, 3.5};
    const std::vector<double> ws{0.3, 0.45};
    const auto data = NormalizedDataset::compute(fs, ws);
    for (const auto& pt : data.points()) {
      if (pt.critical) continue;
      const FloquetAnalysis fa(DriveSpec::sinusoidal(pt.f, pt.omega));
      CHECK(pt.n == fa.rotation_index(fa.stable_branch()).n);
      CHECK(pt.b0 == doctest::Approx(fa.exps().b0).epsilon(1e-9));
    }
  }

  TEST_CASE("branch map scaling and overlaps") {
    const std::vector<double> fs{1.0, 1.5, 2.0, 2.5, 3.0};
    const auto map = branch_map(0.2, fs, {0.3, 0.4});
    REQUIRE_FALSE(map.empty());
    for (const auto& b : map) {
      CHECK(b.A >= 0.2);
      CHECK(b.s == doctest::Approx(b.A / 0.2 + 0.2 / b.A));
      CHECK(b.u0 == doctest::Approx(b.s * b.f));
      CHECK(b.Omega == doctest::Approx(b.s * b.omega));
    }
    const auto ns = branch_indices(map);
    CHECK(std::is_sorted(ns.begin(), ns.end()));
    for (const auto& c : overlap_cells(map, 10.0, 10.0)) CHECK(c.n.size() >= 2);
    CHECK_THROWS_AS(overlap_cells(map, 0.0, 1.0), InvalidParameter);
  }

  TEST_CASE("rectification near the lowest boundary") {
    const auto sym = detect_rectification({2.0, 0.45, 0.2});
    CHECK(sym.status == RectifyStatus::Symmetric);
    CHECK_FALSE(sym.broken);
    const auto brk = detect_rectification({3.52, 0.45, 0.2});
    CHECK(brk.broken);
    CHECK(std::abs(brk.v_dc) > 1e-3);
    CHECK(brk.u_dc == doctest::Approx(-brk.v_dc / 0.2).epsilon(1e-6));
    std::ostringstream os;
    write_rectification_header(os);
    write_rectification_row(os, {3.52, 0.45, 0.2}, brk);
    CHECK(os.str().rfind("u0,Omega,gamma,v_dc,u_dc,broken,n_guess\n3.52,", 0) == 0);
  }
}
