#include <doctest.h>

#include <cmath>
#include <sstream>

#include "odp/error.hpp"
#include "odp/floquet.hpp"
#include "odp/josephson.hpp"

using namespace odp;

namespace {
double closed_form(double Omega, double eps) {
  return eps * eps * Omega * Omega / (2.0 * (Omega * Omega + 1.0));
}
}  // namespace

TEST_SUITE("josephson") {
  TEST_CASE("unpumped junction") {
    const auto t = fourier_tables(0.0, 0.5);
    CHECK(t.beta == doctest::Approx(1.0));
    CHECK(std::abs(t.b(0) - 1.0) < 1e-10);
    CHECK(std::abs(t.b(1)) < 1e-10);
    for (double Om : {0.3, 1.0, 2.7}) {
      CHECK(std::abs(absorption_series(t, Om, 1e-3).a_jj - closed_form(Om, 1e-3)) < 1e-12);
    }
    const auto d = absorption_direct(0.0, 0.5, 1.0, 1e-3);
    CHECK(std::abs(d.a_jj - closed_form(1.0, 1e-3)) / closed_form(1.0, 1e-3) < 1e-4);
  }

  TEST_CASE("tables of a pumped junction") {
    const auto t = fourier_tables(1.5, 0.149);
    CHECK(t.beta == doctest::Approx(avg_cos(DriveSpec::sinusoidal(1.5, 0.149))).epsilon(1e-8));
    CHECK(t.convolution <= 1e-8);
    CHECK(t.cross_check <= 1e-6);
    CHECK(t.b(0).real() == doctest::Approx(41.22).epsilon(1e-3));
    CHECK(std::abs(t.b(t.K + 1)) == 0.0);
  }

  TEST_CASE("series and direct routes agree off commensurate probes") {
    const auto t = fourier_tables(1.5, 0.149);
    for (double Om : {0.7, 1.1}) {
      const double s = absorption_series(t, Om, 1e-3).a_jj;
      const double d = absorption_direct(1.5, 0.149, Om, 1e-3).a_jj;
      CHECK(std::abs(s - d) < 0.01 * std::abs(s));
    }
  }

  TEST_CASE("quadratic scaling in the probe amplitude") {
    const double a1 = absorption_direct(1.57, 0.13, 0.27, 2e-3).a_jj;
    const double a2 = absorption_direct(1.57, 0.13, 0.27, 1e-3).a_jj;
    CHECK(a1 / a2 == doctest::Approx(4.0).epsilon(2e-3));
  }

  TEST_CASE("pole proximity is detected") {
    FourierTables t;
    t.omega = 0.5;
    t.beta = 0.0;
    t.K = 1;
    t.b_coef = {0.1, 1.0, 0.1};
    t.d_coef = {0.1, 1.0, 0.1};
    CHECK_THROWS_AS(absorption_series(t, 1.0, 1e-3), PoleProximityError);
  }

  TEST_CASE("odd symmetry leaves only odd pump harmonics") {
    CHECK(even_harmonic_fraction(1.5, 0.3) < 1e-12);
  }

  TEST_CASE("probe grid avoids even harmonics") {
    const auto g = probe_grid(0.2, 2.0, 4);
    REQUIRE_FALSE(g.empty());
    for (double Om : g) {
      const double r = Om / 0.4;
      CHECK(std::abs(r - std::round(r)) > 0.1);
    }
    CHECK(g.back() <= 2.0);
  }

  TEST_CASE("gain scan flags gain next to an exchange of stability") {
    GainScanOptions o;
    o.per_harmonic = 40;
    const auto pts = gain_scan({1.2, 1.3}, {0.15}, {}, o);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].gain);
    CHECK_FALSE(pts[1].gain);
    CHECK(pts[0].nearest_critical_f == doctest::Approx(1.162273614).epsilon(1e-6));
    std::ostringstream os;
    write_gain_csv(os, pts);
    CHECK(os.str().rfind("f,omega,min_A,gain,nearest_critical_f\n", 0) == 0);
  }

  TEST_CASE("argument checks") {
    CHECK_THROWS_AS(absorption_direct(1.0, 0.2, 0.5, 0.1), InvalidParameter);
    CHECK_THROWS_AS(fourier_tables(-1.0, 0.2), InvalidParameter);
  }
}
