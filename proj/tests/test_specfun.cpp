#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <cmath>
#include <numbers>

#include "odp/error.hpp"
#include "odp/specfun.hpp"

using namespace odp;

TEST_SUITE("specfun") {
  TEST_CASE("elliptic E below one against Boost") {
    for (double m : {0.0, 0.1, 0.5, 0.9, 0.999}) {
      const auto e = elliptic_E(m);
      CHECK(e.real() == doctest::Approx(boost::math::ellint_2(std::sqrt(m))).epsilon(1e-12));
      CHECK(e.imag() == 0.0);
    }
    CHECK(elliptic_E(1.0).real() == doctest::Approx(1.0));
  }

  TEST_CASE("elliptic E above one") {
    // Reference values from an arbitrary-precision library.
    const auto e4 = elliptic_E(4.0);
    CHECK(e4.real() == doctest::Approx(0.40629888645996).epsilon(1e-11));
    CHECK(e4.imag() == doctest::Approx(1.3438542313871).epsilon(1e-11));
    const auto e9 = elliptic_E(9.0);
    CHECK(e9.real() == doctest::Approx(0.265596407637276).epsilon(1e-11));
    CHECK(e9.imag() == doctest::Approx(2.49834812773252).epsilon(1e-11));
    CHECK(elliptic_E(2.25).imag() > 0.0);
    CHECK_THROWS_AS(elliptic_E(-0.5), InvalidParameter);
  }

  TEST_CASE("Mathieu b_k") {
    // Reference values from an independent Mathieu implementation.
    CHECK(mathieu_b(1, 1.0) == doctest::Approx(-0.11024881699209521).epsilon(1e-10));
    CHECK(mathieu_b(2, 1.0) == doctest::Approx(3.917024772998471).epsilon(1e-10));
    CHECK(mathieu_b(1, 10.0) == doctest::Approx(-13.936552479250087).epsilon(1e-10));
    CHECK(mathieu_b(3, 25.0) == doctest::Approx(-3.520941526621369).epsilon(1e-9));
    CHECK(mathieu_b(5, 100.0) == doctest::Approx(-30.95010394723808).epsilon(1e-9));
    CHECK(mathieu_b(2, 400.0) == doctest::Approx(-681.2645224287814).epsilon(1e-9));
    CHECK(mathieu_b(3, 0.0) == doctest::Approx(9.0));
    CHECK_THROWS_AS(mathieu_b(0, 1.0), InvalidParameter);
  }

  TEST_CASE("Bessel functions and zeros against Boost") {
    for (double x : {0.3, 2.5, 11.0}) {
      CHECK(bessel_j0(x) == doctest::Approx(boost::math::cyl_bessel_j(0, x)).epsilon(1e-12));
      CHECK(bessel_j1(x) == doctest::Approx(boost::math::cyl_bessel_j(1, x)).epsilon(1e-12));
    }
    CHECK(bessel_j0_root(1) == doctest::Approx(2.4048255576957724).epsilon(1e-12));
    CHECK(bessel_j0_root(2) == doctest::Approx(5.520078110286311).epsilon(1e-12));
    CHECK(bessel_j0_root(10) == doctest::Approx(30.634606468431976).epsilon(1e-12));
  }
}
