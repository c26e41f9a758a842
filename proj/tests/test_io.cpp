#include <doctest.h>

#include <sstream>
#include <string>

#include "odp/error.hpp"
#include "odp/io.hpp"

using namespace odp;

TEST_SUITE("io") {
  TEST_CASE("config header") {
    std::ostringstream os;
    write_config_header(os, {{"omega", 0.3}, {"command", "bifurcation"}});
    CHECK(os.str() == std::string("# odpendulum ") + version() +
                          "\n# config: {\"command\":\"bifurcation\",\"omega\":0.3}\n");
  }

  TEST_CASE("bifurcation sweep is worker independent") {
    const auto a = bifurcation_sweep(0.3, 1.0, 3.0, 8, {}, 1);
    const auto b = bifurcation_sweep(0.3, 1.0, 3.0, 8, {}, 3);
    std::ostringstream sa, sb;
    write_bifurcation_csv(sa, a);
    write_bifurcation_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("f,theta_star_1,theta_star_2,stability_1,stability_2,trM,B0\n", 0) == 0);
    for (const auto& r : a) CHECK(r.stability[0] + r.stability[1] == 1);
    CHECK_THROWS_AS(bifurcation_sweep(0.3, 2.0, 1.0, 4), InvalidParameter);
  }

  TEST_CASE("critical curve rows") {
    const auto rows = critical_curve_rows(TraceMethod::Numeric, {0.3}, 3.2, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].branch_index == 1);
    CHECK(rows[1].f == doctest::Approx(2.118066091).epsilon(1e-7));
    std::ostringstream os;
    write_critical_csv(os, rows);
    CHECK(os.str().find("0.3,1.35588656") != std::string::npos);
  }

  TEST_CASE("gnuplot script") {
    const auto s = gnuplot_script("out.csv", "T", "x", "y", 1, {2, 3});
    CHECK(s.find("'out.csv' using 1:2") != std::string::npos);
    CHECK(s.find("'out.csv' using 1:3") != std::string::npos);
  }
}
