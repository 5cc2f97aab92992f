#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "critbranch/artifacts.hpp"

using namespace critbranch;

TEST_SUITE("artifacts") {
  TEST_CASE("figure presets and grid") {
    const auto p = figure_presets();
    REQUIRE(p.size() == 2);
    CHECK(p[0].nu == 0.2);
    CHECK(p[1].a0 == 0.2);
    const auto g = default_figure_grid();
    CHECK(g.size() == 191);
    CHECK(g.front() == 5.0);
    CHECK(g.back() == 100.0);
  }

  TEST_CASE("figure rows") {
    const auto rows = figure_data(0.2, 0.9, NormalizerChoice::HalfLog, {50.0});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].q == doctest::Approx(7.3187671141743751e-5).epsilon(1e-13));
    const double nt = 0.9 * 0.2 * 50.0;
    CHECK(rows[0].p1 == doctest::Approx(rows[0].q / nt * (1.0 + std::log(nt) / (0.04 * 50.0))).epsilon(1e-14));
  }

  TEST_CASE("report table") {
    const auto rows = report_table();
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].quantity == "R(t;s)");
    CHECK(rows[5].quantity == "M(s)");
    CHECK(rows[5].asymptotic == doctest::Approx(0.8284271247461901).epsilon(1e-14));
    CHECK(std::isnan(rows[3].reference));
  }

  TEST_CASE("CSV formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");

    const std::string path = "artifacts_test.csv";
    {
      CsvWriter w(path, {"solve", "0123456789abcdef", 4, "0.0.0"}, {"t", "label"});
      w.cell(1.5).cell(std::string("x,y")).end_row();
    }
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "# critbranch 0.0.0 command=solve config_hash=0123456789abcdef seed=4\nt,label\n1.5,\"x,y\"\n");
    std::remove(path.c_str());
  }
}
