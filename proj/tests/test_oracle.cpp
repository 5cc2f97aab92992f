#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numeric>

#include "critbranch/laws.hpp"
#include "critbranch/oracle.hpp"

using namespace critbranch;

TEST_SUITE("oracle") {
  TEST_CASE("rows are substochastic and clipping is reported") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    const TruncatedGenerator gen = build_generator(f, nullptr, 100);
    CHECK(gen.clipped_mass_rate > 0.0);
    for (std::size_t i = 0; i <= 100; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= 100; ++j) s += gen.Q(i, j);
      CHECK(s == doctest::Approx(-gen.clipped_rate[i]).epsilon(1e-9).scale(1.0));
    }
    const auto row = uniformized_row(gen, 5, 2.0);
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    CHECK(total <= 1.0 + 1e-12);
    CHECK(total > 0.9);
  }

  TEST_CASE("Chapman-Kolmogorov") {
    const OffspringLaw f = OffspringLaw::finite({1.0, -2.0, 1.0});
    const ImmigrationLaw h = ImmigrationLaw::finite({-0.5, 0.5});
    const TruncatedGenerator gen = build_generator(f, &h, 60);
    const DenseMatrix P1 = uniformized_transition(gen, 1.0);
    const DenseMatrix P2 = uniformized_transition(gen, 2.0);
    const auto row = uniformized_row(gen, 3, 3.0);
    double worst = 0.0;
    for (std::size_t j = 0; j <= 60; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k <= 60; ++k) v += P1(3, k) * P2(k, j);
      worst = std::max(worst, std::abs(v - row[j]));
    }
    CHECK(worst <= 1e-8);
  }

  TEST_CASE("parallel row equals the serial reference bit for bit") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    const TruncatedGenerator gen = build_generator(f, nullptr, 200);
    UniformizationInfo a, b;
    const auto p = uniformized_row(gen, 1, 5.0, 1e-10, &a);
    const auto s = uniformized_row_serial(gen, 1, 5.0, 1e-10, &b);
    REQUIRE(p.size() == s.size());
    CHECK(std::memcmp(p.data(), s.data(), p.size() * sizeof(double)) == 0);
    CHECK(a.terms == b.terms);
  }

  TEST_CASE("binary critical extinction by time t") {
    const OffspringLaw f = OffspringLaw::finite({1.0, -2.0, 1.0});
    const TruncatedGenerator gen = build_generator(f, nullptr, 400);
    const auto row = uniformized_row(gen, 1, 4.0);
    CHECK(row[0] == doctest::Approx(4.0 / 5.0).epsilon(1e-8));
  }
}
