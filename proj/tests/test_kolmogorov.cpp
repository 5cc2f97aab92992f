#include <doctest.h>

#include <cmath>

#include "critbranch/errors.hpp"
#include "critbranch/kolmogorov.hpp"
#include "critbranch/laws.hpp"

using namespace critbranch;

TEST_SUITE("kolmogorov") {
  TEST_CASE("closed form of the canonical law") {
    const auto z = closed_form_F(0.5, 1.0, 1.0, 0.0);
    CHECK(z.R == doctest::Approx(1.0 / 2.25).epsilon(1e-15));
    CHECK(z.F == doctest::Approx(0.55555555555555556).epsilon(1e-15));
    const auto at0 = closed_form_F(0.5, 1.0, 0.0, 0.3);
    CHECK(at0.F == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_THROWS_AS(closed_form_F(OffspringLaw::finite({1.0, -2.0, 1.0}), 1.0, 0.0), DomainError);
  }

  TEST_CASE("binary critical survival is 1/(1 + t)") {
    const OffspringLaw f = OffspringLaw::finite({1.0, -2.0, 1.0});
    for (double t : {0.5, 3.0, 40.0}) {
      const auto r = solve_F(f, t, 0.0);
      CHECK(r.R == doctest::Approx(1.0 / (1.0 + t)).epsilon(1e-9));
    }
    const auto grid = solve_F_grid(f, {1.0, 2.0, 4.0}, 0.0);
    REQUIRE(grid.size() == 3);
    CHECK(grid[2].R == doctest::Approx(0.2).epsilon(1e-9));
  }

  TEST_CASE("solver matches the closed form on a stable law") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    for (double s : {0.0, 0.5, 0.9}) {
      const auto num = solve_F(f, 10.0, s);
      const auto ref = closed_form_F(f, 10.0, s);
      CHECK(std::abs(num.R / ref.R - 1.0) < 1e-8);
    }
  }

  TEST_CASE("series coefficients at t = 1") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    const auto sol = solve_F_series(f, 1.0, 8);
    REQUIRE(sol.F_series);
    const double expect[] = {0.55555555555555556, 0.2962962962962963, 0.074074074074074074, 0.028806584362139918,
                             0.014231824417009602};
    for (std::size_t j = 0; j < 5; ++j) CHECK((*sol.F_series)[j] == doctest::Approx(expect[j]).epsilon(1e-8));
  }

  TEST_CASE("mean of the immigration system from zero") {
    const ImmigrationLaw h = ImmigrationLaw::finite({-1.0, 1.0});
    CHECK(mean_X(h, 0.0, 3.0) == doctest::Approx(3.0));
    CHECK(mean_X(h, -0.5, 2.0) == doctest::Approx((std::exp(-1.0) - 1.0) / -0.5));
    CHECK_THROWS_AS(mean_X(ImmigrationLaw::canonical(0.4, 0.1), 0.0, 1.0), InfiniteMomentError);
  }
}
