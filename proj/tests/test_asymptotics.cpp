#include <doctest.h>

#include <cmath>

#include "critbranch/asymptotics.hpp"
#include "critbranch/errors.hpp"
#include "critbranch/laws.hpp"

using namespace critbranch;

namespace {
const OffspringLaw kF = OffspringLaw::canonical(0.5, 1.0);
const ImmigrationLaw kH = ImmigrationLaw::canonical(0.4, 0.1);
}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("M") {
    CHECK(M_gf(kF, 0.5) == doctest::Approx(0.8284271247461901).epsilon(1e-10));
    CHECK(M_gf_closed(kF, 0.5) == doctest::Approx(0.8284271247461901).epsilon(1e-14));
    const OffspringLaw g = OffspringLaw::canonical(0.2, 0.2);
    CHECK(M_gf_closed(g, 0.3) == doctest::Approx(1.8485230946444839).epsilon(1e-14));
    CHECK_THROWS_AS(M_gf_closed(OffspringLaw::finite({1.0, -2.0, 1.0}), 0.5), DomainError);

    const auto mu = M_coefficients_closed(0.5, 1.0, 5);
    const double expect[] = {0.0, 1.0, 0.75, 0.625, 0.546875, 0.4921875};
    for (std::size_t j = 0; j <= 5; ++j) CHECK(mu[j] == doctest::Approx(expect[j]).epsilon(1e-15));
    const auto ser = M_series(kF, 5);
    for (std::size_t j = 0; j <= 5; ++j) CHECK(ser.coeffs[j] == doctest::Approx(expect[j]).epsilon(1e-12));
  }

  TEST_CASE("U and pi for the canonical pair") {
    const RegimeParams reg = classify(kF, kH);
    CHECK(reg.gamma == doctest::Approx(-0.1));
    const SlowRatio r = slow_ratio(kF, kH);
    CHECK_NOTHROW(require_eligible(reg, r));
    CHECK(U_gf(reg, r, 0.5) == doctest::Approx(2.9205544036918876).epsilon(1e-12));
    CHECK(log_pi_gf(kF, kH, 0.5) == doctest::Approx(std::pow(2.0, 0.1) - 1.0).epsilon(1e-10));

    const double pj[] = {1.0, 0.1, 0.06, 0.044166666666666667, 0.035479166666666667, 0.029921,
                         0.026028476388888889, 0.023134494186507937, 0.020889398883928571, 0.019091351641719026,
                         0.017615272036268877};
    const auto pi = pi_series(kF, kH, 10);
    for (std::size_t j = 0; j <= 10; ++j) CHECK(pi.coeffs[j] == doctest::Approx(pj[j]).epsilon(1e-12));
  }

  TEST_CASE("survival and local probabilities") {
    CHECK(theorem1_q(0.2, 0.9, NormalizerN::half_log(), 50.0) ==
          doctest::Approx(7.3187671141743751e-5).epsilon(1e-13));
    CHECK(3.0 * theorem2_predicted(1.0, 3.0, 1.0) == doctest::Approx(2.0986122886681097).epsilon(1e-15));
  }

  TEST_CASE("conditioned system") {
    const auto c = conditioned_gf(kF, 100.0, 0.5);
    CHECK(c.slack == doctest::Approx(0.80239489889142717).epsilon(1e-9));
    CHECK(c.M == doctest::Approx(0.8284271247461901).epsilon(1e-10));
  }

  TEST_CASE("Tauberian partial sums") {
    const auto rep = tauberian_partial_sums(kF, {1e4});
    REQUIRE(rep.ratio.size() == 1);
    CHECK(rep.ratio[0] == doctest::Approx(0.99117523019860621).epsilon(1e-12));
  }
}
