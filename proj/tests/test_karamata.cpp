#include <doctest.h>

#include <cmath>

#include "critbranch/errors.hpp"
#include "critbranch/karamata.hpp"
#include "critbranch/laws.hpp"

using namespace critbranch;

TEST_SUITE("karamata") {
  TEST_CASE("solve_N") {
    const auto one = solve_N(KaramataFunction::constant(1.0), 0.5, 100.0);
    CHECK(one.value == doctest::Approx(1.0));

    // N = 0.9^{-5} for L = 0.9, nu = 0.2, independent of t.
    const auto a = solve_N(KaramataFunction::constant(0.9), 0.2, 10.0);
    const auto b = solve_N(KaramataFunction::constant(0.9), 0.2, 1e5);
    CHECK(a.value == doctest::Approx(1.6935087808430286).epsilon(1e-12));
    CHECK(a.value == b.value);

    const KaramataFunction L = KaramataFunction::power_corrected(1.0, 1.0, 0.5);
    const auto n = solve_N(L, 0.5, 100.0);
    CHECK(n.residual < 1e-10);
    const double tau = std::pow(0.5 * 100.0, 2.0);
    CHECK(std::abs(std::pow(n.value, 0.5) * L(tau / n.value) - 1.0) < 1e-10);
  }

  TEST_CASE("lambda_cap") {
    CHECK(lambda_cap(KaramataFunction::constant(2.0), 0.5).value == 0.0);

    const auto p = lambda_cap(KaramataFunction::power_corrected(1.0, 1.0, 0.5), 0.5);
    CHECK(p.converged);
    CHECK(p.value == doctest::Approx(std::pow(2.0, -0.5) - 1.0));

    // Probes of x^0.2 omega(x) for 1 + 1/(2 ln(x + 1)) grow per decade.
    CHECK_THROWS_AS(lambda_cap(KaramataFunction::log_corrected(0.5), 0.2), DivergenceError);
  }

  TEST_CASE("slow ratio of a canonical pair and of a perturbed immigration law") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    const SlowRatio r = ratio_L(f.slowly_varying(), ImmigrationLaw::canonical(0.4, 0.1).slowly_varying());
    CHECK(r.C_L == doctest::Approx(0.1));
    CHECK(r.is_constant());
    CHECK(r.deficit(1e4) == 0.0);

    const SlowRatio p = ratio_L(f.slowly_varying(), ImmigrationLaw::perturbed(0.4, 0.1, 0.25).slowly_varying());
    CHECK(p.C_L == doctest::Approx(0.1));
    // C_L - ratio decays like t^{-delta}; its sign is negative for this family.
    const double d2 = p.deficit(1e2);
    const double d6 = p.deficit(1e6);
    CHECK(d2 < 0.0);
    CHECK(std::log(d6 / d2) / std::log(1e4) == doctest::Approx(-0.4).epsilon(0.05 / 0.4));
    CHECK(d6 == doctest::Approx(p.C_L - p(1e6)).epsilon(1e-6));
  }

  TEST_CASE("lemma3_check") {
    const auto K = [](double y) { return y; };
    CHECK(lemma3_check(KaramataFunction::constant(1.0), 0.5, K, 1e-3) == 0.0);
    CHECK(lemma3_check(KaramataFunction::power_corrected(1.0, 1.0, 0.5), 0.5, [](double) { return 0.0; }, 1e-3) ==
          doctest::Approx(0.0));
    const KaramataFunction L = KaramataFunction::power_corrected(1.0, 1.0, 0.5);
    CHECK(std::abs(lemma3_check(L, 0.5, K, 1e-4)) < std::abs(lemma3_check(L, 0.5, K, 1e-2)));
  }

  TEST_CASE("lemma4_check") {
    CHECK_THROWS_AS(lemma4_check(KaramataFunction::constant(1.0), 0.5), InapplicableError);
    // L = 2 (1 - 1/(nu x^nu)) makes the probe ratio exactly 1.
    const auto rep = lemma4_check(KaramataFunction::power_corrected(2.0, -2.0, 0.5), 0.5);
    CHECK(rep.passed);
    CHECK(rep.limit_estimate == doctest::Approx(1.0));
    const auto drift = lemma4_check(KaramataFunction::log_power(1.0, 0.5), 0.5);
    CHECK_FALSE(drift.converged);
  }

  TEST_CASE("figure normalizers are the plotted expressions") {
    const NormalizerN h = NormalizerN::half_log();
    const NormalizerN l = NormalizerN::log_power(0.2);
    CHECK(h(50.0) == 1.0 + 0.5 / std::log(51.0));
    CHECK(l(50.0) == 1.0 + std::log(51.0) / std::pow(50.0, 0.2));
  }
}
