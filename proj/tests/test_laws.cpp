#include <doctest.h>

#include <cmath>

#include "critbranch/errors.hpp"
#include "critbranch/laws.hpp"

using namespace critbranch;

TEST_SUITE("laws") {
  TEST_CASE("canonical offspring coefficients") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    CHECK(f.a0() == doctest::Approx(1.0));
    CHECK(f.a1() == doctest::Approx(-1.5));
    CHECK(f.rate(2) == doctest::Approx(0.375));
    CHECK(f.rate(3) == doctest::Approx(0.0625));
    CHECK(f.critical());
    CHECK(f.lifetime_mean() == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("tails close the normalisation and follow the stable rate") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    for (std::size_t J : {1000u, 10000u}) {
      const auto a = f.rates(J);
      double s = 0.0;
      for (std::size_t j = 0; j <= J; ++j) {
        if (j != 1) s += a[j];
      }
      CHECK(s + f.tail(J) == doctest::Approx(-f.a1()).epsilon(1e-12));
      CHECK(f.tail(J) > 0.0);
      CHECK(f.tail(J) <= f.a0() * 2.0 * std::pow(static_cast<double>(J), -0.5));
    }
    // a_j j^{2 + nu} settles to a constant.
    const double c2 = f.rate(100) * std::pow(100.0, 2.5);
    const double c4 = f.rate(10000) * std::pow(10000.0, 2.5);
    CHECK(c4 == doctest::Approx(c2).epsilon(0.02));
    CHECK(c4 > 0.0);
  }

  TEST_CASE("complement forms agree with direct evaluation") {
    const OffspringLaw fin = OffspringLaw::finite({0.3, -1.0, 0.5, 0.2});
    for (double y : {0.5, 0.1, 1e-3}) {
      CHECK(fin.f_at_complement(y) == doctest::Approx(fin.f(1.0 - y)).epsilon(1e-10));
      CHECK(fin.f_prime_at_complement(y) == doctest::Approx(fin.f_prime(1.0 - y)).epsilon(1e-10));
    }
    // f(1 - y) = 0.5 y^2 (binary critical with a0 = a2 = 0.5) at tiny y, where 1 - y rounds.
    const OffspringLaw bin = OffspringLaw::finite({0.5, -1.0, 0.5});
    CHECK(bin.f_at_complement(1e-9) == doctest::Approx(0.5e-18).epsilon(1e-12));
    CHECK(bin.Lambda(1e-9) == doctest::Approx(0.5e-9).epsilon(1e-12));
  }

  TEST_CASE("invalid rate vectors report the first offending index") {
    CHECK_THROWS_AS(OffspringLaw::finite({1.0, -2.0, 1.5}), ValidityError);
    try {
      OffspringLaw::finite({1.0, -2.0, -0.5, 1.5});
      FAIL("expected a validity error");
    } catch (const ValidityError& e) {
      CHECK(e.index() == 2);
    }
    CHECK_THROWS_AS(ImmigrationLaw::finite({0.5, 0.5}), ValidityError);
    CHECK_THROWS_AS(OffspringLaw::canonical(1.5, 1.0), DomainError);
  }

  TEST_CASE("stable immigration") {
    const ImmigrationLaw unit = make_stable_immigration(1.0, 1.0);
    CHECK(unit.b0() == doctest::Approx(-1.0));
    CHECK(unit.rate(1) == doctest::Approx(1.0));
    CHECK(unit.rate(2) == doctest::Approx(0.0));
    CHECK(unit.hprime1() == doctest::Approx(1.0));

    const ImmigrationLaw h = make_stable_immigration(0.4, 0.1);
    CHECK(h.rate(1) == doctest::Approx(0.04));
    CHECK(std::isinf(h.hprime1()));

    // Accepted by the coefficient scan.
    const ImmigrationLaw p = ImmigrationLaw::perturbed(0.4, 0.1, 0.25);
    CHECK(p.rate(1) == doctest::Approx(0.04 + 0.25 * 0.8));
    CHECK(p.h_at_complement(0.01) == doctest::Approx(-0.1 * std::pow(0.01, 0.4) - 0.25 * std::pow(0.01, 0.8)));
  }

  TEST_CASE("classification") {
    const auto r1 = classify(OffspringLaw::canonical(0.5, 1.0), ImmigrationLaw::canonical(0.4, 0.1));
    CHECK(r1.gamma == doctest::Approx(-0.1));
    CHECK(r1.mu == doctest::Approx(0.3));
    CHECK(r1.classification == Regime::Transient);
    CHECK(r1.limit_theorem_eligible);

    const auto r2 = classify(OffspringLaw::canonical(0.2, 1.0), ImmigrationLaw::canonical(0.9, 0.1));
    CHECK(r2.gamma == doctest::Approx(0.7));
    CHECK(r2.classification == Regime::PositiveRecurrent);

    const auto r3 = classify(OffspringLaw::canonical(0.5, 1.0), ImmigrationLaw::canonical(0.5, 0.1));
    CHECK(r3.classification == Regime::QProcess);
    CHECK_FALSE(r3.limit_theorem_eligible);
    CHECK(std::string(to_string(r3.classification)) == "q-process");
  }

  TEST_CASE("perturbed offspring keeps the stable index") {
    const OffspringLaw f = OffspringLaw::perturbed(0.5, 1.0, 1.0, 0.5);
    CHECK(f.a0() == doctest::Approx(2.0));
    CHECK(f.nu() == 0.5);
    CHECK(f.Lambda(1e-6) / std::pow(1e-6, 0.5) == doctest::Approx(1.0 + 1e-3));
  }
}
