#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "critbranch/errors.hpp"
#include "critbranch/laws.hpp"
#include "critbranch/montecarlo.hpp"

using namespace critbranch;

TEST_SUITE("montecarlo") {
  TEST_CASE("offspring sampling by inverse CDF") {
    const OffspringLaw bin = OffspringLaw::finite({1.0, -2.0, 1.0});
    CHECK(sample_offspring(bin, 0.3) == 0);
    CHECK(sample_offspring(bin, 0.7) == 2);
    CHECK_THROWS_AS(sample_offspring(bin, 1.0), DomainError);
    CHECK_THROWS_AS(sample_offspring(bin, -0.1), DomainError);

    const OffspringLaw can = OffspringLaw::canonical(0.5, 1.0);
    const JumpSampler js = JumpSampler::offspring(can);
    CHECK(js.pmf(0) == doctest::Approx(2.0 / 3.0));
    CHECK(js.pmf(1) == 0.0);
    CHECK(js.pmf(2) == doctest::Approx(0.25));
    CHECK(js.survival(0) == doctest::Approx(1.0 / 3.0));
    CHECK(js(0.5) == 0);
    CHECK(js(0.9) >= 2);
    CHECK(js(1.0 - 1e-15, 1000) <= 1001);
  }

  TEST_CASE("sampler beyond its table agrees with the law") {
    const OffspringLaw can = OffspringLaw::canonical(0.5, 1.0);
    const JumpSampler js = JumpSampler::offspring(can);
    const std::uint64_t k = js.horizon() + 1000;
    CHECK(js.survival(k) == doctest::Approx(can.tail(k) / 1.5).epsilon(1e-9));
    CHECK(js.pmf(k) == doctest::Approx(can.rate(k)).epsilon(1e-9));
  }

  TEST_CASE("empirical pmf within four standard errors") {
    const OffspringLaw can = OffspringLaw::canonical(0.5, 1.0);
    const JumpSampler js = JumpSampler::offspring(can);
    std::mt19937_64 rng(7);
    const std::size_t n = 1000000;
    std::vector<double> counts(11, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const auto k = js(u);
      if (k <= 10) counts[k] += 1.0;
    }
    for (std::size_t k = 0; k <= 10; ++k) {
      const double p = js.pmf(k);
      const double se = std::sqrt(p * (1.0 - p) / n);
      CHECK(std::abs(counts[k] / n - p) <= 4.0 * se + 1e-12);
    }
  }

  TEST_CASE("parallel simulation equals the serial reference") {
    const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
    const ImmigrationLaw h = ImmigrationLaw::canonical(0.4, 0.1);
    SimConfig cfg;
    cfg.grid = {0.0, 1.0, 5.0};
    cfg.replicas = 500;
    cfg.seed = 11;
    cfg.cap = 10000;
    const SimResult a = simulate_mbs(f, cfg);
    const SimResult b = simulate_mbs_serial(f, cfg);
    CHECK(a.states == b.states);
    CHECK(a.events == b.events);
    CHECK(a.capped == b.capped);
    cfg.initial = 0;
    const SimResult c = simulate_mbis(f, h, cfg);
    const SimResult d = simulate_mbis_serial(f, h, cfg);
    CHECK(c.states == d.states);
    CHECK(c.capped_count == d.capped_count);
    CHECK(replica_seed(11, 0) != replica_seed(11, 1));
  }

  TEST_CASE("estimators") {
    const OffspringLaw f = OffspringLaw::finite({1.0, -2.0, 1.0});
    SimConfig cfg;
    cfg.replicas = 20;
    const SimResult at0 = simulate_mbs(f, cfg);
    const Estimate s0 = estimate({Quantity::Survival, 0.0, 0}, at0);
    CHECK(s0.value == 1.0);
    CHECK(s0.se == 0.0);
    CHECK_THROWS_AS(estimate({Quantity::Survival, 1.0, 0}, at0), DomainError);
    CHECK_THROWS_AS(estimate({Quantity::Ratio, 0.0, 1}, at0), InsufficientEventsError);
    CHECK(std::string(to_string(Quantity::Probability)) == "p");

    cfg.grid = {2.0};
    cfg.replicas = 20000;
    cfg.seed = 3;
    const SimResult sim = simulate_mbs(f, cfg);
    const Estimate q = estimate({Quantity::Survival, 2.0, 0}, sim);
    CHECK(std::abs(q.value - 1.0 / 3.0) <= 4.0 * q.se);
  }
}
