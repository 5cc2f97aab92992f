#include <doctest.h>

#include <cmath>
#include <cstring>

#include "critbranch/series.hpp"

using namespace critbranch;

namespace {

Series ramp(std::size_t n, double scale) {
  std::vector<double> c(n + 1);
  for (std::size_t j = 0; j <= n; ++j) c[j] = scale / (1.0 + j) * (j % 3 == 1 ? -1.0 : 1.0);
  return Series(c);
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("parallel product is bit-identical to the serial reference") {
    for (std::size_t n : {8u, 200u, 1000u}) {
      const Series a = ramp(n, 0.7);
      const Series b = ramp(n, 1.3);
      const Series p = mul(a, b);
      const Series q = mul_serial(a, b);
      REQUIRE(p.order() == q.order());
      CHECK(std::memcmp(p.vector().data(), q.vector().data(), sizeof(double) * (n + 1)) == 0);
    }
  }

  TEST_CASE("binomial coefficients of (1 - s)^1.5") {
    const Series b = Series::binomial(1.5, 4);
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[1] == doctest::Approx(-1.5));
    CHECK(b[2] == doctest::Approx(0.375));
    CHECK(b[3] == doctest::Approx(0.0625));
  }

  TEST_CASE("exp and log are inverse") {
    const Series g = ramp(40, 0.3).with_constant(0.2);
    const Series back = log_series(exp_series(g));
    for (std::size_t j = 0; j <= 40; ++j) CHECK(back[j] == doctest::Approx(g[j]).epsilon(1e-12));
  }

  TEST_CASE("pow_series matches the binomial series") {
    const Series y = Series::binomial(1.0, 30);  // 1 - s
    const Series p = pow_series(y, -0.1);
    const Series b = Series::binomial(-0.1, 30);
    for (std::size_t j = 0; j <= 30; ++j) CHECK(p[j] == doctest::Approx(b[j]).epsilon(1e-13));
  }

  TEST_CASE("reciprocal times itself is one") {
    const Series g = ramp(50, 1.0).with_constant(2.0);
    const Series one = mul(g, reciprocal(g));
    CHECK(one[0] == doctest::Approx(1.0));
    for (std::size_t j = 1; j <= 50; ++j) CHECK(std::abs(one[j]) < 1e-14);
  }

  TEST_CASE("composition with the identity and with a shifted inner series") {
    const Series g = ramp(20, 1.0);
    const Series id = Series::identity(20);
    const Series same = compose(g, id);
    for (std::size_t j = 0; j <= 20; ++j) CHECK(same[j] == doctest::Approx(g[j]));

    // (1 - s)^2 composed with F = 0.5 + 0.5 s gives 0.25 (1 - s)^2.
    const Series outer = Series::binomial(2.0, 20);
    std::vector<double> lin(21, 0.0);
    lin[0] = lin[1] = 0.5;
    const Series inner(lin);
    const Series c = compose(outer, inner);
    CHECK(c[0] == doctest::Approx(0.25));
    CHECK(c[1] == doctest::Approx(-0.5));
    CHECK(c[2] == doctest::Approx(0.25));
  }

  TEST_CASE("integrate and differentiate") {
    const Series g = ramp(10, 1.0);
    const Series back = differentiate_series(integrate_series(g));
    for (std::size_t j = 0; j <= 10; ++j) CHECK(back[j] == doctest::Approx(g[j]));
    CHECK(eval_at(Series(), 0.5) == 0.0);
    CHECK(eval_at(Series::binomial(1.0, 1), 0.25) == doctest::Approx(0.75));
  }
}
