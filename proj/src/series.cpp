#include "critbranch/series.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "critbranch/errors.hpp"

namespace critbranch {

namespace {

// Below this order the OpenMP fork costs more than the product itself.
constexpr std::size_t kParallelMulOrder = 384;

std::size_t common_order(const Series& a, const Series& b) { return std::min(a.order(), b.order()); }

void require_nonempty(const Series& g, const char* op) {
  if (g.empty()) throw DomainError(std::string(op) + ": empty series");
}

}  // namespace

Series::Series(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

Series Series::constant(double c, std::size_t order) {
  std::vector<double> v(order + 1, 0.0);
  v[0] = c;
  return Series(std::move(v));
}

Series Series::identity(std::size_t order) {
  std::vector<double> v(order + 1, 0.0);
  if (order >= 1) v[1] = 1.0;
  return Series(std::move(v));
}

Series Series::binomial(double alpha, std::size_t order, double scale) {
  std::vector<double> v(order + 1);
  v[0] = scale;
  for (std::size_t k = 0; k < order; ++k) {
    const double kd = static_cast<double>(k);
    v[k + 1] = v[k] * (kd - alpha) / (kd + 1.0);
  }
  return Series(std::move(v));
}

Series Series::truncated(std::size_t order) const {
  if (order >= this->order()) return *this;
  return Series(std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order) + 1));
}

Series Series::with_constant(double c0) const {
  Series out = *this;
  if (!out.coeffs_.empty()) out.coeffs_[0] = c0;
  return out;
}

Series& Series::operator+=(const Series& rhs) {
  const std::size_t n = std::min(coeffs_.size(), rhs.coeffs_.size());
  coeffs_.resize(n);
  for (std::size_t j = 0; j < n; ++j) coeffs_[j] += rhs.coeffs_[j];
  return *this;
}

Series& Series::operator-=(const Series& rhs) {
  const std::size_t n = std::min(coeffs_.size(), rhs.coeffs_.size());
  coeffs_.resize(n);
  for (std::size_t j = 0; j < n; ++j) coeffs_[j] -= rhs.coeffs_[j];
  return *this;
}

Series& Series::operator*=(double k) {
  for (double& c : coeffs_) c *= k;
  return *this;
}

Series operator+(Series a, const Series& b) { return a += b; }
Series operator-(Series a, const Series& b) { return a -= b; }
Series operator-(Series a) { return a *= -1.0; }
Series operator*(Series a, double k) { return a *= k; }
Series operator*(double k, Series a) { return a *= k; }
Series operator+(Series a, double k) {
  if (!a.empty()) a = a.with_constant(a[0] + k);
  return a;
}

Series mul_serial(const Series& a, const Series& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n = common_order(a, b);
  std::vector<double> out(n + 1, 0.0);
  const double* pa = a.coeffs().data();
  const double* pb = b.coeffs().data();
  for (std::size_t k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= k; ++i) acc += pa[i] * pb[k - i];
    out[k] = acc;
  }
  return Series(std::move(out));
}

Series mul(const Series& a, const Series& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n = common_order(a, b);
  if (n < kParallelMulOrder) return mul_serial(a, b);
  std::vector<double> out(n + 1, 0.0);
  const double* pa = a.coeffs().data();
  const double* pb = b.coeffs().data();
  const auto count = static_cast<long long>(n + 1);
#pragma omp parallel for schedule(dynamic, 32)
  for (long long kk = 0; kk < count; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    double acc = 0.0;
    for (std::size_t i = 0; i <= k; ++i) acc += pa[i] * pb[k - i];
    out[k] = acc;
  }
  return Series(std::move(out));
}

Series taylor_shift(const Series& g, double c) {
  std::vector<double> a(g.coeffs().begin(), g.coeffs().end());
  if (a.size() < 2 || c == 0.0) return Series(std::move(a));
  const std::size_t n = a.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = n - 1;; --j) {
      a[j] += c * a[j + 1];
      if (j == i) break;
    }
  }
  return Series(std::move(a));
}

Series compose_centered(const Series& outer_at_c, const Series& inner) {
  require_nonempty(outer_at_c, "compose");
  require_nonempty(inner, "compose");
  const std::size_t n = common_order(outer_at_c, inner);
  const Series x = inner.truncated(n).with_constant(0.0);
  // Horner from the top: acc = o_n; acc = acc * x + o_k.
  Series acc = Series::constant(outer_at_c[n], n);
  for (std::size_t k = n; k-- > 0;) {
    acc = mul(acc, x);
    acc = acc + outer_at_c[k];
  }
  return acc;
}

Series compose(const Series& outer, const Series& inner) {
  require_nonempty(inner, "compose");
  if (inner[0] == 0.0) return compose_centered(outer, inner);
  return compose_centered(taylor_shift(outer, inner[0]), inner);
}

Series exp_series(const Series& g) {
  require_nonempty(g, "exp_series");
  if (g[0] > 700.0) throw OverflowError("exp_series: constant term exceeds 700");
  const std::size_t n = g.order();
  std::vector<double> e(n + 1, 0.0);
  e[0] = std::exp(g[0]);
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) acc += static_cast<double>(k) * g[k] * e[m - k];
    e[m] = acc / static_cast<double>(m);
  }
  return Series(std::move(e));
}

Series log_series(const Series& g) {
  require_nonempty(g, "log_series");
  if (!(g[0] > 0.0)) throw DomainError("log_series: constant term must be positive");
  const std::size_t n = g.order();
  std::vector<double> l(n + 1, 0.0);
  l[0] = std::log(g[0]);
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k < m; ++k) acc += static_cast<double>(k) * l[k] * g[m - k];
    l[m] = (g[m] - acc / static_cast<double>(m)) / g[0];
  }
  return Series(std::move(l));
}

Series pow_series(const Series& g, double alpha) {
  require_nonempty(g, "pow_series");
  if (!(g[0] > 0.0)) throw DomainError("pow_series: constant term must be positive");
  const std::size_t n = g.order();
  std::vector<double> p(n + 1, 0.0);
  p[0] = std::pow(g[0], alpha);
  for (std::size_t m = 1; m <= n; ++m) {
    const double md = static_cast<double>(m);
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      acc += ((alpha + 1.0) * static_cast<double>(k) - md) * g[k] * p[m - k];
    }
    p[m] = acc / (md * g[0]);
  }
  return Series(std::move(p));
}

Series reciprocal(const Series& g) {
  require_nonempty(g, "reciprocal");
  if (g[0] == 0.0) throw DomainError("reciprocal: zero constant term");
  const std::size_t n = g.order();
  std::vector<double> r(n + 1, 0.0);
  r[0] = 1.0 / g[0];
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) acc += g[k] * r[m - k];
    r[m] = -acc / g[0];
  }
  return Series(std::move(r));
}

Series integrate_series(const Series& g) {
  require_nonempty(g, "integrate_series");
  std::vector<double> out(g.order() + 2, 0.0);
  for (std::size_t j = 0; j <= g.order(); ++j) out[j + 1] = g[j] / static_cast<double>(j + 1);
  return Series(std::move(out));
}

Series differentiate_series(const Series& g) {
  require_nonempty(g, "differentiate_series");
  if (g.order() == 0) return Series::constant(0.0, 0);
  std::vector<double> out(g.order(), 0.0);
  for (std::size_t j = 1; j <= g.order(); ++j) out[j - 1] = static_cast<double>(j) * g[j];
  return Series(std::move(out));
}

double eval_at(const Series& g, double s) {
  if (!(std::abs(s) <= 1.0)) throw DomainError("eval_at: |s| must not exceed 1");
  if (g.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t j = g.order() + 1; j-- > 0;) acc = acc * s + g[j];
  return acc;
}

}  // namespace critbranch
