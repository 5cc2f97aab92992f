#include "critbranch/karamata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "critbranch/errors.hpp"

namespace critbranch {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

// ln(1 + 1/y) as a series, y_0 > 0.
Series log_one_plus_inverse(const Series& y) { return log_series(y + 1.0) - log_series(y); }

}  // namespace

KaramataFunction KaramataFunction::constant(double c) {
  require_positive(c, "constant slowly varying function");
  return {Form::Constant, c, 0.0, std::numeric_limits<double>::infinity()};
}

KaramataFunction KaramataFunction::log_corrected(double alpha, double c) {
  require_positive(c, "scale c");
  if (alpha <= -std::log(2.0)) throw DomainError("log-corrected form is not positive on [1, inf)");
  return {Form::LogCorrected, c, alpha, 0.0};
}

KaramataFunction KaramataFunction::power_corrected(double c, double rho, double p) {
  require_positive(c, "scale c");
  require_positive(p, "remainder exponent p");
  return {Form::PowerCorrected, c, rho, p};
}

KaramataFunction KaramataFunction::log_power(double alpha, double p, double c) {
  require_positive(c, "scale c");
  require_positive(p, "remainder exponent p");
  return {Form::LogPower, c, alpha, p};
}

KaramataFunction KaramataFunction::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw DomainError("table needs at least two points");
  std::sort(points.begin(), points.end());
  KaramataFunction out{Form::Table, points.back().second, 0.0, 0.0};
  for (const auto& [x, v] : points) {
    require_positive(x, "table abscissa");
    require_positive(v, "table value");
    out.table_.emplace_back(std::log(x), std::log(v));
  }
  return out;
}

double KaramataFunction::operator()(double x) const {
  switch (form_) {
    case Form::Constant:
      return c_;
    case Form::LogCorrected:
      return c_ * (1.0 + a_ / std::log1p(x));
    case Form::PowerCorrected:
      return c_ * (1.0 + a_ * std::pow(x, -p_));
    case Form::LogPower:
      return c_ * (1.0 + a_ * std::log1p(x) * std::pow(x, -p_));
    case Form::Table: {
      const double lx = std::log(x);
      if (lx <= table_.front().first) return std::exp(table_.front().second);
      if (lx >= table_.back().first) return std::exp(table_.back().second);
      auto hi = std::upper_bound(table_.begin(), table_.end(), std::make_pair(lx, -std::numeric_limits<double>::infinity()));
      auto lo = hi - 1;
      const double w = (lx - lo->first) / (hi->first - lo->first);
      return std::exp(lo->second + w * (hi->second - lo->second));
    }
  }
  return c_;
}

double KaramataFunction::limit() const { return c_; }

double KaramataFunction::remainder_exponent() const { return p_; }

double KaramataFunction::log_derivative(double x) const {
  switch (form_) {
    case Form::Constant:
      return 0.0;
    case Form::LogCorrected: {
      const double l = std::log1p(x);
      return -c_ * a_ * x / ((x + 1.0) * l * l) / (*this)(x);
    }
    case Form::PowerCorrected:
      return -c_ * a_ * p_ * std::pow(x, -p_) / (*this)(x);
    case Form::LogPower: {
      const double xp = std::pow(x, -p_);
      return c_ * a_ * xp * (x / (x + 1.0) - p_ * std::log1p(x)) / (*this)(x);
    }
    case Form::Table: {
      const double lx = std::log(x);
      if (lx <= table_.front().first || lx >= table_.back().first) return 0.0;
      auto hi = std::upper_bound(table_.begin(), table_.end(), std::make_pair(lx, -std::numeric_limits<double>::infinity()));
      auto lo = hi - 1;
      return (hi->second - lo->second) / (hi->first - lo->first);
    }
  }
  return 0.0;
}

double KaramataFunction::omega(double x, double lambda) const {
  if (form_ == Form::Constant) return 0.0;
  return (*this)(lambda * x) / (*this)(x) - 1.0;
}

Series KaramataFunction::of_inverse(const Series& y) const {
  if (y.empty() || !(y[0] > 0.0)) throw DomainError("of_inverse: series needs a positive constant term");
  const std::size_t n = y.order();
  switch (form_) {
    case Form::Constant:
      return Series::constant(c_, n);
    case Form::LogCorrected:
      return (reciprocal(log_one_plus_inverse(y)) * a_ + 1.0) * c_;
    case Form::PowerCorrected:
      return (pow_series(y, p_) * a_ + 1.0) * c_;
    case Form::LogPower:
      return (mul(log_one_plus_inverse(y), pow_series(y, p_)) * a_ + 1.0) * c_;
    case Form::Table:
      break;
  }
  throw DomainError("of_inverse: tabulated functions have no series form");
}

double KaramataFunction::excess(double x) const {
  switch (form_) {
    case Form::Constant:
      return 0.0;
    case Form::LogCorrected:
      return a_ / std::log1p(x);
    case Form::PowerCorrected:
      return a_ * std::pow(x, -p_);
    case Form::LogPower:
      return a_ * std::log1p(x) * std::pow(x, -p_);
    case Form::Table:
      break;
  }
  return (*this)(x) / c_ - 1.0;
}

Series KaramataFunction::excess_of_inverse(const Series& y) const {
  if (y.empty() || !(y[0] > 0.0)) throw DomainError("excess_of_inverse: series needs a positive constant term");
  switch (form_) {
    case Form::Constant:
      return Series::constant(0.0, y.order());
    case Form::LogCorrected:
      return reciprocal(log_one_plus_inverse(y)) * a_;
    case Form::PowerCorrected:
      return pow_series(y, p_) * a_;
    case Form::LogPower:
      return mul(log_one_plus_inverse(y), pow_series(y, p_)) * a_;
    case Form::Table:
      break;
  }
  throw DomainError("excess_of_inverse: tabulated functions have no series form");
}

NormalizerN NormalizerN::half_log() {
  return NormalizerN([](double t) { return 1.0 + 1.0 / (2.0 * std::log(t + 1.0)); });
}

NormalizerN NormalizerN::log_power(double nu) {
  return NormalizerN([nu](double t) { return 1.0 + std::log(t + 1.0) / std::pow(t, nu); });
}

NormalizerN NormalizerN::fixed_point(KaramataFunction L, double nu) {
  return NormalizerN([L = std::move(L), nu](double t) { return solve_N(L, nu, t).value; });
}

LimitEstimate lambda_cap(const KaramataFunction& L, double nu) {
  if (!(nu > 0.0 && nu <= 1.0)) throw DomainError("lambda_cap: nu must lie in (0, 1]");
  LimitEstimate est;
  const std::array<double, 3> xs{1e4, 1e5, 1e6};
  for (std::size_t i = 0; i < xs.size(); ++i) est.probes[i] = std::pow(xs[i], nu) * L.omega(xs[i], 2.0);

  using Form = KaramataFunction::Form;
  if (L.form() == Form::Constant || L.alpha() == 0.0) {
    est.value = 0.0;
    est.converged = est.shortcut = true;
    return est;
  }
  if (L.form() == Form::PowerCorrected && L.p() >= nu) {
    est.value = L.p() == nu ? L.alpha() * (std::pow(2.0, -nu) - 1.0) : 0.0;
    est.converged = est.shortcut = true;
    return est;
  }

  const auto& v = est.probes;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1.1 * std::abs(v[i - 1]) && std::abs(v[i]) > 1e-14) {
      throw DivergenceError("lambda_cap: remainder probes grow by more than 10% per decade");
    }
  }
  const double d1 = v[1] - v[0];
  const double d2 = v[2] - v[1];
  est.value = (d2 - d1) != 0.0 ? v[2] - d2 * d2 / (d2 - d1) : v[2];
  est.converged = std::abs(d2) <= std::abs(d1);
  return est;
}

FixedPoint solve_N(const KaramataFunction& L, double nu, double t) {
  if (!(t > 0.0)) throw DomainError("solve_N: t must be positive");
  if (!(nu > 0.0 && nu <= 1.0)) throw DomainError("solve_N: nu must lie in (0, 1]");
  const double tau = std::pow(nu * t, 1.0 / nu);
  const double inv = -1.0 / nu;
  double n = std::pow(L(tau), inv);
  for (int it = 1; it <= 100; ++it) {
    const double next = std::pow(L(tau / n), inv);
    const double delta = std::abs(next - n);
    n = next;
    if (delta < 1e-12) {
      return {n, it, std::abs(std::pow(n, nu) * L(tau / n) - 1.0)};
    }
  }
  throw NonConvergenceError("solve_N: no fixed point after 100 iterations");
}

Series SlowRatio::of_inverse(const Series& y) const { return mul(Lh.of_inverse(y), reciprocal(Lf.of_inverse(y))); }

double SlowRatio::deficit(double t) const {
  if (is_constant()) return 0.0;
  const double rf = Lf.excess(t);
  const double rh = Lh.excess(t);
  return C_L * (rf - rh) / (1.0 + rf);
}

Series SlowRatio::deficit_of_inverse(const Series& y) const {
  if (is_constant()) return Series::constant(0.0, y.order());
  const Series rf = Lf.excess_of_inverse(y);
  const Series rh = Lh.excess_of_inverse(y);
  return mul(rf - rh, reciprocal(rf + 1.0)) * C_L;
}

SlowRatio ratio_L(const KaramataFunction& Lf, const KaramataFunction& Lh) {
  SlowRatio r{Lf, Lh, Lh.limit() / Lf.limit(), {}};
  const std::array<double, 3> ts{1e4, 1e5, 1e6};
  for (std::size_t i = 0; i < ts.size(); ++i) r.probes[i] = r(ts[i]);
  return r;
}

double lemma3_check(const KaramataFunction& L, double nu, const std::function<double(double)>& K, double y) {
  if (!(nu > 0.0 && nu <= 1.0)) throw DomainError("lemma3_check: nu must lie in (0, 1]");
  if (!(y > 0.0 && y < 1.0)) throw DomainError("lemma3_check: y must lie in (0, 1)");
  const double k = K(y);
  const double phi = y - y * k;
  if (!(phi > 0.0 && phi <= y)) throw DomainError("lemma3_check: phi(y) must lie in (0, y]");
  const double x = 1.0 / y;
  return L(1.0 / phi) - L(x) * (1.0 + k * L.log_derivative(x));
}

Lemma4Report lemma4_check(const KaramataFunction& L, double index) {
  if (L.form() == KaramataFunction::Form::Constant || L.alpha() == 0.0) {
    throw InapplicableError("lemma4_check: L has no remainder");
  }
  if (!(index > 0.0)) throw DomainError("lemma4_check: index must be positive");
  Lemma4Report rep;
  const double lambda = L.limit();
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    const double t = rep.t[i];
    rep.ratio[i] = (lambda - L(t)) * index * std::pow(t, index) / lambda;
  }
  const double last = rep.ratio[3];
  const double prev = rep.ratio[2];
  rep.limit_estimate = last;
  rep.converged = prev != 0.0 && std::abs(last / prev - 1.0) <= 0.05;
  rep.passed = std::abs(last - 1.0) <= 0.05;
  return rep;
}

}  // namespace critbranch
