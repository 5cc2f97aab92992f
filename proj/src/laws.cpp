#include "critbranch/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "critbranch/errors.hpp"

namespace critbranch {

namespace {

constexpr double kClampTolerance = -1e-14;

// (-1)^k binom(alpha, k), the k-th coefficient of (1 - s)^alpha.
double binomial_coefficient(double alpha, std::size_t k) {
  double e = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double id = static_cast<double>(i);
    e *= (id - alpha) / (id + 1.0);
    if (e == 0.0) break;
  }
  return e;
}

// (1 - y)^j - 1 + j y, which is >= 0 and small for small j y.
double convex_gap(std::size_t j, double y) {
  if (j < 2) return 0.0;
  const double jd = static_cast<double>(j);
  if (jd * y < 0.5) {
    double term = 0.5 * jd * (jd - 1.0) * y * y;
    double sum = term;
    for (std::size_t k = 2; k < j; ++k) {
      const double kd = static_cast<double>(k);
      term *= -y * (jd - kd) / (kd + 1.0);
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(jd * std::log1p(-y)) + jd * y;
}

// 1 - (1 - y)^j.
double one_minus_power(std::size_t j, double y) {
  if (j == 0) return 0.0;
  return -std::expm1(static_cast<double>(j) * std::log1p(-y));
}

void check_nonnegative_tail(const std::vector<double>& coeffs, std::size_t first, const char* what) {
  for (std::size_t k = first; k < coeffs.size(); ++k) {
    if (coeffs[k] < kClampTolerance) throw ValidityError(what, k);
  }
}

double clamp_rate(double v) { return (v < 0.0 && v >= kClampTolerance) ? 0.0 : v; }

double horner(const std::vector<double>& a, double s) {
  double acc = 0.0;
  for (std::size_t j = a.size(); j-- > 0;) acc = acc * s + a[j];
  return acc;
}

Series pad(const std::vector<double>& a, std::size_t order) {
  std::vector<double> v(order + 1, 0.0);
  std::copy_n(a.begin(), std::min(a.size(), order + 1), v.begin());
  return Series(std::move(v));
}

// Polynomial with coefficients a evaluated at a series, by Horner on the full series.
Series polynomial_of(const std::vector<double>& a, const Series& F) {
  const std::size_t n = F.order();
  Series acc = Series::constant(a.back(), n);
  for (std::size_t j = a.size() - 1; j-- > 0;) acc = mul(acc, F) + a[j];
  return acc;
}

Series polynomial_taylor(const std::vector<double>& a, double c, std::size_t order) {
  const std::size_t n = std::max(order, a.size() - 1);
  return taylor_shift(pad(a, n), c).truncated(order);
}

void validate_offspring_rates(const std::vector<double>& a) {
  if (a.size() < 2) throw ValidityError("offspring rates need a_0 and a_1", a.size());
  if (!(a[0] > 0.0)) throw ValidityError("offspring rate a_0 must be positive", 0);
  if (!(a[1] < 0.0)) throw ValidityError("offspring rate a_1 must be negative", 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!std::isfinite(a[j])) throw ValidityError("offspring rate is not finite", j);
    if (j != 1 && a[j] < 0.0) throw ValidityError("offspring rate must be nonnegative", j);
    sum += a[j];
  }
  if (std::abs(sum) > 1e-12 * std::max(1.0, -a[1])) throw ValidityError("offspring rates must sum to zero", a.size());
}

void validate_immigration_rates(const std::vector<double>& b) {
  if (b.size() < 2) throw ValidityError("immigration rates need b_0 and b_1", b.size());
  if (!(b[0] < 0.0)) throw ValidityError("immigration rate b_0 must be negative", 0);
  double sum = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!std::isfinite(b[k])) throw ValidityError("immigration rate is not finite", k);
    if (k > 0 && b[k] < 0.0) throw ValidityError("immigration rate must be nonnegative", k);
    sum += b[k];
  }
  if (std::abs(sum) > 1e-12 * std::max(1.0, -b[0])) throw ValidityError("immigration rates must sum to zero", b.size());
}

void require_index(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1]");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------

double PowerMixture::coefficient(std::size_t k) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.weight * binomial_coefficient(t.exponent, k);
  return acc;
}

std::vector<double> PowerMixture::coefficients(std::size_t horizon) const {
  std::vector<double> out(horizon + 1, 0.0);
  for (const auto& t : terms_) {
    const Series b = Series::binomial(t.exponent, horizon, t.weight);
    for (std::size_t k = 0; k <= horizon; ++k) out[k] += b[k];
  }
  return out;
}

double PowerMixture::tail(std::size_t k) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc -= t.weight * binomial_coefficient(t.exponent - 1.0, k);
  return acc;
}

double PowerMixture::at_complement(double y) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.weight * std::pow(y, t.exponent);
  return acc;
}

double PowerMixture::derivative_at_complement(double y) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc -= t.weight * t.exponent * std::pow(y, t.exponent - 1.0);
  return acc;
}

double PowerMixture::weighted_exponent_sum(double y) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.weight * t.exponent * std::pow(y, t.exponent);
  return acc;
}

Series PowerMixture::series(std::size_t order) const { return Series(coefficients(order)); }

Series PowerMixture::taylor(double c, std::size_t order) const {
  if (!(c < 1.0)) throw DomainError("taylor: expansion point must be below 1");
  const double y = 1.0 - c;
  std::vector<double> out(order + 1, 0.0);
  for (const auto& t : terms_) {
    const Series b = Series::binomial(t.exponent, order, t.weight * std::pow(y, t.exponent));
    double scale = 1.0;
    for (std::size_t k = 0; k <= order; ++k) {
      out[k] += b[k] * scale;
      scale /= y;
    }
  }
  return Series(std::move(out));
}

Series PowerMixture::compose(const Series& F) const {
  if (F.empty()) throw DomainError("compose: empty inner series");
  if (!(F[0] < 1.0)) throw DomainError("compose: inner constant term must be below 1");
  const Series y = (-F) + 1.0;
  Series acc = Series::constant(0.0, F.order());
  for (const auto& t : terms_) acc += pow_series(y, t.exponent) * t.weight;
  return acc;
}

// ---------------------------------------------------------------------------

OffspringLaw OffspringLaw::finite(std::vector<double> rates) {
  validate_offspring_rates(rates);
  OffspringLaw law;
  law.kind_ = Kind::Finite;
  double m = 0.0;
  for (std::size_t j = 0; j < rates.size(); ++j) m += static_cast<double>(j) * rates[j];
  law.criticality_ = std::abs(m) <= 1e-12 * -rates[1] ? 0.0 : m;
  law.rates_ = std::move(rates);
  return law;
}

OffspringLaw OffspringLaw::tabulated(std::vector<double> rates) {
  OffspringLaw law = finite(std::move(rates));
  law.kind_ = Kind::Tabulated;
  return law;
}

OffspringLaw OffspringLaw::canonical(double nu, double a0) {
  require_index(nu, "nu");
  require_positive(a0, "a0");
  OffspringLaw law;
  law.kind_ = Kind::Canonical;
  law.nu_ = nu;
  law.c_ = a0;
  law.mixture_ = PowerMixture({{a0, 1.0 + nu}});
  return law;
}

OffspringLaw OffspringLaw::perturbed(double nu, double c, double rho, double p, std::size_t horizon) {
  require_index(nu, "nu");
  require_positive(c, "c");
  require_positive(p, "p");
  OffspringLaw law;
  law.kind_ = Kind::Perturbed;
  law.nu_ = nu;
  law.c_ = c;
  law.rho_ = rho;
  law.p_ = p;
  law.mixture_ = PowerMixture({{c, 1.0 + nu}, {c * rho, 1.0 + nu + p}});
  const auto a = law.mixture_.coefficients(horizon);
  if (!(a[0] > 0.0)) throw ValidityError("offspring rate a_0 must be positive", 0);
  if (!(a[1] < 0.0)) throw ValidityError("offspring rate a_1 must be negative", 1);
  check_nonnegative_tail(a, 2, "offspring rate must be nonnegative");
  return law;
}

double OffspringLaw::rate(std::size_t j) const {
  if (mixture_.empty()) return j < rates_.size() ? rates_[j] : 0.0;
  const double v = mixture_.coefficient(j);
  return j == 1 ? v : clamp_rate(v);
}

std::vector<double> OffspringLaw::rates(std::size_t horizon) const {
  if (mixture_.empty()) return pad(rates_, horizon).vector();
  auto a = mixture_.coefficients(horizon);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j != 1) a[j] = clamp_rate(a[j]);
  }
  return a;
}

double OffspringLaw::tail(std::size_t k) const {
  if (!mixture_.empty()) return mixture_.tail(k);
  double acc = 0.0;
  for (std::size_t j = rates_.size(); j-- > k + 1;) acc += rates_[j];
  return acc;
}

double OffspringLaw::f_at_complement(double y) const {
  if (!mixture_.empty()) return mixture_.at_complement(y);
  double acc = 0.0;
  for (std::size_t j = 2; j < rates_.size(); ++j) acc += rates_[j] * convex_gap(j, y);
  return acc - criticality_ * y;
}

double OffspringLaw::f_prime_at_complement(double y) const {
  if (!mixture_.empty()) return mixture_.derivative_at_complement(y);
  double acc = 0.0;
  for (std::size_t j = 2; j < rates_.size(); ++j) acc += static_cast<double>(j) * rates_[j] * one_minus_power(j - 1, y);
  return criticality_ - acc;
}

double OffspringLaw::f(double s) const {
  if (mixture_.empty() && s <= 0.5) return horner(rates_, s);
  return f_at_complement(1.0 - s);
}

double OffspringLaw::f_prime(double s) const {
  if (mixture_.empty() && s <= 0.5) {
    double acc = 0.0;
    for (std::size_t j = rates_.size(); j-- > 1;) acc = acc * s + static_cast<double>(j) * rates_[j];
    return acc;
  }
  return f_prime_at_complement(1.0 - s);
}

double OffspringLaw::Lambda(double y) const {
  if (y == 0.0) return 0.0;
  return f_at_complement(y) / y;
}

double OffspringLaw::sigma(double y) const {
  if (y == 0.0) return 0.0;
  if (!mixture_.empty()) return nu_ + 1.0 - mixture_.weighted_exponent_sum(y) / mixture_.at_complement(y);
  return nu_ + 1.0 + y * f_prime_at_complement(y) / f_at_complement(y);
}

Series OffspringLaw::series(std::size_t order) const { return Series(rates(order)); }

Series OffspringLaw::taylor(double c, std::size_t order) const {
  if (!mixture_.empty()) return mixture_.taylor(c, order);
  return polynomial_taylor(rates_, c, order);
}

Series OffspringLaw::compose(const Series& F) const {
  if (!mixture_.empty()) return mixture_.compose(F);
  if (F.empty()) throw DomainError("compose: empty inner series");
  return polynomial_of(rates_, F);
}

KaramataFunction OffspringLaw::slowly_varying() const {
  switch (kind_) {
    case Kind::Canonical:
      return KaramataFunction::constant(c_);
    case Kind::Perturbed:
      return rho_ == 0.0 ? KaramataFunction::constant(c_) : KaramataFunction::power_corrected(c_, rho_, p_);
    default:
      break;
  }
  throw DomainError("slowly_varying: finite offspring laws have no declared slowly varying part");
}

// ---------------------------------------------------------------------------

ImmigrationLaw ImmigrationLaw::finite(std::vector<double> rates) {
  validate_immigration_rates(rates);
  ImmigrationLaw law;
  law.kind_ = Kind::Finite;
  double m = 0.0;
  for (std::size_t k = 1; k < rates.size(); ++k) m += static_cast<double>(k) * rates[k];
  law.hprime1_ = m;
  law.c_ = m;
  law.rates_ = std::move(rates);
  return law;
}

ImmigrationLaw ImmigrationLaw::tabulated(std::vector<double> rates) {
  ImmigrationLaw law = finite(std::move(rates));
  law.kind_ = Kind::Tabulated;
  return law;
}

ImmigrationLaw ImmigrationLaw::canonical(double delta, double c) {
  require_index(delta, "delta");
  require_positive(c, "c");
  ImmigrationLaw law;
  law.kind_ = Kind::Canonical;
  law.delta_ = delta;
  law.c_ = c;
  law.hprime1_ = delta == 1.0 ? c : std::numeric_limits<double>::infinity();
  law.mixture_ = PowerMixture({{-c, delta}});
  return law;
}

ImmigrationLaw ImmigrationLaw::perturbed(double delta, double c, double kappa, std::size_t horizon) {
  require_index(delta, "delta");
  require_positive(c, "c");
  if (!(kappa >= 0.0)) throw DomainError("kappa must be nonnegative");
  if (kappa == 0.0) return canonical(delta, c);
  ImmigrationLaw law;
  law.kind_ = Kind::Perturbed;
  law.delta_ = delta;
  law.c_ = c;
  law.kappa_ = kappa;
  law.hprime1_ = delta == 1.0 ? c + 2.0 * kappa : std::numeric_limits<double>::infinity();
  law.mixture_ = PowerMixture({{-c, delta}, {-kappa, 2.0 * delta}});
  check_nonnegative_tail(law.mixture_.coefficients(horizon), 1, "immigration rate must be nonnegative");
  return law;
}

double ImmigrationLaw::rate(std::size_t k) const {
  if (mixture_.empty()) return k < rates_.size() ? rates_[k] : 0.0;
  const double v = mixture_.coefficient(k);
  return k == 0 ? v : clamp_rate(v);
}

std::vector<double> ImmigrationLaw::rates(std::size_t horizon) const {
  if (mixture_.empty()) return pad(rates_, horizon).vector();
  auto b = mixture_.coefficients(horizon);
  for (std::size_t k = 1; k < b.size(); ++k) b[k] = clamp_rate(b[k]);
  return b;
}

double ImmigrationLaw::tail(std::size_t k) const {
  if (!mixture_.empty()) return mixture_.tail(k);
  double acc = 0.0;
  for (std::size_t j = rates_.size(); j-- > k + 1;) acc += rates_[j];
  return acc;
}

double ImmigrationLaw::h_at_complement(double y) const {
  if (!mixture_.empty()) return mixture_.at_complement(y);
  double acc = 0.0;
  for (std::size_t k = 1; k < rates_.size(); ++k) acc -= rates_[k] * one_minus_power(k, y);
  return acc;
}

double ImmigrationLaw::h(double s) const {
  if (mixture_.empty() && s <= 0.5) return horner(rates_, s);
  return h_at_complement(1.0 - s);
}

Series ImmigrationLaw::series(std::size_t order) const { return Series(rates(order)); }

Series ImmigrationLaw::compose(const Series& F) const {
  if (!mixture_.empty()) return mixture_.compose(F);
  if (F.empty()) throw DomainError("compose: empty inner series");
  return polynomial_of(rates_, F);
}

KaramataFunction ImmigrationLaw::slowly_varying() const {
  switch (kind_) {
    case Kind::Canonical:
      return KaramataFunction::constant(c_);
    case Kind::Perturbed:
      return KaramataFunction::power_corrected(c_, kappa_ / c_, delta_);
    default:
      break;
  }
  if (rates_.size() == 2) return KaramataFunction::constant(rates_[1]);
  throw DomainError("slowly_varying: immigration law has no declared slowly varying part");
}

// ---------------------------------------------------------------------------

OffspringLaw make_stable_offspring(double nu, double a0) { return OffspringLaw::canonical(nu, a0); }

ImmigrationLaw make_stable_immigration(double delta, double c, double kappa) {
  return kappa == 0.0 ? ImmigrationLaw::canonical(delta, c) : ImmigrationLaw::perturbed(delta, c, kappa);
}

RegimeParams classify(const OffspringLaw& f, const ImmigrationLaw& h) {
  RegimeParams r{};
  r.nu = f.nu();
  r.delta = h.delta();
  r.gamma = r.delta - r.nu;
  r.mu = 2.0 * r.delta - r.nu;
  r.beta = std::min(r.delta, std::abs(r.gamma));
  r.classification = r.gamma > 0.0 ? Regime::PositiveRecurrent : (r.gamma < 0.0 ? Regime::Transient : Regime::QProcess);
  r.limit_theorem_eligible = r.gamma < 0.0 && r.mu > 0.0;
  return r;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::PositiveRecurrent:
      return "positive-recurrent";
    case Regime::Transient:
      return "transient";
    case Regime::QProcess:
      return "q-process";
  }
  return "unknown";
}

}  // namespace critbranch
