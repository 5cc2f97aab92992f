#pragma once

// Offspring and immigration rate families.
//
// Offspring rates a_j give f(s) = sum_j a_j s^j with a_1 < 0 and f(1) = 0.
// Immigration rates b_k give h(s) = sum_k b_k s^k with b_0 < 0 and h(1) = 0.
// Stable families are stored as sums of w (1 - s)^alpha terms so that values
// near s = 1, tails and coefficients are all exact.

#include <cstddef>
#include <vector>

#include "critbranch/karamata.hpp"
#include "critbranch/series.hpp"

namespace critbranch {

struct PowerTerm {
  double weight;
  double exponent;
};

/// sum_i w_i (1 - s)^{alpha_i}, all alpha_i > 0.
class PowerMixture {
 public:
  PowerMixture() = default;
  explicit PowerMixture(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  double coefficient(std::size_t k) const;
  std::vector<double> coefficients(std::size_t horizon) const;
  /// sum_{j > k} of the coefficients.
  double tail(std::size_t k) const;
  /// Value at s = 1 - y.
  double at_complement(double y) const;
  /// Derivative in s at s = 1 - y.
  double derivative_at_complement(double y) const;
  /// sum_i w_i alpha_i y^{alpha_i}.
  double weighted_exponent_sum(double y) const;
  Series series(std::size_t order) const;
  /// Expansion about s = c < 1, in powers of (s - c).
  Series taylor(double c, std::size_t order) const;
  /// Coefficients of the mixture evaluated at the series F (F_0 < 1).
  Series compose(const Series& F) const;

 private:
  std::vector<PowerTerm> terms_;
};

class OffspringLaw {
 public:
  enum class Kind { Finite, Canonical, Perturbed, Tabulated };

  /// Rates a_0..a_d. Sign and normalisation are validated.
  static OffspringLaw finite(std::vector<double> rates);
  static OffspringLaw tabulated(std::vector<double> rates);
  /// f(s) = a0 (1 - s)^{1 + nu}.
  static OffspringLaw canonical(double nu, double a0);
  /// f(s) = c (1 - s)^{1 + nu} (1 + rho (1 - s)^p), so Lambda(y) = c y^nu (1 + rho y^p).
  /// Coefficient positivity is scanned up to `horizon`.
  static OffspringLaw perturbed(double nu, double c, double rho, double p, std::size_t horizon = 10000);

  Kind kind() const noexcept { return kind_; }
  bool is_stable() const noexcept { return !mixture_.empty(); }
  double nu() const noexcept { return nu_; }
  double a0() const noexcept { return rate(0); }
  double a1() const noexcept { return rate(1); }
  double rate(std::size_t j) const;
  std::vector<double> rates(std::size_t horizon) const;
  /// sum_{j > k} a_j.
  double tail(std::size_t k) const;
  double lifetime_mean() const { return 1.0 / -a1(); }
  double criticality() const noexcept { return criticality_; }
  bool critical() const noexcept { return criticality_ == 0.0; }
  /// Largest j with a_j != 0, or 0 for infinite support.
  std::size_t degree() const noexcept { return mixture_.empty() ? rates_.size() - 1 : 0; }

  double f(double s) const;
  double f_prime(double s) const;
  /// f(1 - y), accurate for small y.
  double f_at_complement(double y) const;
  /// f'(1 - y).
  double f_prime_at_complement(double y) const;
  /// Lambda(y) = f(1 - y) / y.
  double Lambda(double y) const;
  /// sigma(y) = nu - y Lambda'(y) / Lambda(y).
  double sigma(double y) const;

  Series series(std::size_t order) const;
  Series taylor(double c, std::size_t order) const;
  /// f(F(s)) as a series.
  Series compose(const Series& F) const;

  /// Power-mixture form of f; empty for finite and tabulated laws.
  const PowerMixture& mixture() const noexcept { return mixture_; }

  /// L with Lambda(y) = y^nu L(1/y). Throws DomainError for finite laws.
  KaramataFunction slowly_varying() const;

 private:
  OffspringLaw() = default;

  Kind kind_ = Kind::Finite;
  double nu_ = 1.0;
  double criticality_ = 0.0;
  std::vector<double> rates_;  // finite and tabulated
  PowerMixture mixture_;       // stable families
  double c_ = 0.0;
  double rho_ = 0.0;
  double p_ = 0.0;
};

class ImmigrationLaw {
 public:
  enum class Kind { Finite, Canonical, Perturbed, Tabulated };

  static ImmigrationLaw finite(std::vector<double> rates);
  static ImmigrationLaw tabulated(std::vector<double> rates);
  /// h(s) = -c (1 - s)^delta.
  static ImmigrationLaw canonical(double delta, double c);
  /// h(s) = -c (1 - s)^delta - kappa (1 - s)^{2 delta}.
  static ImmigrationLaw perturbed(double delta, double c, double kappa, std::size_t horizon = 10000);

  Kind kind() const noexcept { return kind_; }
  bool is_stable() const noexcept { return !mixture_.empty(); }
  double delta() const noexcept { return delta_; }
  double c() const noexcept { return c_; }
  double kappa() const noexcept { return kappa_; }
  double rate(std::size_t k) const;
  std::vector<double> rates(std::size_t horizon) const;
  double tail(std::size_t k) const;
  double b0() const { return rate(0); }
  /// h'(1-), +inf when delta < 1.
  double hprime1() const noexcept { return hprime1_; }
  std::size_t degree() const noexcept { return mixture_.empty() ? rates_.size() - 1 : 0; }

  double h(double s) const;
  double h_at_complement(double y) const;
  Series series(std::size_t order) const;
  Series compose(const Series& F) const;

  const PowerMixture& mixture() const noexcept { return mixture_; }

  /// ell with -h(1 - y) = y^delta ell(1/y).
  KaramataFunction slowly_varying() const;

 private:
  ImmigrationLaw() = default;

  Kind kind_ = Kind::Finite;
  double delta_ = 1.0;
  double c_ = 0.0;
  double kappa_ = 0.0;
  double hprime1_ = 0.0;
  std::vector<double> rates_;
  PowerMixture mixture_;
};

OffspringLaw make_stable_offspring(double nu, double a0);
ImmigrationLaw make_stable_immigration(double delta, double c, double kappa = 0.0);

enum class Regime { PositiveRecurrent, Transient, QProcess };

struct RegimeParams {
  double nu;
  double delta;
  double gamma;
  double mu;
  double beta;
  Regime classification;
  /// gamma < 0 and mu > 0.
  bool limit_theorem_eligible;
};

RegimeParams classify(const OffspringLaw& f, const ImmigrationLaw& h);
const char* to_string(Regime r);

}  // namespace critbranch
