#pragma once

// Slowly varying functions with an explicit remainder, and the quantities the
// limit theorems build from them: the normalizer N(t), the remainder limit
// (lambda cap), and the ratio of immigration to offspring slow parts.

#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "critbranch/series.hpp"

namespace critbranch {

class KaramataFunction {
 public:
  enum class Form { Constant, LogCorrected, PowerCorrected, LogPower, Table };

  /// L(x) = c.
  static KaramataFunction constant(double c);
  /// L(x) = c (1 + alpha / ln(x + 1)).
  static KaramataFunction log_corrected(double alpha, double c = 1.0);
  /// L(x) = c (1 + rho x^-p).
  static KaramataFunction power_corrected(double c, double rho, double p);
  /// L(x) = c (1 + alpha ln(x + 1) x^-p).
  static KaramataFunction log_power(double alpha, double p, double c = 1.0);
  /// Log-log linear interpolation through (x, L) points, flat outside the table.
  static KaramataFunction table(std::vector<std::pair<double, double>> points);

  Form form() const noexcept { return form_; }
  double operator()(double x) const;
  double limit() const;
  /// p for power-type remainders, 0 for logarithmic ones, +inf for constants.
  double remainder_exponent() const;
  /// x L'(x) / L(x). For L(x(1+k)) = L(x)(1 + k eps(x) + O(k^2)).
  double log_derivative(double x) const;
  /// L(lambda x) / L(x) - 1.
  double omega(double x, double lambda) const;
  /// Coefficients of L(1 / y(s)) for a series y with y_0 > 0.
  Series of_inverse(const Series& y) const;
  /// L(x) / limit - 1, computed without cancellation for the analytic forms.
  double excess(double x) const;
  /// Coefficients of excess(1 / y(s)).
  Series excess_of_inverse(const Series& y) const;
  bool is_constant() const noexcept { return form_ == Form::Constant || (form_ != Form::Table && a_ == 0.0); }

  double c() const noexcept { return c_; }
  double alpha() const noexcept { return a_; }
  double p() const noexcept { return p_; }

 private:
  KaramataFunction(Form form, double c, double a, double p) : form_(form), c_(c), a_(a), p_(p) {}

  Form form_;
  double c_;
  double a_;  // alpha or rho
  double p_;
  std::vector<std::pair<double, double>> table_;  // (ln x, ln L)
};

/// Normalizer N(t) solving N^nu L((nu t)^{1/nu} / N) = 1, or one of the two
/// expressions used for plotting.
class NormalizerN {
 public:
  static NormalizerN half_log();          // 1 + 1 / (2 ln(t + 1))
  static NormalizerN log_power(double nu);  // 1 + ln(t + 1) / t^nu
  static NormalizerN fixed_point(KaramataFunction L, double nu);

  double operator()(double t) const { return eval_(t); }

 private:
  explicit NormalizerN(std::function<double(double)> eval) : eval_(std::move(eval)) {}
  std::function<double(double)> eval_;
};

struct LimitEstimate {
  double value = 0.0;
  bool converged = false;
  bool shortcut = false;  // closed form used instead of probing
  std::array<double, 3> probes{};
};

/// lim x^nu (L(2x)/L(x) - 1). Probes at 1e4, 1e5, 1e6 with Aitken extrapolation.
/// Throws DivergenceError when successive probes grow by more than 10% per decade.
LimitEstimate lambda_cap(const KaramataFunction& L, double nu);

struct FixedPoint {
  double value;
  int iterations;
  double residual;  // |N^nu L(tau / N) - 1|
};

/// Fixed point of N = L((nu t)^{1/nu} / N)^{-1/nu}. Throws NonConvergenceError.
FixedPoint solve_N(const KaramataFunction& L, double nu, double t);

/// Ratio of the immigration slow part to the offspring slow part.
struct SlowRatio {
  KaramataFunction Lf;
  KaramataFunction Lh;
  double C_L;
  std::array<double, 3> probes;  // value at 1e4, 1e5, 1e6

  double operator()(double t) const { return Lh(t) / Lf(t); }
  Series of_inverse(const Series& y) const;
  /// C_L - ratio(t), free of the cancellation in the direct difference.
  double deficit(double t) const;
  /// Coefficients of deficit(1 / y(s)).
  Series deficit_of_inverse(const Series& y) const;
  bool is_constant() const noexcept { return Lf.is_constant() && Lh.is_constant(); }
};

SlowRatio ratio_L(const KaramataFunction& Lf, const KaramataFunction& Lh);

/// L(1/phi) - L(1/y)(1 + K(y) eps(1/y)) with phi = y - y K(y).
double lemma3_check(const KaramataFunction& L, double nu, const std::function<double(double)>& K, double y);

struct Lemma4Report {
  std::array<double, 4> t{1e3, 1e4, 1e5, 1e6};
  std::array<double, 4> ratio{};
  double limit_estimate = 0.0;
  bool converged = false;  // last two probes agree within 5%
  bool passed = false;     // last probe within 5% of 1
};

/// (lambda - L(t)) index t^index / lambda with lambda = lim L.
/// Throws InapplicableError when L has no remainder.
Lemma4Report lemma4_check(const KaramataFunction& L, double index);

}  // namespace critbranch
