#pragma once

// Truncated formal power series over double coefficients.
//
// A Series of order N stores c_0..c_N. Coefficients above N are unknown, so
// binary operations truncate to the smaller order of their operands.

#include <cstddef>
#include <span>
#include <vector>

namespace critbranch {

class Series {
 public:
  Series() = default;
  explicit Series(std::vector<double> coeffs);

  static Series constant(double c, std::size_t order);
  static Series identity(std::size_t order);  // s
  /// Coefficients of scale * (1 - s)^alpha.
  static Series binomial(double alpha, std::size_t order, double scale = 1.0);

  std::size_t order() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  bool empty() const noexcept { return coeffs_.empty(); }
  double operator[](std::size_t j) const { return coeffs_[j]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  const std::vector<double>& vector() const noexcept { return coeffs_; }

  Series truncated(std::size_t order) const;
  Series with_constant(double c0) const;

  Series& operator+=(const Series& rhs);
  Series& operator-=(const Series& rhs);
  Series& operator*=(double k);

 private:
  std::vector<double> coeffs_;
};

Series operator+(Series a, const Series& b);
Series operator-(Series a, const Series& b);
Series operator-(Series a);
Series operator*(Series a, double k);
Series operator*(double k, Series a);
Series operator+(Series a, double k);

/// Cauchy product truncated at min order. Parallel over output coefficients.
Series mul(const Series& a, const Series& b);
/// Single-threaded reference for `mul`.
Series mul_serial(const Series& a, const Series& b);

/// outer(inner(s)). When inner has a nonzero constant term the outer truncation
/// is first re-centred by a Taylor shift, which is exact only for polynomial
/// outers; expect about one decimal digit lost per 64 orders otherwise.
Series compose(const Series& outer, const Series& inner);
/// outer(c + x) given as a series in x, composed with an inner series whose
/// constant term equals c. The inner constant term is ignored.
Series compose_centered(const Series& outer_at_c, const Series& inner);
/// Coefficients of g(c + x) in x from the coefficients of g(s).
Series taylor_shift(const Series& g, double c);

/// exp(g) from E' = E g'. Throws OverflowError if g_0 > 700.
Series exp_series(const Series& g);
/// log(g) for g_0 > 0.
Series log_series(const Series& g);
/// g^alpha for g_0 > 0, by the power recurrence g P' = alpha g' P.
Series pow_series(const Series& g, double alpha);
/// 1 / g for g_0 != 0.
Series reciprocal(const Series& g);

/// Antiderivative with zero constant term; order N -> N + 1.
Series integrate_series(const Series& g);
/// Term-wise derivative; order N -> N - 1 (a constant stays order 0).
Series differentiate_series(const Series& g);

/// Horner evaluation, |s| <= 1.
double eval_at(const Series& g, double s);

}  // namespace critbranch
