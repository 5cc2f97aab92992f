#pragma once

// Adaptive quadrature (tanh-sinh, which tolerates integrable endpoint
// singularities) on finite intervals and on [x, inf).

#include <cstddef>
#include <functional>

namespace critbranch {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t levels = 0;
};

/// int_a^b g. Throws QuadratureError when the error estimate stays above ~sqrt(tol).
QuadResult integrate(const std::function<double(double)>& g, double a, double b, double tol = 1e-12);

/// int_x^inf g(u) du via u = x / v, v in (0, 1]. Requires x > 0.
QuadResult integrate_tail(const std::function<double(double)>& g, double x, double tol = 1e-12);

}  // namespace critbranch
