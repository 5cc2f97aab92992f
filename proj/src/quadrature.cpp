#include "critbranch/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "critbranch/errors.hpp"

namespace critbranch {

namespace {

QuadResult checked(double value, double err, double l1, std::size_t levels, double tol) {
  const double limit = std::max(std::sqrt(tol), 1e-6) * std::max(1.0, l1);
  if (!std::isfinite(value) || !(err <= limit)) {
    throw QuadratureError("quadrature did not converge (achieved error " + std::to_string(err) + ")");
  }
  return {value, err, levels};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& g, double a, double b, double tol) {
  if (a == b) return {};
  if (!(a < b)) throw DomainError("integrate: need a < b");
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double v = ts.integrate(g, a, b, tol, &err, &l1, &levels);
  return checked(v, err, l1, levels, tol);
}

QuadResult integrate_tail(const std::function<double(double)>& g, double x, double tol) {
  if (!(x > 0.0)) throw DomainError("integrate_tail: x must be positive");
  auto h = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double u = x / v;
    if (!std::isfinite(u)) return 0.0;
    return g(u) * u / v;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double v = ts.integrate(h, 0.0, 1.0, tol, &err, &l1, &levels);
  return checked(v, err, l1, levels, tol);
}

}  // namespace critbranch
