#include "critbranch/rate_fit.hpp"

#include <array>
#include <cmath>

#include "critbranch/errors.hpp"

namespace critbranch {

namespace {

// Solves the k x k normal equations in place; returns false when singular.
template <std::size_t K>
bool solve(std::array<std::array<double, K>, K> a, std::array<double, K> b, std::array<double, K>& x) {
  for (std::size_t c = 0; c < K; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < K; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-300) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < K; ++r) {
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < K; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  for (std::size_t c = K; c-- > 0;) {
    double acc = b[c];
    for (std::size_t k = c + 1; k < K; ++k) acc -= a[c][k] * x[k];
    x[c] = acc / a[c][c];
  }
  return true;
}

template <std::size_t K>
LogLogFit fit_impl(const std::vector<double>& t, const std::vector<double>& y) {
  LogLogFit fit;
  fit.log_factor = K == 3;
  if (t.size() < K + 1) return fit;
  std::vector<std::array<double, K>> rows;
  std::vector<double> z;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 1.0) || y[i] == 0.0 || !std::isfinite(y[i])) continue;
    std::array<double, K> r{};
    r[0] = 1.0;
    r[1] = std::log(t[i]);
    if constexpr (K == 3) r[2] = std::log(std::log(t[i]));
    rows.push_back(r);
    z.push_back(std::log(std::abs(y[i])));
  }
  if (rows.size() < K + 1) return fit;
  std::array<std::array<double, K>, K> ata{};
  std::array<double, K> atb{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < K; ++a) {
      atb[a] += rows[i][a] * z[i];
      for (std::size_t b = 0; b < K; ++b) ata[a][b] += rows[i][a] * rows[i][b];
    }
  }
  std::array<double, K> x{};
  if (!solve<K>(ata, atb, x)) return fit;
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(z.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double pred = 0.0;
    for (std::size_t a = 0; a < K; ++a) pred += x[a] * rows[i][a];
    ss_res += (z[i] - pred) * (z[i] - pred);
    ss_tot += (z[i] - mean) * (z[i] - mean);
  }
  fit.intercept = x[0];
  fit.exponent = x[1];
  if constexpr (K == 3) fit.log_coefficient = x[2];
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.valid = true;
  return fit;
}

}  // namespace

LogLogFit fit_loglog(const std::vector<double>& t, const std::vector<double>& y, bool with_log_factor) {
  if (t.size() != y.size()) throw DomainError("fit_loglog: grid and values differ in length");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw DomainError("fit_loglog: grid must be strictly increasing");
  }
  return with_log_factor ? fit_impl<3>(t, y) : fit_impl<2>(t, y);
}

}  // namespace critbranch
