#include "critbranch/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "critbranch/errors.hpp"
#include "critbranch/quadrature.hpp"

namespace critbranch {

namespace {

constexpr double kEligibilityTolerance = 1e-6;

void require_s(double s) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("s must lie in [0, 1)");
}

void require_canonical(const OffspringLaw& f, const char* op) {
  if (f.kind() != OffspringLaw::Kind::Canonical) throw DomainError(std::string(op) + ": canonical law required");
}

Series one_minus(const Series& F) { return (-F) + 1.0; }

// Derivative of the integral term of ln U at F, as a series:
// -(C_L - ratio(1/(1-F))) (1-F)^{-1-|gamma|}.
Series B_prime_of(const RegimeParams& regime, const SlowRatio& ratio, const Series& y) {
  return -mul(ratio.deficit_of_inverse(y), pow_series(y, -1.0 - std::abs(regime.gamma)));
}

double expected_decay_tolerance(double expected) { return 0.15 * std::abs(expected); }

}  // namespace

const char* to_string(MeasureTag tag) {
  switch (tag) {
    case MeasureTag::M:
      return "M";
    case MeasureTag::U:
      return "U";
    case MeasureTag::Pi:
      return "pi";
    case MeasureTag::V:
      return "V";
  }
  return "?";
}

// --- M ------------------------------------------------------------------------

double M_of_complement(const OffspringLaw& f, double y) {
  if (!(y > 0.0 && y <= 1.0)) throw DomainError("M_of_complement: y must lie in (0, 1]");
  if (y == 1.0) return 0.0;
  return integrate([&f](double z) { return 1.0 / f.f_at_complement(z); }, y, 1.0).value;
}

double M_gf(const OffspringLaw& f, double s) {
  require_s(s);
  if (s == 0.0) return 0.0;
  if (s <= 0.5) return integrate([&f](double x) { return 1.0 / f.f(x); }, 0.0, s).value;
  return M_of_complement(f, 1.0 - s);
}

double M_gf_closed(const OffspringLaw& f, double s) {
  require_canonical(f, "M_gf_closed");
  require_s(s);
  // (1/nu)(1/Lambda(1-s) - 1/a0) = ((1-s)^{-nu} - 1) / (nu a0)
  return std::expm1(-f.nu() * std::log1p(-s)) / (f.nu() * f.a0());
}

InvariantMeasure M_series(const OffspringLaw& f, std::size_t N) {
  if (N == 0) return {MeasureTag::M, Series::constant(0.0, 0), {}, "mu_0 = M(0) = 0"};
  const Series inv = reciprocal(f.series(N - 1));
  InvariantMeasure m{MeasureTag::M, integrate_series(inv), {}, "mu_0 = M(0) = 0"};
  if (f.kind() == OffspringLaw::Kind::Canonical) {
    m.gf_closed = [f](double s) { return M_gf_closed(f, s); };
  }
  return m;
}

std::vector<double> M_coefficients_closed(double nu, double a0, std::size_t N) {
  std::vector<double> mu(N + 1, 0.0);
  if (N >= 1) mu[1] = 1.0 / a0;
  for (std::size_t j = 2; j <= N; ++j) {
    const double jd = static_cast<double>(j);
    mu[j] = mu[j - 1] * (nu + jd - 1.0) / jd;
  }
  return mu;
}

// --- survival -------------------------------------------------------------------

double theorem1_q(double nu, double a0, const NormalizerN& N, double t) {
  if (!(t > 0.0)) throw DomainError("theorem1_q: t must be positive");
  return N(t) / std::pow(nu * t, 1.0 / nu) * (1.0 + std::log(a0 * nu * t) / (std::pow(nu, 3) * t));
}

BalanceResiduals lemma1_balance(const OffspringLaw& f, double t, double s, Tolerance tol) {
  require_s(s);
  BalanceResiduals r;
  if (t == 0.0) return r;
  const TransitionSolution sol = solve_F(f, t, s, tol);
  const double nu = f.nu();
  const double lam0 = f.Lambda(1.0 - s);
  r.lhs = 1.0 / f.Lambda(sol.R) - 1.0 / lam0;
  r.exact = r.lhs - nu * t + *sol.sigma_integral;
  r.asym = r.lhs - (nu * t - std::log(lam0 * nu * t) / nu);
  return r;
}

double theorem2_predicted(double nu, double a0, double t) {
  const double x = a0 * nu * t;
  return (1.0 / x) * (1.0 + std::log(x) / (nu * nu * t));
}

double theorem2_measured(const OffspringLaw& f, double t, Tolerance tol) {
  const TransitionSolution sol = solve_F(f, t, 0.0, tol);
  return *sol.dFds / sol.R;
}

RateReport theorem2_convergence(const OffspringLaw& f, const std::vector<double>& t_grid, bool with_log_factor) {
  RateReport rep;
  rep.quantity = "a0 nu t p1(t)/q(t) - 1";
  rep.t = t_grid;
  const auto sols = solve_F_grid(f, t_grid, 0.0);
  for (const auto& sol : sols) {
    const double v = f.a0() * f.nu() * sol.t * (*sol.dFds / sol.R);
    rep.value.push_back(v);
    rep.error.push_back(v - 1.0);
  }
  rep.fit = fit_loglog(rep.t, rep.error, with_log_factor);
  rep.expected_exponent = -1.0;
  rep.tolerance = 0.1;
  rep.passed = rep.fit.valid && std::abs(rep.fit.exponent + 1.0) <= rep.tolerance && rep.fit.r_squared >= 0.99;
  return rep;
}

RateReport theorem3_slowvar(const OffspringLaw& f, const std::vector<double>& t_grid) {
  RateReport rep;
  rep.quantity = "(nu t)^(1+1/nu) p1(t) a0";
  rep.t = t_grid;
  const double nu = f.nu();
  const auto sols = solve_F_grid(f, t_grid, 0.0);
  for (const auto& sol : sols) rep.value.push_back(std::pow(nu * sol.t, 1.0 + 1.0 / nu) * *sol.dFds * f.a0());
  for (std::size_t i = 1; i < rep.value.size(); ++i) rep.error.push_back(rep.value[i] / rep.value[i - 1] - 1.0);
  rep.expected_exponent = 0.0;
  rep.tolerance = 0.01;
  rep.passed = !rep.error.empty() && std::abs(rep.error.back()) <= rep.tolerance;
  rep.note = "error[i] is the ratio between grid points i+1 and i, minus 1";
  return rep;
}

// --- transient regime ---------------------------------------------------------

SlowRatio slow_ratio(const OffspringLaw& f, const ImmigrationLaw& h) {
  return ratio_L(f.slowly_varying(), h.slowly_varying());
}

void require_eligible(const RegimeParams& regime, const SlowRatio& ratio) {
  if (!(regime.gamma < 0.0)) throw EligibilityError("transient limit requires gamma < 0");
  if (!(regime.mu > 0.0)) throw EligibilityError("transient limit requires mu = 2 delta - nu > 0");
  if (std::abs(ratio.C_L - std::abs(regime.gamma)) > kEligibilityTolerance) {
    throw EligibilityError("transient limit requires C_L = |gamma|");
  }
}

double tail_integral(const RegimeParams& regime, const SlowRatio& ratio, double x) {
  if (ratio.is_constant()) return 0.0;
  if (std::isinf(x)) return 0.0;
  const double g = std::abs(regime.gamma);
  return integrate_tail([&](double u) { return ratio.deficit(u) * std::pow(u, g - 1.0); }, x, 1e-12).value;
}

double B_mu(const RegimeParams& regime, const SlowRatio& ratio, double s) {
  require_eligible(regime, ratio);
  require_s(s);
  return tail_integral(regime, ratio, 1.0 / (1.0 - s));
}

double log_U_gf(const RegimeParams& regime, const SlowRatio& ratio, double s) {
  const double b = B_mu(regime, ratio, s);
  return std::exp(-std::abs(regime.gamma) * std::log1p(-s)) + b;
}

double U_gf(const RegimeParams& regime, const SlowRatio& ratio, double s) {
  return std::exp(log_U_gf(regime, ratio, s));
}

InvariantMeasure U_series(const RegimeParams& regime, const SlowRatio& ratio, std::size_t N) {
  require_eligible(regime, ratio);
  const double g = std::abs(regime.gamma);
  const Series y = Series::binomial(1.0, N);  // 1 - s
  Series logU = Series::binomial(-g, N) + B_mu(regime, ratio, 0.0);
  if (!ratio.is_constant() && N >= 1) {
    logU += integrate_series(B_prime_of(regime, ratio, y.truncated(N - 1)));
  }
  InvariantMeasure m{MeasureTag::U, exp_series(logU), {}, "u_0 = U(0)"};
  m.gf_closed = [regime, ratio](double s) { return U_gf(regime, ratio, s); };
  return m;
}

RateReport theorem4_convergence(const OffspringLaw& f, const ImmigrationLaw& h, const std::vector<double>& t_grid,
                                double s) {
  const RegimeParams regime = classify(f, h);
  const SlowRatio ratio = slow_ratio(f, h);
  require_eligible(regime, ratio);
  require_s(s);
  const double g = std::abs(regime.gamma);
  const double logU = log_U_gf(regime, ratio, s);
  const auto q_sols = solve_F_grid(f, t_grid, 0.0);

  RateReport rep;
  rep.quantity = "exp(T(t)) P0(t;s) / U(s) - 1";
  rep.t = t_grid;
  const KaramataFunction Lf = f.slowly_varying();
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double T = std::exp(-g * q_sols[i].log_R);
    const double log_P = *mbis_P(f, h, 0, t, s).log_P;
    const double e = std::expm1(T + log_P - logU);
    rep.value.push_back(std::exp(T + log_P));
    rep.error.push_back(e);
    if (t > 0.0) {
      const double nu = regime.nu;
      const double n = solve_N(Lf, nu, t).value;
      rep.predicted.push_back(g / (regime.delta * regime.mu) * std::pow(n, regime.mu) /
                              std::pow(nu * t, regime.mu / nu));
    } else {
      rep.predicted.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  rep.fit = fit_loglog(rep.t, rep.error);
  if (ratio.is_constant()) {
    if (s == 0.0) {
      double worst = 0.0;
      for (double e : rep.error) worst = std::max(worst, std::abs(e));
      rep.passed = worst <= 1e-8;
      rep.note = "constant slow ratio: the tail integral vanishes and e(t) = 0 at s = 0 up to solver error";
      return rep;
    }
    rep.expected_exponent = g / regime.nu - 1.0;
    rep.note = "constant slow ratio: the tail integral vanishes; e(t) decays at the rate of tau(t;s)^|gamma| - "
               "tau(t)^|gamma|, not at the zeta rate";
  } else {
    rep.expected_exponent = -regime.mu / regime.nu;
    rep.note = "nonconstant slow ratio: decay compared with the zeta rate (nu t)^(-mu/nu)";
  }
  rep.tolerance = expected_decay_tolerance(rep.expected_exponent);
  rep.passed = rep.fit.valid && std::abs(rep.fit.exponent - rep.expected_exponent) <= rep.tolerance;
  return rep;
}

double log_pi_gf(const OffspringLaw& f, const ImmigrationLaw& h, double s) {
  require_s(s);
  if (s == 0.0) return 0.0;
  return integrate([&](double z) { return -h.h_at_complement(z) / f.f_at_complement(z); }, 1.0 - s, 1.0).value;
}

double pi_gf(const OffspringLaw& f, const ImmigrationLaw& h, double s) { return std::exp(log_pi_gf(f, h, s)); }

InvariantMeasure pi_series(const OffspringLaw& f, const ImmigrationLaw& h, std::size_t N) {
  InvariantMeasure m{MeasureTag::Pi, Series::constant(1.0, 0), {}, "pi_0 = 1"};
  if (N >= 1) {
    const Series ratio = mul(-h.series(N - 1), reciprocal(f.series(N - 1)));
    m.coeffs = exp_series(integrate_series(ratio));
  }
  m.gf_closed = [f, h](double s) { return pi_gf(f, h, s); };
  return m;
}

Theorem6Result theorem6_u0(const OffspringLaw& f, const ImmigrationLaw& h, double t) {
  const RegimeParams regime = classify(f, h);
  const SlowRatio ratio = slow_ratio(f, h);
  require_eligible(regime, ratio);
  const double g = std::abs(regime.gamma);
  Theorem6Result r;
  r.B0 = B_mu(regime, ratio, 0.0);
  r.u0 = std::exp(1.0 + r.B0);
  const TransitionSolution sol = mbis_P(f, h, 0, t, 0.0);
  r.J_mu = tail_integral(regime, ratio, sol.tau);
  const double T = std::exp(-g * sol.log_R);
  r.log_T = std::log(T);
  r.scaled_p00 = std::exp(T + *sol.log_P);
  r.residual = r.scaled_p00 - r.u0 * (1.0 - r.J_mu);
  return r;
}

// --- conditioned system ----------------------------------------------------------

ConditionedResult conditioned_gf(const OffspringLaw& f, double t, double s) {
  require_s(s);
  if (!(t > 0.0)) throw DomainError("conditioned_gf: t must be positive");
  const TransitionSolution at_s = solve_F(f, t, s);
  const TransitionSolution at_0 = solve_F(f, t, 0.0);
  if (!std::isfinite(at_0.log_R)) throw OverflowError("conditioned_gf: survival probability underflows");
  ConditionedResult r;
  r.q = at_0.R;
  r.R = at_s.R;
  r.PS = -std::expm1(at_s.log_R - at_0.log_R);
  r.slack = f.nu() * t * r.PS;
  r.M = M_gf(f, s);
  r.theorem8_error = r.M > 0.0 ? r.slack / r.M - 1.0 : 0.0;
  return r;
}

RateReport theorem8_convergence(const OffspringLaw& f, double s, const std::vector<double>& t_grid) {
  require_s(s);
  RateReport rep;
  rep.quantity = "M(s) - nu t PS(t;s)";
  rep.t = t_grid;
  const double M = M_gf(f, s);
  const auto at_s = solve_F_grid(f, t_grid, s);
  const auto at_0 = solve_F_grid(f, t_grid, 0.0);
  bool monotone = true;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double slack = f.nu() * t_grid[i] * -std::expm1(at_s[i].log_R - at_0[i].log_R);
    rep.value.push_back(slack);
    rep.error.push_back(M - slack);
    if (i > 0 && !(std::abs(rep.error[i]) < std::abs(rep.error[i - 1]))) monotone = false;
  }
  rep.fit = fit_loglog(rep.t, rep.error, true);
  rep.expected_exponent = -1.0;
  rep.tolerance = 0.1;
  rep.passed = monotone && rep.fit.valid && std::abs(rep.fit.exponent + 1.0) <= rep.tolerance;
  rep.note = monotone ? "gap shrinks monotonically" : "gap is not monotone on the grid";
  return rep;
}

Theorem9Result theorem9_V(const OffspringLaw& f, double t, double s) {
  const ConditionedResult c = conditioned_gf(f, t, s);
  const double p1 = dF_ds(f, t, 0.0);
  Theorem9Result r;
  r.q_over_p1 = c.q / p1;
  r.V = r.q_over_p1 * c.PS;
  r.limit = f.a0() * c.M;
  return r;
}

std::vector<double> theorem9_coefficient_ratios(const OffspringLaw& f, double t, std::size_t N) {
  if (N < 1) throw DomainError("theorem9_coefficient_ratios: N must be at least 1");
  const Series F = *solve_F_series(f, t, N).F_series;
  std::vector<double> out(N + 1);
  for (std::size_t j = 0; j <= N; ++j) out[j] = F[j] / F[1];
  return out;
}

InvariantMeasure V_series(const OffspringLaw& f, std::size_t N) {
  InvariantMeasure m = M_series(f, N);
  m.tag = MeasureTag::V;
  m.coeffs *= f.a0();
  m.normalization = "v_j = a0 mu_j";
  if (m.gf_closed) m.gf_closed = [f](double s) { return f.a0() * M_gf_closed(f, s); };
  return m;
}

InvarianceResult invariance_check(const InvariantMeasure& measure, const OffspringLaw& f, const ImmigrationLaw& h,
                                  double t, std::size_t N) {
  if (measure.tag != MeasureTag::U && measure.tag != MeasureTag::Pi) {
    throw DomainError("invariance_check: measure must be tagged U or pi");
  }
  if (N < 1 || measure.coeffs.order() < N) throw DomainError("invariance_check: measure has fewer than N coefficients");
  const TransitionSolution sol = mbis_P_series(f, h, 0, t, N);
  const Series& F = *sol.F_series;
  const Series& G = *sol.G_series;
  const Series dF = differentiate_series(F);
  const double F0 = F[0];

  Series log_w;
  if (measure.tag == MeasureTag::U) {
    const RegimeParams regime = classify(f, h);
    const SlowRatio ratio = slow_ratio(f, h);
    require_eligible(regime, ratio);
    const Series y = one_minus(F);
    log_w = pow_series(y, -std::abs(regime.gamma)) + B_mu(regime, ratio, F0);
    if (!ratio.is_constant()) {
      log_w += integrate_series(mul(B_prime_of(regime, ratio, y.truncated(N - 1)), dF));
    }
  } else {
    const Series Fm = F.truncated(N - 1);
    const Series integrand = mul(mul(-h.compose(Fm), reciprocal(f.compose(Fm))), dF);
    log_w = integrate_series(integrand) + log_pi_gf(f, h, F0);
  }
  const Series image = exp_series(log_w + G);

  InvarianceResult r;
  for (std::size_t j = 0; j <= N; ++j) {
    const double u = measure.coeffs[j];
    r.max_residual = std::max(r.max_residual, std::abs(image[j] - u) / std::max(std::abs(u), 1.0));
  }
  const double uN = std::abs(measure.coeffs[N]);
  const double ratio_tail = N >= 1 && measure.coeffs[N - 1] != 0.0 ? uN / std::abs(measure.coeffs[N - 1]) : 0.0;
  r.tail_estimate = ratio_tail < 1.0 ? uN * ratio_tail / (1.0 - ratio_tail) : std::numeric_limits<double>::infinity();
  r.truncation_dominated = r.max_residual >= 0.1 * r.tail_estimate && r.max_residual <= 10.0 * r.tail_estimate;
  return r;
}

TauberianReport tauberian_partial_sums(const OffspringLaw& f, const std::vector<double>& n_grid) {
  require_canonical(f, "tauberian_partial_sums");
  TauberianReport rep;
  if (n_grid.empty()) return rep;
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > n_grid[i - 1])) throw DomainError("tauberian_partial_sums: grid must be increasing");
  }
  const double nu = f.nu();
  const auto n_max = static_cast<std::size_t>(n_grid.back());
  const std::vector<double> mu = M_coefficients_closed(nu, f.a0(), n_max);
  double sum = 0.0;
  std::size_t next = 0;
  for (std::size_t j = 0; j <= n_max && next < n_grid.size(); ++j) {
    sum += mu[j];
    while (next < n_grid.size() && static_cast<std::size_t>(n_grid[next]) == j) {
      const double n = n_grid[next];
      const double pred = std::pow(n, nu) / (nu * nu * std::tgamma(nu));
      rep.n.push_back(n);
      rep.sums.push_back(sum);
      rep.predicted.push_back(pred);
      rep.ratio.push_back(sum / pred);
      ++next;
    }
  }
  rep.fit = fit_loglog(rep.n, rep.sums);
  return rep;
}

}  // namespace critbranch
