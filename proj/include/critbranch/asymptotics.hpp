#pragma once

// Limit objects of the critical system and the convergence checks against them:
// the invariant measures M, U, pi and V, the survival asymptotics, the Slack
// function of the conditioned system, and the Tauberian partial sums.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "critbranch/karamata.hpp"
#include "critbranch/kolmogorov.hpp"
#include "critbranch/laws.hpp"
#include "critbranch/rate_fit.hpp"
#include "critbranch/series.hpp"

namespace critbranch {

enum class MeasureTag { M, U, Pi, V };
const char* to_string(MeasureTag tag);

struct InvariantMeasure {
  MeasureTag tag = MeasureTag::M;
  Series coeffs;
  std::function<double(double)> gf_closed;  // empty when there is no closed form
  std::string normalization;
};

// --- M(s) = int_0^s dx / f(x) ----------------------------------------------

/// By quadrature.
double M_gf(const OffspringLaw& f, double s);
/// M(1 - y) by quadrature in y, accurate for small y.
double M_of_complement(const OffspringLaw& f, double y);
/// (1/nu)(1/Lambda(1 - s) - 1/a0); canonical laws only.
double M_gf_closed(const OffspringLaw& f, double s);
/// Integrated reciprocal series of f.
InvariantMeasure M_series(const OffspringLaw& f, std::size_t N);
/// mu_j = binom(nu + j - 1, j) / (nu a0), mu_0 = 0.
std::vector<double> M_coefficients_closed(double nu, double a0, std::size_t N);

// --- survival probability and local probabilities ---------------------------

/// [N(t) / (nu t)^{1/nu}] (1 + ln(a0 nu t) / (nu^3 t)).
double theorem1_q(double nu, double a0, const NormalizerN& N, double t);

struct BalanceResiduals {
  double lhs = 0.0;    // 1/Lambda(R(t;s)) - 1/Lambda(1 - s)
  double exact = 0.0;  // lhs - nu t + int_0^t sigma(R(u;s)) du
  double asym = 0.0;   // lhs - [nu t - (1/nu) ln(Lambda(1 - s) nu t)]
};
BalanceResiduals lemma1_balance(const OffspringLaw& f, double t, double s, Tolerance tol = {});

/// (1/(a0 nu t)) (1 + ln(a0 nu t) / (nu^2 t)).
double theorem2_predicted(double nu, double a0, double t);
/// p_1(t) / q(t) from the solver.
double theorem2_measured(const OffspringLaw& f, double t, Tolerance tol = {});
/// Decay of |a0 nu t p_1(t)/q(t) - 1|.
RateReport theorem2_convergence(const OffspringLaw& f, const std::vector<double>& t_grid, bool with_log_factor = true);
/// (nu t)^{1 + 1/nu} p_1(t) a0 on the grid and its ratios between consecutive grid points.
RateReport theorem3_slowvar(const OffspringLaw& f, const std::vector<double>& t_grid);

// --- transient immigration regime -------------------------------------------

/// The slow ratio ell / L of a pair of laws.
SlowRatio slow_ratio(const OffspringLaw& f, const ImmigrationLaw& h);
/// Throws EligibilityError unless gamma < 0, mu > 0 and |C_L - |gamma|| <= 1e-6.
void require_eligible(const RegimeParams& regime, const SlowRatio& ratio);

/// int_x^inf (C_L - ratio(u)) u^{|gamma| - 1} du.
double tail_integral(const RegimeParams& regime, const SlowRatio& ratio, double x);
/// The integral term of ln U(s), i.e. tail_integral at x = 1/(1 - s).
double B_mu(const RegimeParams& regime, const SlowRatio& ratio, double s);
double log_U_gf(const RegimeParams& regime, const SlowRatio& ratio, double s);
double U_gf(const RegimeParams& regime, const SlowRatio& ratio, double s);
InvariantMeasure U_series(const RegimeParams& regime, const SlowRatio& ratio, std::size_t N);

/// e(t) = exp(T(t)) P_0(t;s) / U(s) - 1 with T(t) = tau(t)^{|gamma|}, in log space.
RateReport theorem4_convergence(const OffspringLaw& f, const ImmigrationLaw& h, const std::vector<double>& t_grid,
                                double s);

/// pi(s) = exp(-int_0^s h/f).
double log_pi_gf(const OffspringLaw& f, const ImmigrationLaw& h, double s);
double pi_gf(const OffspringLaw& f, const ImmigrationLaw& h, double s);
InvariantMeasure pi_series(const OffspringLaw& f, const ImmigrationLaw& h, std::size_t N);

struct Theorem6Result {
  double u0 = 0.0;  // exp(1 + B_mu(0))
  double B0 = 0.0;
  double J_mu = 0.0;  // tail_integral at tau(t)
  double log_T = 0.0;  // ln T(t)
  double scaled_p00 = 0.0;  // exp(T(t)) p_00(t)
  double residual = 0.0;    // scaled_p00 - u0 (1 - J_mu)
};
Theorem6Result theorem6_u0(const OffspringLaw& f, const ImmigrationLaw& h, double t);

// --- conditioned system -----------------------------------------------------

struct ConditionedResult {
  double q = 0.0;
  double PS = 0.0;     // 1 - R(t;s)/q(t)
  double slack = 0.0;  // nu t PS
  double M = 0.0;
  double theorem8_error = 0.0;  // slack / M - 1
  double R = 0.0;
};
ConditionedResult conditioned_gf(const OffspringLaw& f, double t, double s);
/// Decay of M(s) - slack(t;s); expects exponent -1 up to a log factor.
RateReport theorem8_convergence(const OffspringLaw& f, double s, const std::vector<double>& t_grid);

struct Theorem9Result {
  double V = 0.0;      // (q / p_1) PS
  double limit = 0.0;  // a0 M(s)
  double q_over_p1 = 0.0;
};
Theorem9Result theorem9_V(const OffspringLaw& f, double t, double s);
/// p_j(t) / p_1(t) for j = 0..N.
std::vector<double> theorem9_coefficient_ratios(const OffspringLaw& f, double t, std::size_t N);
InvariantMeasure V_series(const OffspringLaw& f, std::size_t N);

struct InvarianceResult {
  double max_residual = 0.0;
  double tail_estimate = 0.0;
  bool truncation_dominated = false;  // residual within a factor 10 of the tail estimate
};
/// Coefficients of W(F(t;.)) exp(G(t;.)) against those of W, for W = U or pi.
InvarianceResult invariance_check(const InvariantMeasure& measure, const OffspringLaw& f, const ImmigrationLaw& h,
                                  double t, std::size_t N);

struct TauberianReport {
  std::vector<double> n;
  std::vector<double> sums;
  std::vector<double> predicted;  // n^nu / (nu^2 Gamma(nu))
  std::vector<double> ratio;
  LogLogFit fit;
};
/// Partial sums of mu_j for canonical laws.
TauberianReport tauberian_partial_sums(const OffspringLaw& f, const std::vector<double>& n_grid);

}  // namespace critbranch
