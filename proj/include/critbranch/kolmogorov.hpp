#pragma once

// Transition generating functions F(t;s) of the branching system and the
// immigration exponent G(t;s) = int_0^t h(F(u;s)) du.
//
// Scalar solves integrate ln R (R = 1 - F), ln dF/ds, G and int sigma(R) du
// jointly, which keeps R accurate to relative precision when it is tiny.

#include <cstddef>
#include <optional>
#include <vector>

#include "critbranch/laws.hpp"
#include "critbranch/series.hpp"

namespace critbranch {

struct Tolerance {
  double rtol = 1e-10;
  double atol = 1e-12;
};

inline constexpr Tolerance kSeriesTolerance{1e-9, 1e-11};

struct SolveDiagnostics {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  Tolerance tol{};
};

struct TransitionSolution {
  double t = 0.0;
  double s = 0.0;
  double F = 0.0;
  double R = 1.0;
  double log_R = 0.0;
  double tau = 1.0;
  std::optional<double> dFds;
  std::optional<double> G;
  std::optional<double> log_P;         // ln P_i(t;s)
  std::optional<double> sigma_integral;  // int_0^t sigma(R(u;s)) du
  std::optional<Series> F_series;
  std::optional<Series> G_series;
  std::optional<Series> P_series;
  SolveDiagnostics diagnostics;
};

/// F(t;s) for s in [0, 1], with dF/ds and the sigma integral.
TransitionSolution solve_F(const OffspringLaw& f, double t, double s, Tolerance tol = {});

/// Solutions at every point of an increasing time grid, integrated in one sweep.
std::vector<TransitionSolution> solve_F_grid(const OffspringLaw& f, const std::vector<double>& t_grid, double s,
                                             Tolerance tol = {});

/// R(t;s) = [(1 - s)^{-nu} + a0 nu t]^{-1/nu} for f(s) = a0 (1 - s)^{1 + nu}.
TransitionSolution closed_form_F(double nu, double a0, double t, double s);
/// As above; throws DomainError unless the law is canonical.
TransitionSolution closed_form_F(const OffspringLaw& f, double t, double s);

double dF_ds(const OffspringLaw& f, double t, double s, Tolerance tol = {});

/// Coefficients p_j(t) of F(t;.) up to order N (N <= 1024).
TransitionSolution solve_F_series(const OffspringLaw& f, double t, std::size_t N, Tolerance tol = kSeriesTolerance);

/// P_i(t;s) = F^i exp(G); result in `log_P` together with F and G.
TransitionSolution mbis_P(const OffspringLaw& f, const ImmigrationLaw& h, unsigned i, double t, double s,
                          Tolerance tol = {});

/// Series of P_i(t;.) (and F, G) up to order N.
TransitionSolution mbis_P_series(const OffspringLaw& f, const ImmigrationLaw& h, unsigned i, double t, std::size_t N,
                                 Tolerance tol = kSeriesTolerance);

/// E X(t) started from zero: h'(1) (e^{at} - 1)/a, or h'(1) t when a = 0.
/// Throws InfiniteMomentError when h'(1) is infinite.
double mean_X(const ImmigrationLaw& h, double a, double t);

}  // namespace critbranch
