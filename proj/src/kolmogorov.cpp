#include "critbranch/kolmogorov.hpp"

#include <algorithm>
#include <cmath>

#include "critbranch/errors.hpp"
#include "critbranch/ode.hpp"

namespace critbranch {

namespace {

OdeOptions options_for(const Tolerance& tol) {
  if (!(tol.rtol > 0.0) || !(tol.atol > 0.0)) throw DomainError("tolerances must be positive");
  OdeOptions opt;
  opt.rtol = tol.rtol;
  opt.atol = tol.atol;
  return opt;
}

void check_point(double t, double s) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and nonnegative");
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("s must lie in [0, 1]");
}

// State: ln R, ln dF/ds, G, int sigma.
class ScalarSystem {
 public:
  ScalarSystem(const OffspringLaw& f, const ImmigrationLaw* h) : f_(f), h_(h) {}

  void operator()(double, const std::vector<double>& y, std::vector<double>& dy) const {
    const double R = std::exp(y[0]);
    dy[0] = -f_.Lambda(R);
    dy[1] = f_.f_prime_at_complement(R);
    dy[2] = h_ ? h_->h_at_complement(R) : 0.0;
    dy[3] = f_.sigma(R);
  }

 private:
  const OffspringLaw& f_;
  const ImmigrationLaw* h_;
};

TransitionSolution from_state(double t, double s, const std::vector<double>& y, bool with_G) {
  TransitionSolution sol;
  sol.t = t;
  sol.s = s;
  sol.log_R = y[0];
  sol.R = std::exp(y[0]);
  sol.F = -std::expm1(y[0]);
  sol.tau = std::exp(-y[0]);
  sol.dFds = std::exp(y[1]);
  sol.sigma_integral = y[3];
  if (with_G) sol.G = y[2];
  return sol;
}

// F(t;1) = 1 for a critical or subcritical law: nothing to integrate except dF/ds.
TransitionSolution at_one(const OffspringLaw& f, double t, bool with_G) {
  TransitionSolution sol;
  sol.t = t;
  sol.s = 1.0;
  sol.F = 1.0;
  sol.R = 0.0;
  sol.log_R = -INFINITY;
  sol.tau = INFINITY;
  sol.dFds = std::exp(f.criticality() * t);
  sol.sigma_integral = 0.0;
  if (with_G) sol.G = 0.0;
  return sol;
}

std::vector<TransitionSolution> sweep(const OffspringLaw& f, const ImmigrationLaw* h, const std::vector<double>& ts,
                                      double s, Tolerance tol) {
  std::vector<TransitionSolution> out;
  out.reserve(ts.size());
  double prev = 0.0;
  for (double t : ts) {
    check_point(t, s);
    if (t < prev) throw DomainError("time grid must be nondecreasing");
    prev = t;
  }
  if (s == 1.0) {
    for (double t : ts) out.push_back(at_one(f, t, h != nullptr));
    return out;
  }
  const OdeOptions opt = options_for(tol);
  ScalarSystem sys(f, h);
  std::vector<double> y{std::log1p(-s), 0.0, 0.0, 0.0};
  double t_now = 0.0;
  double hint = 0.0;
  SolveDiagnostics diag{0, 0, tol};
  for (double t : ts) {
    const OdeStats st = integrate_dp45(sys, t_now, t, y, opt, &hint);
    diag.steps += st.accepted;
    diag.rejected += st.rejected;
    t_now = t;
    out.push_back(from_state(t, s, y, h != nullptr));
    out.back().diagnostics = diag;
  }
  return out;
}

std::size_t check_order(std::size_t N) {
  if (N > 1024) throw DomainError("series order must not exceed 1024");
  return N;
}

}  // namespace

TransitionSolution solve_F(const OffspringLaw& f, double t, double s, Tolerance tol) {
  return sweep(f, nullptr, {t}, s, tol).front();
}

std::vector<TransitionSolution> solve_F_grid(const OffspringLaw& f, const std::vector<double>& t_grid, double s,
                                             Tolerance tol) {
  return sweep(f, nullptr, t_grid, s, tol);
}

TransitionSolution closed_form_F(double nu, double a0, double t, double s) {
  if (!(nu > 0.0 && nu <= 1.0)) throw DomainError("closed_form_F: nu must lie in (0, 1]");
  if (!(a0 > 0.0)) throw DomainError("closed_form_F: a0 must be positive");
  check_point(t, s);
  TransitionSolution sol;
  sol.t = t;
  sol.s = s;
  sol.sigma_integral = 0.0;
  if (s == 1.0) {
    sol.F = 1.0;
    sol.R = 0.0;
    sol.log_R = -INFINITY;
    sol.tau = INFINITY;
    sol.dFds = 1.0;
    return sol;
  }
  const double lx = std::log(std::exp(-nu * std::log1p(-s)) + a0 * nu * t);
  sol.log_R = -lx / nu;
  sol.R = std::exp(sol.log_R);
  sol.F = -std::expm1(sol.log_R);
  sol.tau = std::exp(lx / nu);
  sol.dFds = std::exp(-(1.0 + 1.0 / nu) * lx - (1.0 + nu) * std::log1p(-s));
  return sol;
}

TransitionSolution closed_form_F(const OffspringLaw& f, double t, double s) {
  if (f.kind() != OffspringLaw::Kind::Canonical) throw DomainError("closed_form_F: law is not canonical");
  return closed_form_F(f.nu(), f.a0(), t, s);
}

double dF_ds(const OffspringLaw& f, double t, double s, Tolerance tol) {
  if (s == 1.0) throw DomainError("dF_ds: s must lie in [0, 1)");
  return *solve_F(f, t, s, tol).dFds;
}

TransitionSolution solve_F_series(const OffspringLaw& f, double t, std::size_t N, Tolerance tol) {
  check_order(N);
  check_point(t, 0.0);
  const OdeOptions opt = options_for(tol);
  std::vector<double> y = Series::identity(N).vector();
  auto rhs = [&](double, const std::vector<double>& state, std::vector<double>& dy) {
    const Series d = f.compose(Series(state));
    std::copy(d.coeffs().begin(), d.coeffs().end(), dy.begin());
  };
  const OdeStats st = integrate_dp45(rhs, 0.0, t, y, opt);
  TransitionSolution sol;
  sol.t = t;
  Series F(std::move(y));
  sol.F = F[0];
  sol.R = 1.0 - F[0];
  sol.log_R = std::log1p(-F[0]);
  sol.tau = 1.0 / sol.R;
  if (N >= 1) sol.dFds = F[1];
  sol.F_series = std::move(F);
  sol.diagnostics = {st.accepted, st.rejected, tol};
  return sol;
}

TransitionSolution mbis_P(const OffspringLaw& f, const ImmigrationLaw& h, unsigned i, double t, double s,
                          Tolerance tol) {
  TransitionSolution sol = sweep(f, &h, {t}, s, tol).front();
  // ln F = log1p(-R) stays accurate when R is close to 0 or 1.
  const double log_F = sol.R == 0.0 ? 0.0 : std::log1p(-sol.R);
  sol.log_P = *sol.G + (i == 0 ? 0.0 : static_cast<double>(i) * log_F);
  return sol;
}

TransitionSolution mbis_P_series(const OffspringLaw& f, const ImmigrationLaw& h, unsigned i, double t, std::size_t N,
                                 Tolerance tol) {
  check_order(N);
  check_point(t, 0.0);
  const OdeOptions opt = options_for(tol);
  const std::size_t m = N + 1;
  std::vector<double> y(2 * m, 0.0);
  if (N >= 1) y[1] = 1.0;
  auto rhs = [&](double, const std::vector<double>& state, std::vector<double>& dy) {
    const Series F(std::vector<double>(state.begin(), state.begin() + static_cast<std::ptrdiff_t>(m)));
    const Series dF = f.compose(F);
    const Series dG = h.compose(F);
    std::copy(dF.coeffs().begin(), dF.coeffs().end(), dy.begin());
    std::copy(dG.coeffs().begin(), dG.coeffs().end(), dy.begin() + static_cast<std::ptrdiff_t>(m));
  };
  const OdeStats st = integrate_dp45(rhs, 0.0, t, y, opt);
  Series F(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m)));
  Series G(std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(m), y.end()));
  Series P = exp_series(G);
  for (unsigned k = 0; k < i; ++k) P = mul(P, F);

  TransitionSolution sol;
  sol.t = t;
  sol.F = F[0];
  sol.R = 1.0 - F[0];
  sol.log_R = std::log1p(-F[0]);
  sol.tau = 1.0 / sol.R;
  sol.G = G[0];
  sol.log_P = std::log(P[0]);
  if (N >= 1) sol.dFds = F[1];
  sol.F_series = std::move(F);
  sol.G_series = std::move(G);
  sol.P_series = std::move(P);
  sol.diagnostics = {st.accepted, st.rejected, tol};
  return sol;
}

double mean_X(const ImmigrationLaw& h, double a, double t) {
  if (!(t >= 0.0)) throw DomainError("mean_X: t must be nonnegative");
  const double m = h.hprime1();
  if (!std::isfinite(m)) throw InfiniteMomentError("mean_X: h'(1-) is infinite");
  if (a == 0.0) return m * t;
  return m * std::expm1(a * t) / a;
}

}  // namespace critbranch
