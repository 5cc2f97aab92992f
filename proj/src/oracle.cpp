#include "critbranch/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "critbranch/errors.hpp"

namespace critbranch {

namespace {

// Transposed uniformized matrix M^T = (I + Q/q)^T, so that a row-vector
// product reads contiguous memory for every output column.
struct Uniformized {
  std::size_t n;
  double q;
  std::vector<double> mt;
};

Uniformized uniformize(const TruncatedGenerator& gen) {
  const std::size_t n = gen.Q.size();
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) q = std::max(q, -gen.Q(i, i));
  Uniformized u{n, q, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double m = q > 0.0 ? gen.Q(i, j) / q : 0.0;
      if (i == j) m += 1.0;
      u.mt[j * n + i] = m;
    }
  }
  return u;
}

// Poisson(lambda) weights up to the first K whose cumulative mass reaches 1 - eps.
std::vector<double> poisson_weights(double lambda, double eps) {
  std::vector<double> w;
  if (lambda == 0.0) return {1.0};
  const double ll = std::log(lambda);
  double cum = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double kd = static_cast<double>(k);
    const double wk = std::exp(-lambda + kd * ll - std::lgamma(kd + 1.0));
    w.push_back(wk);
    cum += wk;
    if (kd > lambda && 1.0 - cum < eps) break;
    if (kd > lambda + 50.0 * std::sqrt(lambda) + 100.0) break;
  }
  return w;
}

void step_parallel(const Uniformized& u, const std::vector<double>& v, std::vector<double>& out) {
  const auto n = static_cast<long long>(u.n);
#pragma omp parallel for schedule(static)
  for (long long jj = 0; jj < n; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const double* col = u.mt.data() + j * u.n;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.n; ++i) acc += col[i] * v[i];
    out[j] = acc;
  }
}

void step_serial(const Uniformized& u, const std::vector<double>& v, std::vector<double>& out) {
  for (std::size_t j = 0; j < u.n; ++j) {
    const double* col = u.mt.data() + j * u.n;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.n; ++i) acc += col[i] * v[i];
    out[j] = acc;
  }
}

template <class Step>
std::vector<double> row_with(const Uniformized& u, std::size_t i, double t, double eps, UniformizationInfo* info,
                             Step step) {
  if (i >= u.n) throw DomainError("uniformized_row: initial state outside the truncation");
  if (!(t >= 0.0)) throw DomainError("uniformized_row: t must be nonnegative");
  const std::vector<double> w = poisson_weights(u.q * t, eps);
  std::vector<double> v(u.n, 0.0), next(u.n, 0.0), acc(u.n, 0.0);
  v[i] = 1.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) {
      step(u, v, next);
      v.swap(next);
    }
    for (std::size_t j = 0; j < u.n; ++j) acc[j] += w[k] * v[j];
  }
  if (info) *info = {u.q, w.size()};
  return acc;
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

TruncatedGenerator build_generator(const OffspringLaw& f, const ImmigrationLaw* h, std::size_t Nmax) {
  if (Nmax < 1) throw DomainError("build_generator: Nmax must be at least 1");
  if (Nmax > 4096) throw DomainError("build_generator: Nmax above 4096 is not supported");
  const std::size_t n = Nmax + 1;
  TruncatedGenerator gen;
  gen.Nmax = Nmax;
  gen.Q = DenseMatrix(n);
  gen.clipped_rate.assign(n, 0.0);
  const std::vector<double> a = f.rates(Nmax + 1);
  const std::vector<double> b = h ? h->rates(Nmax) : std::vector<double>{};

  for (std::size_t s = 0; s < n; ++s) {
    const double sd = static_cast<double>(s);
    if (s >= 1) {
      gen.Q(s, s - 1) += sd * a[0];
      gen.Q(s, s) += sd * a[1];
      for (std::size_t j = 2; s + j - 1 <= Nmax; ++j) gen.Q(s, s + j - 1) += sd * a[j];
      // Offspring counts j with s + j - 1 > Nmax.
      gen.clipped_rate[s] += sd * f.tail(Nmax - s + 1);
    }
    if (h) {
      gen.Q(s, s) += b[0];
      for (std::size_t k = 1; s + k <= Nmax; ++k) gen.Q(s, s + k) += b[k];
      gen.clipped_rate[s] += h->tail(Nmax - s);
    }
    gen.clipped_mass_rate += gen.clipped_rate[s];
  }
  return gen;
}

std::vector<double> uniformized_row(const TruncatedGenerator& gen, std::size_t i, double t, double eps,
                                    UniformizationInfo* info) {
  return row_with(uniformize(gen), i, t, eps, info, step_parallel);
}

std::vector<double> uniformized_row_serial(const TruncatedGenerator& gen, std::size_t i, double t, double eps,
                                           UniformizationInfo* info) {
  return row_with(uniformize(gen), i, t, eps, info, step_serial);
}

DenseMatrix uniformized_transition(const TruncatedGenerator& gen, double t, double eps) {
  if (!(t >= 0.0)) throw DomainError("uniformized_transition: t must be nonnegative");
  const Uniformized u = uniformize(gen);
  DenseMatrix P(u.n);
  const auto n = static_cast<long long>(u.n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const std::vector<double> row = row_with(u, i, t, eps, nullptr, step_serial);
    for (std::size_t j = 0; j < u.n; ++j) P(i, j) = row[j];
  }
  return P;
}

}  // namespace critbranch
