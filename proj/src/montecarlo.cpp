#include "critbranch/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <omp.h>

#include "critbranch/errors.hpp"

namespace critbranch {

namespace {

constexpr std::size_t kInitialHorizon = 1024;
constexpr std::size_t kMaxHorizon = std::size_t{1} << 22;
constexpr double kHorizonSurvival = 1e-8;
constexpr std::uint64_t kCappedState = std::numeric_limits<std::uint64_t>::max();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// Rescales the part of a uniform that fell into [lo, lo + width) back to [0, 1).
double rescale(double u, double lo, double width) {
  return std::min((u - lo) / width, std::nextafter(1.0, 0.0));
}

std::vector<double> suffix_survival(const std::vector<double>& rates, std::size_t skip, double scale) {
  std::vector<double> s(rates.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = rates.size(); k-- > 0;) {
    s[k] = acc * scale;
    if (k != skip) acc += rates[k];
  }
  return s;
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t r) {
  return splitmix64(seed + (r + 1) * 0x9e3779b97f4a7c15ULL);
}

// ---------------------------------------------------------------------------

JumpSampler JumpSampler::offspring(const OffspringLaw& f) {
  JumpSampler js;
  js.scale_ = 1.0 / -f.a1();
  if (f.mixture().empty()) {
    js.surv_ = suffix_survival(f.rates(f.degree()), 1, js.scale_);
    return js;
  }
  for (const auto& t : f.mixture().terms()) js.terms_.push_back({t.weight, t.exponent - 1.0});
  js.build(std::numeric_limits<double>::quiet_NaN());
  return js;
}

JumpSampler JumpSampler::immigration(const ImmigrationLaw& h) {
  JumpSampler js;
  js.scale_ = 1.0 / -h.b0();
  if (h.mixture().empty()) {
    js.surv_ = suffix_survival(h.rates(h.degree()), 0, js.scale_);
    js.surv_[0] = 1.0;
    return js;
  }
  for (const auto& t : h.mixture().terms()) js.terms_.push_back({t.weight, t.exponent - 1.0});
  js.build(1.0);
  return js;
}

// first = survival(0); NaN means survival(0) = survival(1) (offspring, no k = 1 jumps).
void JumpSampler::build(double first) {
  std::vector<double> c(terms_.size(), 1.0);
  surv_.assign(1, 0.0);
  std::size_t limit = kInitialHorizon;
  for (std::size_t k = 1;; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      c[i] *= (static_cast<double>(k - 1) - terms_[i].exponent) / static_cast<double>(k);
      acc -= terms_[i].weight * c[i];
    }
    surv_.push_back(std::max(acc * scale_, 0.0));
    if (k == limit) {
      if (surv_.back() < kHorizonSurvival || limit >= kMaxHorizon) break;
      limit *= 2;
    }
  }
  surv_[0] = std::isnan(first) ? surv_[1] : first;
  edge_ = std::move(c);
}

double JumpSampler::survival(std::uint64_t k) const {
  if (k < surv_.size()) return surv_[k];
  if (terms_.empty()) return 0.0;
  std::vector<double> c = edge_;
  double acc = 0.0;
  for (std::uint64_t m = surv_.size() - 1; m < k; ++m) {
    acc = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      c[i] *= (static_cast<double>(m) - terms_[i].exponent) / static_cast<double>(m + 1);
      acc -= terms_[i].weight * c[i];
    }
  }
  return std::max(acc * scale_, 0.0);
}

double JumpSampler::pmf(std::uint64_t k) const {
  if (k == 0) return 1.0 - survival(0);
  return survival(k - 1) - survival(k);
}

std::uint64_t JumpSampler::operator()(double u, std::uint64_t limit) const {
  const double v = 1.0 - u;
  auto it = std::partition_point(surv_.begin(), surv_.end(), [v](double s) { return s >= v; });
  if (it != surv_.end()) {
    const auto k = static_cast<std::uint64_t>(it - surv_.begin());
    return k > limit ? limit + 1 : k;
  }
  std::uint64_t k = surv_.size() - 1;
  if (terms_.empty() || k >= limit) return limit + 1;
  // Step the recurrence past the table.
  std::vector<double> c = edge_;
  while (k < limit) {
    double acc = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      c[i] *= (static_cast<double>(k) - terms_[i].exponent) / static_cast<double>(k + 1);
      acc -= terms_[i].weight * c[i];
    }
    ++k;
    if (acc * scale_ < v) return k;
  }
  return limit + 1;
}

std::uint64_t sample_offspring(const OffspringLaw& f, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("sample_offspring: u must lie in [0, 1)");
  return JumpSampler::offspring(f)(u);
}

// ---------------------------------------------------------------------------

namespace {

struct Dynamics {
  const JumpSampler* offspring;
  const JumpSampler* immigration;  // null for the system without immigration
  double branch_rate;              // per individual
  double immigration_rate;
};

std::uint64_t run_path(const Dynamics& d, const SimConfig& cfg, std::uint64_t r, std::uint64_t* out) {
  std::mt19937_64 gen(replica_seed(cfg.seed, r));
  const std::size_t G = cfg.grid.size();
  std::uint64_t n = cfg.initial;
  std::uint64_t events = 0;
  double t = 0.0;
  std::size_t g = 0;
  while (g < G) {
    const double branch = static_cast<double>(n) * d.branch_rate;
    const double total = branch + d.immigration_rate;
    if (total <= 0.0) break;
    const double next = t - std::log1p(-uniform01(gen)) / total;
    while (g < G && cfg.grid[g] < next) out[g++] = n;
    if (g == G) break;
    t = next;
    ++events;
    const double u = uniform01(gen);
    const double pb = branch / total;
    if (u < pb) {
      const std::uint64_t k = (*d.offspring)(rescale(u, 0.0, pb), cfg.cap - n + 1);
      n = n - 1 + k;
    } else {
      const std::uint64_t k = (*d.immigration)(rescale(u, pb, 1.0 - pb), cfg.cap - n);
      n += k;
    }
    if (n > cfg.cap) {
      while (g < G) out[g++] = kCappedState;
      break;
    }
  }
  while (g < G) out[g++] = n;
  return events;
}

void validate(const SimConfig& cfg, bool immigration) {
  if (cfg.replicas < 1) throw DomainError("simulation: replicas must be at least 1");
  if (cfg.cap < 1) throw DomainError("simulation: cap must be at least 1");
  if (cfg.grid.empty()) throw DomainError("simulation: observation grid is empty");
  if (!(cfg.grid.front() >= 0.0)) throw DomainError("simulation: grid must start at t >= 0");
  if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end())) throw DomainError("simulation: grid must be sorted");
  if (!std::isfinite(cfg.grid.back())) throw DomainError("simulation: grid must be finite");
  if (!immigration && cfg.initial < 1) throw DomainError("simulation: initial population must be at least 1");
  if (cfg.initial > cfg.cap) throw DomainError("simulation: initial population exceeds the cap");
}

SimResult run(const Dynamics& d, const SimConfig& cfg, bool parallel) {
  SimResult res;
  res.grid = cfg.grid;
  res.replicas = cfg.replicas;
  const std::size_t G = cfg.grid.size();
  res.states.assign(cfg.replicas * G, 0);
  const auto R = static_cast<long long>(cfg.replicas);
  std::uint64_t events = 0;
  if (parallel) {
    const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : events) num_threads(nt)
    for (long long r = 0; r < R; ++r) {
      events += run_path(d, cfg, static_cast<std::uint64_t>(r), res.states.data() + static_cast<std::size_t>(r) * G);
    }
  } else {
    for (long long r = 0; r < R; ++r) {
      events += run_path(d, cfg, static_cast<std::uint64_t>(r), res.states.data() + static_cast<std::size_t>(r) * G);
    }
  }
  res.events = events;
  res.capped.assign(cfg.replicas, 0);
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    if (res.states[r * G + G - 1] == kCappedState) {
      res.capped[r] = 1;
      ++res.capped_count;
    }
  }
  return res;
}

}  // namespace

SimResult simulate_mbs(const OffspringLaw& f, const SimConfig& cfg) {
  validate(cfg, false);
  const JumpSampler off = JumpSampler::offspring(f);
  return run({&off, nullptr, -f.a1(), 0.0}, cfg, true);
}

SimResult simulate_mbs_serial(const OffspringLaw& f, const SimConfig& cfg) {
  validate(cfg, false);
  const JumpSampler off = JumpSampler::offspring(f);
  return run({&off, nullptr, -f.a1(), 0.0}, cfg, false);
}

SimResult simulate_mbis(const OffspringLaw& f, const ImmigrationLaw& h, const SimConfig& cfg) {
  validate(cfg, true);
  const JumpSampler off = JumpSampler::offspring(f);
  const JumpSampler imm = JumpSampler::immigration(h);
  return run({&off, &imm, -f.a1(), -h.b0()}, cfg, true);
}

SimResult simulate_mbis_serial(const OffspringLaw& f, const ImmigrationLaw& h, const SimConfig& cfg) {
  validate(cfg, true);
  const JumpSampler off = JumpSampler::offspring(f);
  const JumpSampler imm = JumpSampler::immigration(h);
  return run({&off, &imm, -f.a1(), -h.b0()}, cfg, false);
}

// ---------------------------------------------------------------------------

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::Survival:
      return "survival";
    case Quantity::Probability:
      return "p";
    case Quantity::Mean:
      return "mean";
    case Quantity::Ratio:
      return "ratio";
  }
  return "?";
}

Estimate estimate(const QuantitySpec& q, const SimResult& sim) {
  const std::size_t G = sim.grid.size();
  std::size_t g = G;
  for (std::size_t i = 0; i < G; ++i) {
    if (std::abs(sim.grid[i] - q.t) <= 1e-12 * std::max(1.0, std::abs(q.t))) {
      g = i;
      break;
    }
  }
  if (g == G) throw DomainError("estimate: t = " + std::to_string(q.t) + " is not an observation time");

  Estimate e;
  std::size_t hits = 0;
  std::size_t zeros = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::size_t r = 0; r < sim.replicas; ++r) {
    const std::uint64_t z = sim.at(r, g);
    if (z == kCappedState) {
      ++e.capped;
      continue;
    }
    ++e.replicas;
    const auto zd = static_cast<double>(z);
    sum += zd;
    sumsq += zd * zd;
    if (z == 0) ++zeros;
    if (q.kind == Quantity::Survival ? z > 0 : z == q.j) ++hits;
  }
  if (e.replicas == 0) throw InsufficientEventsError("estimate: every path was capped");
  const auto n = static_cast<double>(e.replicas);

  switch (q.kind) {
    case Quantity::Survival:
    case Quantity::Probability: {
      const double p = static_cast<double>(hits) / n;
      e.value = p;
      e.se = std::sqrt(p * (1.0 - p) / n);
      break;
    }
    case Quantity::Mean: {
      e.value = sum / n;
      const double var = e.replicas > 1 ? std::max(sumsq - n * e.value * e.value, 0.0) / (n - 1.0) : 0.0;
      e.se = std::sqrt(var / n);
      break;
    }
    case Quantity::Ratio: {
      if (zeros < 100) {
        throw InsufficientEventsError("estimate: ratio needs at least 100 paths in state 0, got " +
                                      std::to_string(zeros));
      }
      const double r = static_cast<double>(hits) / static_cast<double>(zeros);
      e.value = r;
      e.se = std::sqrt(r * (1.0 + r) / static_cast<double>(zeros));
      break;
    }
  }
  return e;
}

}  // namespace critbranch
