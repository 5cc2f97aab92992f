#pragma once

// Exact event-driven simulation of the branching system with and without
// immigration, and plug-in estimators with standard errors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "critbranch/laws.hpp"

namespace critbranch {

/// Inverse-CDF sampler for a jump size K with P(K > k) = survival(k).
/// The survival table is built up to an adaptive horizon; beyond it the
/// coefficient recurrence is stepped on the fly, so no tail approximation is used.
class JumpSampler {
 public:
  /// Offspring count with pmf lambda a_k (k != 1), lambda = 1 / -a_1.
  static JumpSampler offspring(const OffspringLaw& f);
  /// Immigration batch with pmf b_k / -b_0 (k >= 1).
  static JumpSampler immigration(const ImmigrationLaw& h);

  /// Smallest k with survival(k) < 1 - u. Values above `limit` are reported as limit + 1.
  std::uint64_t operator()(double u, std::uint64_t limit = UINT64_MAX) const;
  double survival(std::uint64_t k) const;
  double pmf(std::uint64_t k) const;
  std::size_t horizon() const noexcept { return surv_.size() - 1; }

 private:
  JumpSampler() = default;
  void build(double first);

  std::vector<double> surv_;
  // Infinite support: survival(k) = scale * -sum_i w_i c_k(beta_i) for k >= 1, with
  // c_{k+1}(beta) = c_k(beta) (k - beta) / (k + 1).
  std::vector<PowerTerm> terms_;  // exponents already shifted to beta = alpha - 1
  std::vector<double> edge_;  // c_H(beta_i) at the table edge
  double scale_ = 1.0;
};

std::uint64_t sample_offspring(const OffspringLaw& f, double u);

struct SimConfig {
  std::vector<double> grid{0.0};
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  std::uint64_t cap = 1000000;
  std::uint64_t initial = 1;
  int threads = 0;  // 0 = OpenMP default
};

/// Observations Z(t_g) for each replica, row-major (replica, grid index).
struct SimResult {
  std::vector<double> grid;
  std::size_t replicas = 0;
  std::vector<std::uint64_t> states;
  std::vector<std::uint8_t> capped;  // per replica
  std::size_t capped_count = 0;
  std::uint64_t events = 0;

  std::uint64_t at(std::size_t r, std::size_t g) const { return states[r * grid.size() + g]; }
};

/// Seed of replica r, derived from (seed, r) by a splitmix64 counter.
std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t r);

SimResult simulate_mbs(const OffspringLaw& f, const SimConfig& cfg);
SimResult simulate_mbs_serial(const OffspringLaw& f, const SimConfig& cfg);
/// Immigration starts from cfg.initial (set it to 0 for an empty start).
SimResult simulate_mbis(const OffspringLaw& f, const ImmigrationLaw& h, const SimConfig& cfg);
SimResult simulate_mbis_serial(const OffspringLaw& f, const ImmigrationLaw& h, const SimConfig& cfg);

enum class Quantity { Survival, Probability, Mean, Ratio };
const char* to_string(Quantity q);

struct QuantitySpec {
  Quantity kind = Quantity::Survival;
  double t = 0.0;
  std::uint64_t j = 0;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t replicas = 0;  // replicas used (capped paths excluded)
  std::size_t capped = 0;
};

/// Plug-in estimate at a grid point. Ratio is p_j / p_0 with a delta-method
/// standard error and needs at least 100 paths in state 0.
Estimate estimate(const QuantitySpec& q, const SimResult& sim);

}  // namespace critbranch
