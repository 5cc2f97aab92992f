#pragma once

// JSON experiment configuration. Unknown keys are rejected and every error
// names the offending field as a JSON pointer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "critbranch/kolmogorov.hpp"
#include "critbranch/laws.hpp"
#include "critbranch/montecarlo.hpp"

namespace critbranch {

struct OffspringSpec {
  std::string kind = "canonical";  // canonical | perturbed | finite | tabulated
  double nu = 0.5;
  double a0 = 1.0;
  double c = 1.0;
  double rho = 0.0;
  double p = 0.5;
  std::vector<double> rates;
};

struct ImmigrationSpec {
  std::string kind = "canonical";  // canonical | perturbed | finite | tabulated
  double delta = 0.4;
  double c = 0.1;
  double kappa = 0.0;
  std::vector<double> rates;
};

struct SimulationSpec {
  std::size_t replicas = 10000;
  std::uint64_t cap = 1000000;
  std::uint64_t initial = 1;
  bool immigration = false;
  std::vector<QuantitySpec> estimators;
};

struct FigureSpec {
  std::optional<double> nu;  // empty: both presets
  std::optional<double> a0;
  std::string normalizer = "both";  // half-log | log-power | both
};

struct ExperimentConfig {
  std::string command;
  std::optional<OffspringSpec> offspring;
  std::optional<ImmigrationSpec> immigration;
  std::optional<std::string> regime;  // expected classification, checked when present
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> j_grid;
  Tolerance tolerance;
  std::size_t series_order = 64;
  std::uint64_t seed = 0;
  int threads = 0;
  SimulationSpec simulation;
  FigureSpec figure;
  std::string out_dir = ".";

  /// The configuration with every default filled in; hashed into provenance headers.
  nlohmann::json resolved;
};

/// Throws SchemaError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Re-resolves after programmatic edits (seed, threads, output directory).
void refresh_resolved(ExperimentConfig& cfg);

OffspringLaw make_offspring(const OffspringSpec& spec);
ImmigrationLaw make_immigration(const ImmigrationSpec& spec);

/// FNV-1a 64 of the resolved configuration, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace critbranch
