#pragma once

// The acceptance suite A1..A11. Each check returns one row; `verify` in the CLI
// and the acceptance test binary both run these.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace critbranch {

struct CriterionResult {
  std::string id;
  std::string description;
  bool passed = false;
  double measured = 0.0;   // the worst observed quantity
  double threshold = 0.0;  // what it was compared with
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  int threads = 0;
};

CriterionResult check_closed_form_agreement(const VerifyOptions& opt);  // A1
CriterionResult check_M_shift_identity(const VerifyOptions& opt);       // A2
CriterionResult check_oracle_equivalence(const VerifyOptions& opt);     // A3
CriterionResult check_U_limit(const VerifyOptions& opt);                // A4
CriterionResult check_invariance(const VerifyOptions& opt);             // A5
CriterionResult check_ratio_limits(const VerifyOptions& opt);           // A6
CriterionResult check_survival_rates(const VerifyOptions& opt);         // A7
CriterionResult check_conditioned_limit(const VerifyOptions& opt);      // A8
CriterionResult check_monte_carlo(const VerifyOptions& opt);            // A9
CriterionResult check_figure_table(const VerifyOptions& opt);           // A10
CriterionResult check_tauberian(const VerifyOptions& opt);              // A11

struct Criterion {
  const char* id;
  CriterionResult (*run)(const VerifyOptions&);
};
const std::vector<Criterion>& acceptance_criteria();

/// Runs one criterion, timing it and turning exceptions into failures.
CriterionResult run_criterion(const Criterion& c, const VerifyOptions& opt);
/// "A1 PASS ..." on one line.
std::string format_result(const CriterionResult& r);

}  // namespace critbranch
