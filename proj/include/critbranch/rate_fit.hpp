#pragma once

// Least-squares decay fits on log-log axes.

#include <string>
#include <vector>

namespace critbranch {

/// ln|y| = intercept + exponent ln t (+ log_coefficient ln ln t).
struct LogLogFit {
  double intercept = 0.0;
  double exponent = 0.0;
  double log_coefficient = 0.0;
  double r_squared = 0.0;
  bool log_factor = false;
  bool valid = false;  // false with fewer points than parameters
};

LogLogFit fit_loglog(const std::vector<double>& t, const std::vector<double>& y, bool with_log_factor = false);

/// Measured errors on an increasing time grid with their fitted decay.
struct RateReport {
  std::string quantity;
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<double> predicted;  // theorem's error term where one is stated
  LogLogFit fit;
  double expected_exponent = 0.0;
  double tolerance = 0.0;  // absolute, on the exponent
  bool passed = false;
  std::string note;
};

}  // namespace critbranch
