// Acceptance criteria A1..A11, one line each. Exit status is the number of failures.

#include <iostream>

#include "critbranch/verify.hpp"

int main() {
  using namespace critbranch;
  const VerifyOptions opt;
  int failed = 0;
  for (const auto& c : acceptance_criteria()) {
    const CriterionResult r = run_criterion(c, opt);
    std::cout << format_result(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << failed << " of " << acceptance_criteria().size() << " criteria failed\n";
  return failed;
}
