// Runs each acceptance check and prints one pass/FAIL line per criterion.
// Exits nonzero if anything fails; details name the first violated bound.

#include <cstdio>
#include <iostream>

#include "herdlab/verify.hpp"

int main() {
  bool all_passed = true;
  for (const auto& check : herdlab::acceptance_checks()) {
    const herdlab::CheckResult r = herdlab::run_check(check);
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f", r.seconds);
    std::cout << (r.passed ? "pass" : "FAIL") << "  " << r.name << " (" << timing
              << "s): " << r.details << "\n"
              << std::flush;
    all_passed = all_passed && r.passed;
  }
  std::cout << (all_passed ? "acceptance: all criteria satisfied"
                           : "acceptance: FAILURES above")
            << "\n";
  return all_passed ? 0 : 1;
}
