// Runs the ten verification suites and prints one PASS/FAIL line each.
// Exits nonzero if any suite fails, so ctest reports it as a failure.

#include <iostream>

#include "vistrack/checks.hpp"

int main() {
  std::vector<vistrack::CheckResult> results = vistrack::run_all_checks(0);
  bool ok = vistrack::report_checks(results, std::cout);
  return ok ? 0 : 1;
}
