#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vistrack {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The ten self-contained verification suites, each checking one pipeline
/// property against an independent reference (oracle loop, brute-force
/// search, algebraic identity, round trip, or wall-clock budget).
/// Deterministic for a given seed.
std::vector<CheckResult> run_all_checks(std::uint64_t seed);

/// One "PASS name: detail" / "FAIL name: detail" line per result.
/// Returns true when everything passed.
bool report_checks(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace vistrack
