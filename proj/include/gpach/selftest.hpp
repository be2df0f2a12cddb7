#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gpach {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

// The eight acceptance checks, in order.  Each is self-contained and seeded.
std::vector<CheckResult> run_acceptance_checks();

// Prints one PASS/FAIL line per check; returns whether all of them passed.
bool run_selftest(std::ostream& out);

}  // namespace gpach
