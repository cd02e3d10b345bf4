#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace morpho {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant and gradient checks run by `morphonmpc check`: hover
/// equilibrium, RK4 order, OCP gradient against central differences, contact
/// continuity and the healthy-rotor identity. Takes a few seconds.
std::vector<CheckResult> run_self_check();

/// Prints one PASS/FAIL line per check; true when all passed.
bool print_self_check(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace morpho
