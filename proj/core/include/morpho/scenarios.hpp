#pragma once

#include <string>
#include <vector>

#include "morpho/harness.hpp"

namespace morpho {

/// Reference experiments: the two sagittal-only fault cases, the two
/// full-actuation fault cases and the 30/60/90/120 deg agile turns.
std::vector<Scenario> builtin_scenarios();

/// Throws ScenarioInvalid for an unknown name.
Scenario builtin_scenario(const std::string& name);

/// Straight cruise at `speed` into waypoint A, then a turn of `turn_deg`
/// toward waypoint B.
Scenario agile_turn_scenario(double turn_deg, double speed = 12.0);

}  // namespace morpho
