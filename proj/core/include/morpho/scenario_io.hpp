#pragma once

// Scenario files are YAML documents with the top-level sections
// `scenario`, `robot`, `integrator`, `ocp`, `faults` and `contact`.
// Keys ending in `_deg` hold degrees (deg/s for rates); everything else is SI.
// Any key may be omitted; the grammar and defaults are listed in the README.

#include <filesystem>
#include <string>

#include "morpho/harness.hpp"

namespace morpho {

/// Parses and validates a scenario document. Throws ParseError for syntax,
/// unknown keys or wrong value types and ValidationError (or ScenarioInvalid)
/// when a value breaks an invariant.
Scenario parse_scenario(const std::string& text);

/// Reads and parses a scenario file; an unreadable file is a ParseError.
Scenario load_scenario(const std::filesystem::path& path);

/// Full document with every field spelled out. Parsing the result yields a
/// Scenario equal to the input whenever the input came from parse_scenario.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace morpho
