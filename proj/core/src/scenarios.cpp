#include "morpho/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "morpho/errors.hpp"

namespace morpho {

namespace {

constexpr int kRotor4 = 3;

Scenario fault_base(const std::string& name, bool sagittal_only) {
  Scenario s;
  s.name = name;
  s.mode = ControlMode::kFaultTolerant;
  s.sagittal_only = sagittal_only;
  s.ocp = OcpConfig::fault_tolerant_defaults(s.robot, sagittal_only);
  return s;
}

Waypoint wp(double x, double y, double z, double hold) {
  return Waypoint{Eigen::Vector3d(x, y, z), 0.0, hold};
}

// Forward flight, then an instant failure of rotor 4 at a seeded random time.
Scenario stage1_case1() {
  Scenario s = fault_base("stage1-forward-failure", true);
  s.initial_state = hover_state(Eigen::Vector3d(0.0, 0.0, 10.0));
  s.waypoints = {wp(19.0, 0.0, 10.0, 0.0)};
  s.reference_speed = 4.5;
  s.randomized_fault = RandomizedFault{kRotor4, 3.825, 3.925, 0.0};
  s.duration = 14.0;
  s.seed = 1;
  return s;
}

// Waypoint tour with progressive loss on rotor 4, ending in a landing.
Scenario stage1_case2() {
  Scenario s = fault_base("stage1-waypoint-loe", true);
  s.initial_state = hover_state(Eigen::Vector3d(0.0, 0.0, 3.0));
  s.waypoints = {wp(0.0, 0.0, 5.0, 1.0), wp(4.0, 0.0, 5.0, 1.0),
                 wp(4.0, 4.0, 5.0, 1.0), wp(0.0, 4.0, 5.0, 1.0),
                 wp(0.0, 4.0, 0.0, 0.0)};
  s.reference_speed = 1.0;
  s.faults = staged_loe(kRotor4, {7.0, 14.0, 21.0}, {0.33, 0.66, 1.0});
  s.contact_enabled = true;
  s.duration = 36.0;
  return s;
}

Scenario stage2_hover() {
  Scenario s = fault_base("stage2-hover", false);
  s.initial_state = hover_state(Eigen::Vector3d(0.0, 0.0, 5.0));
  s.waypoints = {wp(0.0, 0.0, 5.0, 0.0)};
  s.faults = staged_loe(kRotor4, {1.0, 3.0, 5.0}, {0.33, 0.66, 1.0});
  s.duration = 15.0;
  return s;
}

Scenario stage2_case2() {
  Scenario s = fault_base("stage2-waypoint-loe", false);
  s.initial_state = hover_state(Eigen::Vector3d(0.0, 0.0, 1.0));
  s.waypoints = {wp(0.0, 0.0, 2.0, 1.0), wp(0.0, 0.0, 6.0, 1.0),
                 wp(4.0, 0.0, 6.0, 1.0), wp(4.0, 4.0, 6.0, 1.0),
                 wp(4.0, 4.0, 0.0, 0.0)};
  s.reference_speed = 1.0;
  s.faults = staged_loe(kRotor4, {12.0, 16.0, 18.0}, {0.33, 0.66, 1.0});
  s.contact_enabled = true;
  s.duration = 34.0;
  return s;
}

}  // namespace

Scenario agile_turn_scenario(double turn_deg, double speed) {
  Scenario s;
  s.name = "agile-turn-" + std::to_string(static_cast<int>(std::lround(turn_deg)));
  s.mode = ControlMode::kAgile;
  s.sagittal_only = false;
  s.ocp = OcpConfig::agile_defaults(s.robot);
  const double altitude = 10.0;
  s.initial_state = hover_state(Eigen::Vector3d(0.0, 0.0, altitude));
  s.initial_state[sx::kVel] = speed;
  const double turn = turn_deg * std::numbers::pi / 180.0;
  const Eigen::Vector3d a(4.0 * speed, 0.0, altitude);
  const Eigen::Vector3d b = a + 8.0 * speed * Eigen::Vector3d(std::cos(turn), std::sin(turn), 0.0);
  s.waypoints = {Waypoint{a, 0.0, 0.0}, Waypoint{b, 0.0, 0.0}};
  s.reference_speed = speed;
  // Switch before reaching the corner so the vehicle carries speed through.
  s.waypoint_radius = 0.25 * speed;
  s.duration = 10.0;
  return s;
}

std::vector<Scenario> builtin_scenarios() {
  return {stage1_case1(),           stage1_case2(),          stage2_hover(),
          stage2_case2(),           agile_turn_scenario(30), agile_turn_scenario(60),
          agile_turn_scenario(90),  agile_turn_scenario(120)};
}

Scenario builtin_scenario(const std::string& name) {
  for (Scenario& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw ScenarioInvalid("unknown builtin scenario '" + name + "'");
}

}  // namespace morpho
