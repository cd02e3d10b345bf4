#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morpho/contact.hpp"
#include "morpho/faults.hpp"
#include "morpho/integrator.hpp"
#include "morpho/nmpc.hpp"
#include "morpho/robot_params.hpp"
#include "morpho/state.hpp"

namespace morpho {

struct Waypoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double yaw = 0.0;   ///< rad
  double hold = 0.0;  ///< s spent within the capture radius before advancing

  bool operator==(const Waypoint&) const = default;
};

/// Failure of one rotor at a time drawn uniformly from [earliest, latest]
/// with the scenario seed. Appended to the rotor's scheduled events.
struct RandomizedFault {
  int rotor = 3;
  double earliest = 0.0;
  double latest = 0.0;
  double effectiveness = 0.0;

  bool operator==(const RandomizedFault&) const = default;
};

struct Scenario {
  std::string name = "custom";
  ControlMode mode = ControlMode::kFaultTolerant;
  bool sagittal_only = false;
  RomState initial_state = RomState::Zero();
  std::vector<Waypoint> waypoints;
  /// > 0: speed-limited collocated references toward the active waypoint.
  /// 0: every stage references the waypoint itself.
  double reference_speed = 0.0;
  double waypoint_radius = 0.3;
  FaultSchedule faults;
  std::optional<RandomizedFault> randomized_fault;
  double duration = 10.0;
  OcpConfig ocp;
  IntegratorConfig integrator;
  RobotParams robot;
  ContactParams contact;
  bool contact_enabled = false;
  PlantPerturbation plant_perturbation;
  std::uint64_t seed = 0;

  /// Throws ValidationError / ScenarioInvalid.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// Hover at the origin, 5 m up, fault-tolerant full actuation, no faults.
Scenario default_scenario();

/// The fault timeline the plant actually runs (randomized failure resolved).
FaultSchedule resolved_faults(const Scenario& scenario);

/// Everything the controller is allowed to know. Built from a Scenario but
/// carries no fault information.
struct ControllerSetup {
  OcpConfig ocp;
  RobotParams model;
  IntegratorConfig integrator;
  std::vector<Waypoint> waypoints;
  double reference_speed = 0.0;
  double waypoint_radius = 0.3;
};

ControllerSetup controller_setup(const Scenario& scenario);

struct ControlTick {
  SolveResult solve;
  ReferencePlan refs;
  int waypoint_index = 0;
  double tracking_error = 0.0;
  /// Wrench estimate the prediction model used for this solve.
  ExternalWrench disturbance;
};

/// Reference management plus the NMPC solver.
class Controller {
 public:
  explicit Controller(ControllerSetup setup);

  /// Called once per control period with the measured state.
  ControlTick update(double t, const RomState& x);

  int waypoint_index() const { return waypoint_; }

 private:
  RomState goal_state(int index) const;
  double tracking_error(const Eigen::Vector3d& p) const;
  void update_disturbance(const RomState& x);

  ControllerSetup setup_;
  NmpcSolver solver_;
  int waypoint_ = 0;
  std::optional<double> inside_since_;
  Eigen::Vector3d segment_start_ = Eigen::Vector3d::Zero();
  std::optional<Eigen::Vector3d> previous_start_;
  bool started_ = false;
  std::optional<RomState> last_state_;
  std::optional<ControlInput> last_input_;
};

struct LogRow {
  double time = 0.0;
  RomState state = RomState::Zero();
  Eigen::Vector4d thrust_commanded = Eigen::Vector4d::Zero();
  Eigen::Vector4d thrust_actual = Eigen::Vector4d::Zero();
  Eigen::Matrix<double, 8, 1> joint_accel = Eigen::Matrix<double, 8, 1>::Zero();
  RomState reference = RomState::Zero();  ///< stage-0 reference
  Eigen::Vector4d effectiveness = Eigen::Vector4d::Ones();
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  double solve_time = 0.0;
  double tracking_error = 0.0;
  int waypoint_index = 0;
  /// Controller's wrench estimate: world force (N) then body torque (N m).
  Eigen::Matrix<double, 6, 1> disturbance = Eigen::Matrix<double, 6, 1>::Zero();
};

/// One row per control tick, t = 0, T, 2T, ... up to the duration.
struct SimLog {
  std::string scenario;
  double control_period = 0.1;
  std::vector<LogRow> rows;
  /// Set when the run stopped early (non-finite cost, singular attitude).
  bool failed = false;
  std::string failure;
};

/// Closed-loop simulation: NMPC at the control period, faults and the
/// (perturbed) plant at the plant step with zero-order-held inputs.
SimLog run_closed_loop(const Scenario& scenario);

/// Runs a fresh controller over a recorded state sequence, one state per
/// control tick, and returns its solver outputs.
std::vector<SolveResult> replay_controller(const Scenario& scenario,
                                           const std::vector<RomState>& states);

/// Advances the plant by one control period with inputs held.
/// Joint angles are stopped at [0, pi/2]. Exposed for tests.
RomState advance_plant(const RomState& x, const ControlInput& commanded, double t0,
                       const FaultSchedule& faults, const RobotParams& plant,
                       const IntegratorConfig& integ, const ContactParams* contact);

}  // namespace morpho
