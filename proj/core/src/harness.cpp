#include "morpho/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "morpho/dynamics.hpp"
#include "morpho/errors.hpp"

namespace morpho {

namespace {

double distance_to_segment(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                           const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

void enforce_joint_stops(RomState& x) {
  constexpr double kMax = std::numbers::pi / 2.0;
  for (int i = 0; i < 8; ++i) {
    double& q = x[sx::kJoint + i];
    double& qd = x[sx::kJointRate + i];
    if (q < 0.0) {
      q = 0.0;
      qd = std::max(qd, 0.0);
    } else if (q > kMax) {
      q = kMax;
      qd = std::min(qd, 0.0);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario

void Scenario::validate() const {
  if (!(duration > 0.0)) throw ValidationError("scenario.duration", "must be > 0");
  if (waypoints.empty()) {
    throw ValidationError("scenario.waypoints", "at least one waypoint required");
  }
  for (const Waypoint& w : waypoints) {
    if (!(w.hold >= 0.0)) {
      throw ValidationError("scenario.waypoints", "hold must be >= 0");
    }
    if (!w.position.allFinite() || !std::isfinite(w.yaw)) {
      throw ValidationError("scenario.waypoints", "must be finite");
    }
  }
  if (!(reference_speed >= 0.0)) {
    throw ValidationError("scenario.reference_speed", "must be >= 0");
  }
  if (!(waypoint_radius > 0.0)) {
    throw ValidationError("scenario.waypoint_radius", "must be > 0");
  }
  if (!initial_state.allFinite()) {
    throw ValidationError("scenario.initial_state", "must be finite");
  }
  for (int i = 0; i < 8; ++i) {
    const double q = initial_state[sx::kJoint + i];
    if (q < 0.0 || q > std::numbers::pi / 2.0) {
      throw ValidationError("scenario.initial_state",
                            "joint angles must lie in [0, 90] deg");
    }
  }
  if (randomized_fault) {
    const RandomizedFault& r = *randomized_fault;
    if (r.rotor < 0 || r.rotor > 3) {
      throw ValidationError("faults.randomized.rotor", "must be in 1..4");
    }
    if (!(r.earliest >= 0.0 && r.latest >= r.earliest)) {
      throw ValidationError("faults.randomized", "need 0 <= earliest <= latest");
    }
    if (!(r.effectiveness >= 0.0 && r.effectiveness <= 1.0)) {
      throw ValidationError("faults.randomized.effectiveness", "must lie in [0, 1]");
    }
  }
  robot.validate();
  integrator.validate();
  ocp.validate();
  contact.validate();
  faults.validate();
  plant_perturbation.validate();
  if (ocp.mode != mode || ocp.sagittal_only != sagittal_only) {
    throw ScenarioInvalid("ocp mode/actuation disagree with the scenario");
  }
  resolved_faults(*this).validate();
}

Scenario default_scenario() {
  Scenario s;
  s.name = "default";
  s.initial_state = hover_state(Eigen::Vector3d(0.0, 0.0, 5.0));
  s.waypoints = {Waypoint{Eigen::Vector3d(0.0, 0.0, 5.0), 0.0, 0.0}};
  s.ocp = OcpConfig::fault_tolerant_defaults(s.robot, false);
  return s;
}

FaultSchedule resolved_faults(const Scenario& scenario) {
  FaultSchedule faults = scenario.faults;
  if (!scenario.randomized_fault) return faults;
  const RandomizedFault& r = *scenario.randomized_fault;
  std::mt19937_64 rng(scenario.seed);
  std::uniform_real_distribution<double> dist(r.earliest, r.latest);
  const double t = r.latest > r.earliest ? dist(rng) : r.earliest;
  auto& events = faults.rotors[r.rotor];
  const auto pos = std::upper_bound(
      events.begin(), events.end(), t,
      [](double v, const FaultEvent& e) { return v < e.start_time; });
  events.insert(pos, FaultEvent{t, r.effectiveness});
  return faults;
}

ControllerSetup controller_setup(const Scenario& scenario) {
  ControllerSetup c;
  c.ocp = scenario.ocp;
  c.model = scenario.robot;
  c.integrator = scenario.integrator;
  c.waypoints = scenario.waypoints;
  c.reference_speed = scenario.reference_speed;
  c.waypoint_radius = scenario.waypoint_radius;
  return c;
}

// ---------------------------------------------------------------------------
// Controller

Controller::Controller(ControllerSetup setup)
    : setup_(std::move(setup)),
      solver_(setup_.ocp, setup_.model, setup_.integrator) {
  if (setup_.waypoints.empty()) {
    throw ScenarioInvalid("controller needs at least one waypoint");
  }
}

RomState Controller::goal_state(int index) const {
  const Waypoint& w = setup_.waypoints[index];
  return hover_state(w.position, w.yaw);
}

double Controller::tracking_error(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d& goal = setup_.waypoints[waypoint_].position;
  if (setup_.reference_speed > 0.0) {
    // Distance to the reference path: the active leg or the one just left.
    double d = distance_to_segment(p, segment_start_, goal);
    if (previous_start_) {
      d = std::min(d, distance_to_segment(p, *previous_start_, segment_start_));
    }
    return d;
  }
  return (p - goal).norm();
}

// Offset-free correction: the mismatch between the last one-period
// prediction and the measured state is read as a constant wrench.
void Controller::update_disturbance(const RomState& x) {
  const double gain = setup_.ocp.disturbance_gain;
  if (gain <= 0.0 || !last_state_) return;
  const RomState predicted = solver_.predict(*last_state_, *last_input_);
  const double period = setup_.integrator.control_period;
  ExternalWrench w = solver_.model_disturbance();
  w.force_world += gain * setup_.model.total_mass() *
                   (x.segment<3>(sx::kVel) - predicted.segment<3>(sx::kVel)) / period;
  w.torque_body += gain * setup_.model.inertia *
                   (x.segment<3>(sx::kOmega) - predicted.segment<3>(sx::kOmega)) / period;
  solver_.set_model_disturbance(w);
}

ControlTick Controller::update(double t, const RomState& x) {
  update_disturbance(x);
  const Eigen::Vector3d p = x.segment<3>(sx::kPos);
  if (!started_) {
    segment_start_ = p;
    started_ = true;
  }
  const Waypoint& active = setup_.waypoints[waypoint_];
  if ((p - active.position).norm() < setup_.waypoint_radius) {
    if (!inside_since_) inside_since_ = t;
    const bool last = waypoint_ + 1 >= static_cast<int>(setup_.waypoints.size());
    if (!last && t - *inside_since_ >= active.hold - 1e-9) {
      previous_start_ = segment_start_;
      segment_start_ = active.position;
      ++waypoint_;
      inside_since_.reset();
    }
  } else {
    inside_since_.reset();
  }

  ControlTick tick;
  const RomState goal = goal_state(waypoint_);
  const int horizon = setup_.ocp.horizon;
  tick.refs = setup_.reference_speed > 0.0
                  ? collocate_reference(x, goal, horizon, setup_.reference_speed,
                                        setup_.integrator.control_period)
                  : ReferencePlan::constant(goal, horizon);
  tick.disturbance = solver_.model_disturbance();
  tick.solve = solver_.step(x, tick.refs);
  last_state_ = x;
  last_input_ = tick.solve.inputs.front();
  tick.waypoint_index = waypoint_;
  tick.tracking_error = tracking_error(p);
  return tick;
}

// ---------------------------------------------------------------------------
// Closed loop

RomState advance_plant(const RomState& x0, const ControlInput& commanded, double t0,
                       const FaultSchedule& faults, const RobotParams& plant,
                       const IntegratorConfig& integ, const ContactParams* contact) {
  const long steps = integ.plant_steps_per_period();
  const double h = integ.plant_step;
  const double hover = plant.hover_thrust();
  auto f = [&](const RomState& x, const ControlInput& u) {
    if (contact != nullptr) {
      const ExternalWrench w = contact_wrench(x, plant, *contact);
      return rom_derivative<double>(x, u, plant, SingularityPolicy::kThrow, &w);
    }
    return rom_derivative<double>(x, u, plant, SingularityPolicy::kThrow);
  };

  RomState x = x0;
  ControlInput u = commanded;
  const Eigen::Vector4d cmd = commanded.segment<4>(ux::kThrust);
  for (long i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    u.segment<4>(ux::kThrust) =
        apply(faults.effectiveness_at(t), cmd, faults.mode, hover);
    x = rk4_step(f, x, u, h);
    enforce_joint_stops(x);
  }
  return x;
}

SimLog run_closed_loop(const Scenario& scenario) {
  scenario.validate();
  SimLog log;
  log.scenario = scenario.name;
  log.control_period = scenario.integrator.control_period;

  const FaultSchedule faults = resolved_faults(scenario);
  const RobotParams plant = scenario.plant_perturbation.apply(scenario.robot);
  const ContactParams* contact =
      scenario.contact_enabled ? &scenario.contact : nullptr;
  Controller controller(controller_setup(scenario));

  const double period = scenario.integrator.control_period;
  const long last = static_cast<long>(std::floor(scenario.duration / period + 1e-9));
  RomState x = scenario.initial_state;
  for (long k = 0; k <= last; ++k) {
    const double t = static_cast<double>(k) * period;
    ControlTick tick;
    try {
      tick = controller.update(t, x);
    } catch (const NonFiniteCost& e) {
      log.failed = true;
      log.failure = std::string("non-finite cost: ") + e.what();
      break;
    }
    const ControlInput& u = tick.solve.inputs.front();

    LogRow row;
    row.time = t;
    row.state = x;
    row.thrust_commanded = u.segment<4>(ux::kThrust);
    row.effectiveness = faults.effectiveness_at(t);
    row.thrust_actual = apply(row.effectiveness, row.thrust_commanded, faults.mode,
                              plant.hover_thrust());
    row.joint_accel = u.segment<8>(ux::kSagAccel);
    row.reference = tick.refs.stages.front();
    row.cost = tick.solve.cost;
    row.iterations = tick.solve.iterations;
    row.converged = tick.solve.converged;
    row.solve_time = tick.solve.solve_time;
    row.tracking_error = tick.tracking_error;
    row.waypoint_index = tick.waypoint_index;
    row.disturbance << tick.disturbance.force_world, tick.disturbance.torque_body;
    log.rows.push_back(row);
    if (k == last) break;

    try {
      x = advance_plant(x, u, t, faults, plant, scenario.integrator, contact);
    } catch (const SingularAttitude& e) {
      log.failed = true;
      log.failure = std::string("plant attitude singular: ") + e.what();
      break;
    }
    if (!x.allFinite()) {
      log.failed = true;
      log.failure = "plant state diverged";
      break;
    }
  }
  return log;
}

std::vector<SolveResult> replay_controller(const Scenario& scenario,
                                           const std::vector<RomState>& states) {
  Controller controller(controller_setup(scenario));
  const double period = scenario.integrator.control_period;
  std::vector<SolveResult> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    out.push_back(controller.update(static_cast<double>(k) * period, states[k]).solve);
  }
  return out;
}

}  // namespace morpho
