#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "morpho/errors.hpp"
#include "morpho/harness.hpp"
#include "morpho/metrics.hpp"
#include "morpho/scenarios.hpp"

using namespace morpho;

namespace {

Scenario short_hover(double duration) {
  Scenario s = default_scenario();
  s.duration = duration;
  return s;
}

SimLog synthetic(int rows, double period = 0.1) {
  SimLog log;
  log.control_period = period;
  for (int i = 0; i < rows; ++i) {
    LogRow r;
    r.time = i * period;
    r.state = hover_state(Eigen::Vector3d(0, 0, 5));
    log.rows.push_back(r);
  }
  return log;
}

}  // namespace

// ------------------------------------------------------------ scenario

TEST(Scenario, DefaultIsValid) { EXPECT_NO_THROW(default_scenario().validate()); }

TEST(Scenario, ValidationFailures) {
  Scenario s = default_scenario();
  s.duration = 0.0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = default_scenario();
  s.waypoints[0].hold = -1.0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = default_scenario();
  s.plant_perturbation.inertia = 0.6;
  EXPECT_THROW(s.validate(), ValidationError);
  s = default_scenario();
  s.plant_perturbation.drag_gamma = -0.51;
  EXPECT_THROW(s.validate(), ValidationError);
  s = default_scenario();
  s.mode = ControlMode::kAgile;  // OCP still configured for fault mode
  EXPECT_THROW(s.validate(), ScenarioInvalid);
}

TEST(Scenario, RandomizedFaultIsSeededAndInRange) {
  Scenario s = builtin_scenario("stage1-forward-failure");
  const FaultSchedule a = resolved_faults(s);
  const FaultSchedule b = resolved_faults(s);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.rotors[3].size(), 1u);
  EXPECT_GE(a.rotors[3][0].start_time, 3.825);
  EXPECT_LE(a.rotors[3][0].start_time, 3.925);
  EXPECT_EQ(a.rotors[3][0].effectiveness, 0.0);
  s.seed = 2;
  EXPECT_NE(resolved_faults(s).rotors[3][0].start_time, a.rotors[3][0].start_time);
}

// ------------------------------------------------------------ builtins

TEST(Builtins, EightScenarios) {
  const auto all = builtin_scenarios();
  ASSERT_EQ(all.size(), 8u);
  for (const Scenario& s : all) {
    EXPECT_NO_THROW(s.validate()) << s.name;
    EXPECT_EQ(builtin_scenario(s.name), s);
  }
  EXPECT_THROW(builtin_scenario("no-such-scenario"), ScenarioInvalid);
}

TEST(Builtins, StageTwoCaseTwoSchedule) {
  const Scenario s = builtin_scenario("stage2-waypoint-loe");
  const auto& ev = s.faults.rotors[3];
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_EQ(ev[0].start_time, 12.0);
  EXPECT_EQ(ev[1].start_time, 16.0);
  EXPECT_EQ(ev[2].start_time, 18.0);
  EXPECT_NEAR(ev[0].effectiveness, 0.67, 1e-12);
  EXPECT_NEAR(ev[1].effectiveness, 0.34, 1e-12);
  EXPECT_EQ(ev[2].effectiveness, 0.0);
}

TEST(Builtins, ThrustBoundsByMode) {
  for (const Scenario& s : builtin_scenarios()) {
    if (s.mode == ControlMode::kAgile) {
      EXPECT_EQ(s.ocp.thrust_max, 50.0) << s.name;
      EXPECT_GE(s.reference_speed, 10.0) << s.name;
    } else {
      EXPECT_EQ(s.ocp.thrust_max, 30.0) << s.name;
    }
    EXPECT_EQ(s.ocp.thrust_min, 0.0);
  }
  EXPECT_TRUE(builtin_scenario("stage1-forward-failure").sagittal_only);
  EXPECT_TRUE(builtin_scenario("stage1-waypoint-loe").sagittal_only);
  EXPECT_FALSE(builtin_scenario("stage2-hover").sagittal_only);
}

TEST(Builtins, AgileTurnGeometry) {
  const Scenario s = agile_turn_scenario(90.0, 12.0);
  ASSERT_EQ(s.waypoints.size(), 2u);
  const Eigen::Vector3d leg = s.waypoints[1].position - s.waypoints[0].position;
  EXPECT_NEAR(leg.normalized().dot(Eigen::Vector3d::UnitY()), 1.0, 1e-12);
}

// ------------------------------------------------------------ closed loop

TEST(ClosedLoop, RowCountAndTimes) {
  const Scenario s = short_hover(1.05);
  const SimLog log = run_closed_loop(s);
  ASSERT_EQ(log.rows.size(), static_cast<std::size_t>(std::floor(1.05 / 0.1)) + 1);
  for (std::size_t i = 1; i < log.rows.size(); ++i) {
    EXPECT_GT(log.rows[i].time, log.rows[i - 1].time);
  }
  EXPECT_FALSE(log.failed);
}

TEST(ClosedLoop, HoverHoldsPosition) {
  const SimLog log = run_closed_loop(short_hover(5.0));
  for (const LogRow& r : log.rows) {
    if (r.time < 1.0) continue;
    EXPECT_LE((r.state.segment<3>(sx::kPos) - Eigen::Vector3d(0, 0, 5)).norm(), 0.05);
  }
}

TEST(ClosedLoop, HealthyRotorsDeliverCommands) {
  Scenario s = short_hover(1.0);
  s.plant_perturbation = PlantPerturbation{0.0, 0.0, 0.0, 0.0};
  s.initial_state[sx::kPos] += 0.3;
  for (const LogRow& r : run_closed_loop(s).rows) {
    EXPECT_EQ(r.thrust_commanded, r.thrust_actual);
    EXPECT_EQ(r.effectiveness, Eigen::Vector4d::Ones());
  }
}

TEST(ClosedLoop, EffectivenessFollowsStageTwoSchedule) {
  Scenario s = builtin_scenario("stage2-hover");
  s.duration = 6.0;
  const SimLog log = run_closed_loop(s);
  ASSERT_FALSE(log.failed);
  for (const LogRow& r : log.rows) {
    const double t = r.time;
    const double expected = t < 1.0 ? 1.0 : t < 3.0 ? 0.67 : t < 5.0 ? 0.34 : 0.0;
    EXPECT_NEAR(r.effectiveness[3], expected, 1e-12) << "t=" << t;
    EXPECT_EQ(r.effectiveness.head<3>(), Eigen::Vector3d::Ones());
    EXPECT_NEAR(r.thrust_actual[3], expected * r.thrust_commanded[3], 1e-12);
  }
}

TEST(ClosedLoop, Deterministic) {
  Scenario s = short_hover(1.5);
  s.initial_state[sx::kPos + 1] += 0.4;
  const SimLog a = run_closed_loop(s);
  const SimLog b = run_closed_loop(s);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].state, b.rows[i].state);
    EXPECT_EQ(a.rows[i].thrust_commanded, b.rows[i].thrust_commanded);
    EXPECT_EQ(a.rows[i].cost, b.rows[i].cost);
  }
}

TEST(ClosedLoop, ControllerIsBlindToFaults) {
  Scenario s = builtin_scenario("stage2-hover");
  s.duration = 2.0;
  const SimLog log = run_closed_loop(s);
  std::vector<RomState> states;
  for (const LogRow& r : log.rows) states.push_back(r.state);

  Scenario other = s;
  other.faults = staged_loe(0, {0.2, 0.5}, {0.5, 1.0});
  const auto a = replay_controller(s, states);
  const auto b = replay_controller(other, states);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].inputs, b[i].inputs);
    EXPECT_EQ(a[i].cost, b[i].cost);
    EXPECT_EQ(a[i].iterations, b[i].iterations);
  }
}

TEST(AdvancePlant, IdentityAtHoverWithoutMismatch) {
  const RobotParams p;
  const RomState x = hover_state(Eigen::Vector3d(0, 0, 5));
  const RomState y = advance_plant(x, hover_input(p), 0.0, FaultSchedule{}, p,
                                   IntegratorConfig{}, nullptr);
  EXPECT_LE((y - x).lpNorm<Eigen::Infinity>(), 1e-9);
}

// ------------------------------------------------------------ metrics

TEST(Metrics, PerfectTracking) {
  const Metrics m = compute_metrics(synthetic(50));
  EXPECT_EQ(m.rms_tracking_error, 0.0);
  EXPECT_EQ(m.peak_tracking_error, 0.0);
}

TEST(Metrics, SingleSpike) {
  SimLog log = synthetic(50);
  log.rows[20].tracking_error = 2.0;
  const Metrics m = compute_metrics(log);
  EXPECT_EQ(m.peak_tracking_error, 2.0);
  EXPECT_NEAR(m.rms_tracking_error, std::sqrt(4.0 / 50.0), 1e-15);
  EXPECT_LE(m.rms_tracking_error, m.peak_tracking_error);
}

TEST(Metrics, YawRateSettling) {
  SimLog log = synthetic(151);
  const double deg = std::numbers::pi / 180.0;
  for (LogRow& r : log.rows) {
    r.state[sx::kOmega + 2] = std::min(r.time, 8.0) * 20.0 * deg;
  }
  const Metrics m = compute_metrics(log);
  EXPECT_NEAR(m.yaw_rate_settling_time, 8.0, 0.1 + 1e-9);
  EXPECT_NEAR(m.terminal_yaw_rate, 160.0, 1e-9);
  EXPECT_NEAR(m.peak_yaw_rate, 160.0, 1e-9);
}

TEST(Metrics, RecoveryTime) {
  SimLog log = synthetic(100);
  for (LogRow& r : log.rows) {
    if (r.time >= 2.0 - 1e-9) r.effectiveness[3] = 0.0;
    if (r.time >= 2.0 - 1e-9 && r.time < 3.5 - 1e-9) r.state[sx::kRoll] = 0.5;
  }
  const Metrics m = compute_metrics(log);
  ASSERT_EQ(m.recoveries.size(), 1u);
  EXPECT_NEAR(m.recoveries[0].event_time, 2.0, 1e-9);
  ASSERT_TRUE(m.recoveries[0].recovery_time.has_value());
  EXPECT_NEAR(*m.recoveries[0].recovery_time, 1.5, 1e-9);
}

TEST(Metrics, UnrecoveredEvent) {
  SimLog log = synthetic(40);
  for (LogRow& r : log.rows) {
    if (r.time >= 1.0 - 1e-9) {
      r.effectiveness[0] = 0.5;
      r.state[sx::kPitch] = 1.0;
    }
  }
  const Metrics m = compute_metrics(log);
  ASSERT_EQ(m.recoveries.size(), 1u);
  EXPECT_FALSE(m.recoveries[0].recovery_time.has_value());
}

TEST(Metrics, TurnSpeed) {
  SimLog log = synthetic(60);
  for (LogRow& r : log.rows) {
    const double speed = r.time < 3.0 ? 12.0 : 8.0;
    r.state[sx::kVel] = speed;
    r.waypoint_index = r.time < 2.0 - 1e-9 ? 0 : 1;
  }
  const Metrics m = compute_metrics(log);
  ASSERT_TRUE(m.min_turn_speed.has_value());
  EXPECT_EQ(*m.min_turn_speed, 8.0);
}

TEST(Metrics, EmptyLogThrows) { EXPECT_THROW(compute_metrics(SimLog{}), EmptyLog); }
