#pragma once

#include <optional>
#include <vector>

#include "morpho/harness.hpp"

namespace morpho {

struct MetricsOptions {
  /// Roll and pitch must stay inside +-band ...
  double recovery_band_deg = 10.0;
  /// ... for at least this long to count as recovered.
  double recovery_hold = 1.0;
  /// Yaw-rate settling band around the terminal value, deg/s.
  double yaw_rate_band_deg = 1.0;
  /// Trailing window defining the terminal yaw rate, s.
  double terminal_window = 2.0;
  /// Window around each waypoint switch searched for the minimum speed.
  double turn_before = 1.0;
  double turn_after = 2.0;
  /// Course rate is only evaluated above this horizontal speed, m/s.
  double min_course_speed = 1.0;
};

struct RecoveryEvent {
  double event_time = 0.0;
  /// Time from the event until roll/pitch re-enter and stay in the band.
  std::optional<double> recovery_time;
};

struct Metrics {
  double rms_tracking_error = 0.0;   ///< m
  double peak_tracking_error = 0.0;  ///< m
  /// One entry per change of any rotor's effectiveness in the log.
  std::vector<RecoveryEvent> recoveries;
  double terminal_yaw_rate = 0.0;  ///< deg/s, body z
  /// Absolute time after which the yaw rate stays within the band of its
  /// terminal value.
  double yaw_rate_settling_time = 0.0;
  /// Minimum speed around waypoint switches, m/s (absent without switches).
  std::optional<double> min_turn_speed;
  double peak_yaw_rate = 0.0;   ///< deg/s, |body z rate|
  double peak_turn_rate = 0.0;  ///< deg/s, |course-angle rate|
};

/// Deterministic reductions over the log rows. Throws EmptyLog.
Metrics compute_metrics(const SimLog& log, const MetricsOptions& options = {});
Metrics compute_metrics(const SimLog& log, const Scenario& scenario);

}  // namespace morpho
