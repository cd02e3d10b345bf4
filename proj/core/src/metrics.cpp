#include "morpho/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "morpho/dynamics.hpp"
#include "morpho/errors.hpp"

namespace morpho {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double yaw_rate_deg(const LogRow& r) { return r.state[sx::kOmega + 2] * kRadToDeg; }

bool attitude_in_band(const LogRow& r, double band_rad) {
  return std::abs(wrap_angle(r.state[sx::kRoll])) <= band_rad &&
         std::abs(wrap_angle(r.state[sx::kPitch])) <= band_rad;
}

std::optional<double> recovery_after(const std::vector<LogRow>& rows, double t_event,
                                     const MetricsOptions& opt) {
  const double band = opt.recovery_band_deg * std::numbers::pi / 180.0;
  const double t_end = rows.back().time;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].time < t_event) continue;
    if (rows[i].time + opt.recovery_hold > t_end + 1e-9) break;
    bool held = true;
    for (std::size_t j = i; j < rows.size() && rows[j].time <= rows[i].time + opt.recovery_hold + 1e-9; ++j) {
      if (!attitude_in_band(rows[j], band)) {
        held = false;
        break;
      }
    }
    if (held) return rows[i].time - t_event;
  }
  return std::nullopt;
}

}  // namespace

Metrics compute_metrics(const SimLog& log, const MetricsOptions& opt) {
  if (log.rows.empty()) throw EmptyLog("log has no rows");
  const std::vector<LogRow>& rows = log.rows;
  Metrics m;

  double sum_sq = 0.0;
  for (const LogRow& r : rows) {
    sum_sq += r.tracking_error * r.tracking_error;
    m.peak_tracking_error = std::max(m.peak_tracking_error, r.tracking_error);
  }
  m.rms_tracking_error = std::sqrt(sum_sq / static_cast<double>(rows.size()));

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].effectiveness != rows[i - 1].effectiveness) {
      m.recoveries.push_back({rows[i].time, recovery_after(rows, rows[i].time, opt)});
    }
  }

  const double t_end = rows.back().time;
  double sum = 0.0;
  int count = 0;
  for (const LogRow& r : rows) {
    if (r.time >= t_end - opt.terminal_window - 1e-9) {
      sum += yaw_rate_deg(r);
      ++count;
    }
  }
  m.terminal_yaw_rate = sum / count;
  m.yaw_rate_settling_time = rows.front().time;
  for (std::size_t i = rows.size(); i-- > 0;) {
    if (std::abs(yaw_rate_deg(rows[i]) - m.terminal_yaw_rate) > opt.yaw_rate_band_deg) {
      m.yaw_rate_settling_time = i + 1 < rows.size() ? rows[i + 1].time : t_end;
      break;
    }
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.peak_yaw_rate = std::max(m.peak_yaw_rate, std::abs(yaw_rate_deg(rows[i])));
    if (i == 0) continue;
    const Eigen::Vector2d v0 = rows[i - 1].state.segment<2>(sx::kVel);
    const Eigen::Vector2d v1 = rows[i].state.segment<2>(sx::kVel);
    if (v0.norm() < opt.min_course_speed || v1.norm() < opt.min_course_speed) continue;
    const double dchi = wrap_angle(std::atan2(v1.y(), v1.x()) - std::atan2(v0.y(), v0.x()));
    const double dt = rows[i].time - rows[i - 1].time;
    m.peak_turn_rate = std::max(m.peak_turn_rate, std::abs(dchi / dt) * kRadToDeg);
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].waypoint_index == rows[i - 1].waypoint_index) continue;
    const double t_switch = rows[i].time;
    for (const LogRow& r : rows) {
      if (r.time < t_switch - opt.turn_before - 1e-9 ||
          r.time > t_switch + opt.turn_after + 1e-9) {
        continue;
      }
      const double speed = r.state.segment<3>(sx::kVel).norm();
      m.min_turn_speed = m.min_turn_speed ? std::min(*m.min_turn_speed, speed) : speed;
    }
  }
  return m;
}

Metrics compute_metrics(const SimLog& log, const Scenario& /*scenario*/) {
  return compute_metrics(log, MetricsOptions{});
}

}  // namespace morpho
