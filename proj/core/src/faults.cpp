#include "morpho/faults.hpp"

#include <algorithm>
#include <string>

#include "morpho/errors.hpp"

namespace morpho {

void FaultSchedule::validate() const {
  for (int r = 0; r < 4; ++r) {
    const std::string field = "faults.rotor" + std::to_string(r + 1);
    const auto& events = rotors[r];
    for (std::size_t i = 0; i < events.size(); ++i) {
      const FaultEvent& e = events[i];
      if (!(e.start_time >= 0.0)) {
        throw ValidationError(field, "event start_time must be >= 0");
      }
      if (!(e.effectiveness >= 0.0 && e.effectiveness <= 1.0)) {
        throw ValidationError(field, "effectiveness must lie in [0, 1]");
      }
      if (i > 0 && !(e.start_time > events[i - 1].start_time)) {
        throw ValidationError(field, "event times must be strictly increasing");
      }
    }
  }
}

Eigen::Vector4d FaultSchedule::effectiveness_at(double t) const {
  Eigen::Vector4d eta = Eigen::Vector4d::Ones();
  for (int r = 0; r < 4; ++r) {
    for (const FaultEvent& e : rotors[r]) {
      if (e.start_time > t) break;
      eta[r] = e.effectiveness;
    }
  }
  return eta;
}

std::vector<double> FaultSchedule::event_times() const {
  std::vector<double> times;
  for (const auto& events : rotors) {
    for (const FaultEvent& e : events) times.push_back(e.start_time);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

bool FaultSchedule::empty() const {
  return std::all_of(rotors.begin(), rotors.end(),
                     [](const auto& events) { return events.empty(); });
}

FaultSchedule staged_loe(int rotor, const std::vector<double>& times,
                         const std::vector<double>& loe) {
  if (rotor < 0 || rotor >= 4) {
    throw ValidationError("faults", "rotor index outside [0, 3]");
  }
  if (times.size() != loe.size()) {
    throw ValidationError("faults", "times and loe must have equal length");
  }
  FaultSchedule s;
  for (std::size_t i = 0; i < times.size(); ++i) {
    s.rotors[rotor].push_back({times[i], 1.0 - loe[i]});
  }
  s.validate();
  return s;
}

Eigen::Vector4d apply(const Eigen::Vector4d& effectiveness,
                      const Eigen::Vector4d& commanded, LoeMode mode,
                      double hover_thrust) {
  if (mode == LoeMode::kCap) {
    return commanded.cwiseMin(effectiveness * hover_thrust);
  }
  return effectiveness.cwiseProduct(commanded);
}

}  // namespace morpho
