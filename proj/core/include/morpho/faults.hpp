#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace morpho {

/// From `start_time` on, the rotor delivers `effectiveness` times what it is
/// commanded (until the next event).
struct FaultEvent {
  double start_time = 0.0;
  double effectiveness = 1.0;

  bool operator==(const FaultEvent&) const = default;
};

/// How a loss of effectiveness limits a rotor.
enum class LoeMode {
  kScale,  ///< actual = eta * commanded
  kCap,    ///< actual = min(commanded, eta * hover_thrust)
};

/// Piecewise-constant per-rotor effectiveness timeline. Plant-side only:
/// nothing in the controller consumes it.
struct FaultSchedule {
  std::array<std::vector<FaultEvent>, 4> rotors;
  LoeMode mode = LoeMode::kScale;

  /// Event times strictly increasing per rotor, effectiveness in [0, 1].
  void validate() const;

  /// Latest event at or before t for each rotor; 1.0 before any event.
  Eigen::Vector4d effectiveness_at(double t) const;

  /// Sorted, de-duplicated start times over all rotors.
  std::vector<double> event_times() const;

  bool empty() const;
  bool operator==(const FaultSchedule&) const = default;
};

/// Staged loss of effectiveness on one rotor: `loe` fractions starting at
/// the matching `times` (e.g. {0.33, 0.66, 1.0} at {7, 14, 21}).
FaultSchedule staged_loe(int rotor, const std::vector<double>& times,
                         const std::vector<double>& loe);

/// Thrust actually produced by the rotors.
Eigen::Vector4d apply(const Eigen::Vector4d& effectiveness,
                      const Eigen::Vector4d& commanded,
                      LoeMode mode = LoeMode::kScale, double hover_thrust = 0.0);

}  // namespace morpho
