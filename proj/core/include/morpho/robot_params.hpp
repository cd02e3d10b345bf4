#pragma once

#include <Eigen/Core>
#include <array>

namespace morpho {

/// Physical parameters of the reduced-order model. SI units throughout.
struct RobotParams {
  double body_mass = 4.4;
  /// Point mass at each leg end.
  double leg_mass = 0.4;
  /// Rigid-body inertia about the body origin at the nominal pose, with the
  /// leg point masses folded in.
  Eigen::Matrix3d inertia = Eigen::Vector3d(0.33, 0.33, 0.66).asDiagonal();
  /// Hip positions in the body frame, legs ordered front-left, front-right,
  /// rear-right, rear-left.
  std::array<Eigen::Vector3d, 4> hip_offsets = {
      Eigen::Vector3d(0.2, 0.2, 0.0), Eigen::Vector3d(0.2, -0.2, 0.0),
      Eigen::Vector3d(-0.2, -0.2, 0.0), Eigen::Vector3d(-0.2, 0.2, 0.0)};
  double leg_length = 0.3;
  /// Rotor reaction torque per unit thrust (tau_i = k T_i), m.
  double rotor_moment_gain = 0.055;
  std::array<double, 4> rotor_spin_signs = {1.0, -1.0, 1.0, -1.0};
  /// Isotropic rotational damping, N m s / rad.
  double drag_gamma = 0.275;
  double gravity = 9.81;

  double total_mass() const { return body_mass + 4.0 * leg_mass; }
  double hover_thrust() const { return total_mass() * gravity / 4.0; }

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  bool operator==(const RobotParams&) const = default;
};

/// Relative mismatch between the controller's model and the simulated plant.
/// Each entry scales the matching RobotParams field by (1 + fraction).
struct PlantPerturbation {
  double mass = 0.0;
  double inertia = 0.05;
  double rotor_moment_gain = -0.05;
  double drag_gamma = 0.05;

  void validate() const;
  RobotParams apply(const RobotParams& nominal) const;

  bool operator==(const PlantPerturbation&) const = default;
};

}  // namespace morpho
