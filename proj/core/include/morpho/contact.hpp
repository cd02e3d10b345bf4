#pragma once

#include <Eigen/Core>
#include <array>

#include "morpho/dynamics.hpp"
#include "morpho/robot_params.hpp"
#include "morpho/state.hpp"

namespace morpho {

/// Wheel-ground contact against the plane z = 0.
///
/// Wheels are spheres of `wheel_radius` centred at the thruster positions
/// given by leg forward kinematics.
struct ContactParams {
  double stiffness = 1e4;          ///< N/m
  double damping = 1e3;            ///< N s/m
  double transition_width = 1e-3;  ///< m
  double mu_static = 0.7;
  double mu_dynamic = 0.5;
  double critical_velocity = 1e-3;  ///< m/s
  double wheel_radius = 0.05;       ///< m

  void validate() const;

  bool operator==(const ContactParams&) const = default;
};

/// Cubic smoothstep ramp of the normal force over the first `w` of
/// penetration; C1 at both ends.
double smoothing(double d, double w);

/// Spring-damper normal force, clamped at zero (no adhesion).
double normal_force(double d, double d_rate, const ContactParams& p);

/// Regularized stick-slip friction opposing the slip velocity `v_t`.
Eigen::Vector2d friction_force(double f_n, const Eigen::Vector2d& v_t,
                               const ContactParams& p);

/// Effective friction coefficient at slip speed v (before the slip
/// activation factor).
double friction_coefficient(double speed, const ContactParams& p);

struct WheelKinematics {
  Eigen::Vector3d center_world;
  Eigen::Vector3d velocity_world;
  Eigen::Vector3d center_body;
};

/// World position and velocity of each wheel centre, including the motion
/// induced by joint rates.
std::array<WheelKinematics, 4> wheel_kinematics(const RomState& x,
                                                const RobotParams& robot);

/// Summed ground reaction on all wheels: net world-frame force and body-frame
/// torque about the body origin.
ExternalWrench contact_wrench(const RomState& x, const RobotParams& robot,
                              const ContactParams& contact);

}  // namespace morpho
