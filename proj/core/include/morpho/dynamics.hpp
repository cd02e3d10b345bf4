#pragma once

// Reduced-order model of the legged quadrotor.
//
// The body is a 6-DoF rigid body; each leg is a massless link ending in a
// point mass that carries a rotor. Leg posture only enters through where the
// rotors sit and which way they push. Joint angles are driven as double
// integrators of the commanded joint accelerations.
//
// Everything here is templated on the scalar type so the same code runs on
// doubles (plant, tests) and on dual numbers (optimizer gradients).

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

#include "morpho/errors.hpp"
#include "morpho/robot_params.hpp"
#include "morpho/state.hpp"

namespace morpho {

/// Distance from +-90 deg pitch at which the Euler-rate map is singular.
inline constexpr double kSingularPitchMargin = 1e-3;

enum class SingularityPolicy {
  kThrow,  ///< raise SingularAttitude
  kClamp,  ///< saturate cos(pitch) at the margin (used inside OCP rollouts)
};

template <typename S>
struct LegPose {
  Vec3T<S> position;     ///< thruster position, body frame, m
  Vec3T<S> thrust_axis;  ///< unit thrust direction, body frame
};

template <typename S>
struct Wrench {
  Vec3T<S> force;
  Vec3T<S> torque;
};

namespace detail {

template <typename S>
Mat3T<S> rot_x(const S& a) {
  using std::cos;
  using std::sin;
  const S c = cos(a), s = sin(a);
  Mat3T<S> r;
  r << S(1.0), S(0.0), S(0.0),  //
      S(0.0), c, -s,            //
      S(0.0), s, c;
  return r;
}

template <typename S>
Mat3T<S> rot_y(const S& a) {
  using std::cos;
  using std::sin;
  const S c = cos(a), s = sin(a);
  Mat3T<S> r;
  r << c, S(0.0), s,           //
      S(0.0), S(1.0), S(0.0),  //
      -s, S(0.0), c;
  return r;
}

inline double value_of(double x) { return x; }
template <typename S>
double value_of(const S& x) {
  return x.a;
}

inline double sign_or_one(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace detail

/// Body-to-world rotation for ZYX (yaw-pitch-roll) Euler angles.
template <typename S>
Mat3T<S> rotation_matrix(const S& roll, const S& pitch, const S& yaw) {
  using std::cos;
  using std::sin;
  const S cr = cos(roll), sr = sin(roll);
  const S cp = cos(pitch), sp = sin(pitch);
  const S cy = cos(yaw), sy = sin(yaw);
  Mat3T<S> r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,  //
      sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,   //
      -sp, cp * sr, cp * cr;
  return r;
}

/// Maps body angular velocity to ZYX Euler-angle rates.
template <typename S>
Mat3T<S> euler_rate_matrix(const S& roll, const S& pitch,
                           SingularityPolicy policy = SingularityPolicy::kThrow) {
  using std::cos;
  using std::sin;
  const double guard = std::sin(kSingularPitchMargin);
  S cp = cos(pitch);
  const S sp = sin(pitch);
  if (std::abs(detail::value_of(cp)) < guard) {
    if (policy == SingularityPolicy::kThrow) {
      throw SingularAttitude("pitch within 1e-3 rad of +-90 deg");
    }
    cp = S(detail::sign_or_one(detail::value_of(cp)) * guard);
  }
  const S cr = cos(roll), sr = sin(roll);
  const S tp = sp / cp;
  Mat3T<S> j;
  j << S(1.0), sr * tp, cr * tp,  //
      S(0.0), cr, -sr,            //
      S(0.0), sr / cp, cr / cp;
  return j;
}

inline Eigen::Matrix3d euler_rate_matrix(const Eigen::Vector3d& theta) {
  return euler_rate_matrix<double>(theta.x(), theta.y());
}

/// Thruster pose of one leg (0-based index, front-left first).
///
/// The frontal joint rotates the leg about body x, then the sagittal joint
/// about the resulting y axis. Signs are mirrored per hip quadrant so that
/// increasing either angle tilts the rotor outward and mirrored legs stay
/// mirror images. At (pi/4, pi/4) every thrust axis is body +z.
template <typename S>
LegPose<S> leg_forward_kinematics(int leg, const S& q_sag, const S& q_front,
                                  const RobotParams& params) {
  if (leg < 0 || leg >= kNumLegs) {
    throw InvalidLegIndex("leg index " + std::to_string(leg) +
                          " outside [0, 3]");
  }
  const Eigen::Vector3d& hip = params.hip_offsets[leg];
  const double side_x = detail::sign_or_one(hip.x());
  const double side_y = detail::sign_or_one(hip.y());
  Eigen::Vector3d out(hip.x(), hip.y(), 0.0);
  if (out.norm() < 1e-12) {
    out = Eigen::Vector3d(side_x, 0.0, 0.0);
  }
  out.normalize();

  const S front_tilt = -side_y * (q_front - S(kNominalJointAngle));
  const S sag_tilt = side_x * (q_sag - S(kNominalJointAngle));
  const Mat3T<S> r = detail::rot_x(front_tilt) * detail::rot_y(sag_tilt);

  LegPose<S> pose;
  pose.thrust_axis = r.col(2);
  pose.position =
      hip.cast<S>() + (r * (params.leg_length * out).cast<S>()).eval();
  return pose;
}

/// Net thruster wrench about the body origin, body frame.
template <typename S, typename Joints, typename Thrusts>
Wrench<S> body_wrench(const Joints& q_a, const Thrusts& thrusts,
                      const RobotParams& params) {
  Wrench<S> w{Vec3T<S>::Zero(), Vec3T<S>::Zero()};
  for (int i = 0; i < kNumLegs; ++i) {
    const LegPose<S> pose =
        leg_forward_kinematics<S>(i, S(q_a[i]), S(q_a[kNumLegs + i]), params);
    const S t = S(thrusts[i]);
    const Vec3T<S> f = t * pose.thrust_axis;
    w.force += f;
    w.torque += pose.position.cross(f) +
                S(params.rotor_spin_signs[i] * params.rotor_moment_gain) * f;
  }
  return w;
}

inline Wrench<double> body_wrench(const Eigen::Matrix<double, 8, 1>& q_a,
                                  const Eigen::Vector4d& thrusts,
                                  const RobotParams& params) {
  return body_wrench<double>(q_a, thrusts, params);
}

/// Additional wrench on the body: ground contact, or a disturbance estimate
/// inside the prediction model.
struct ExternalWrench {
  Eigen::Vector3d force_world = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque_body = Eigen::Vector3d::Zero();
};

/// Continuous-time ROM state derivative.
template <typename S>
StateT<S> rom_derivative(const StateT<S>& x, const InputT<S>& u,
                         const RobotParams& params,
                         SingularityPolicy policy = SingularityPolicy::kThrow,
                         const ExternalWrench* external = nullptr) {
  StateT<S> dx;
  const S roll = x[sx::kRoll], pitch = x[sx::kPitch], yaw = x[sx::kYaw];
  const Vec3T<S> omega = x.template segment<3>(sx::kOmega);

  dx.template segment<3>(sx::kPos) = x.template segment<3>(sx::kVel);
  dx.template segment<3>(sx::kAtt) =
      euler_rate_matrix<S>(roll, pitch, policy) * omega;
  dx.template segment<8>(sx::kJoint) = x.template segment<8>(sx::kJointRate);

  Eigen::Matrix<S, 8, 1> q_a = x.template segment<8>(sx::kJoint);
  Eigen::Matrix<S, 4, 1> thrusts = u.template segment<4>(ux::kThrust);
  const Wrench<S> w = body_wrench<S>(q_a, thrusts, params);

  const double m = params.total_mass();
  Vec3T<S> accel = rotation_matrix<S>(roll, pitch, yaw) * w.force / S(m);
  accel[2] -= S(params.gravity);

  const Mat3T<S> inertia = params.inertia.cast<S>();
  Vec3T<S> torque = w.torque - S(params.drag_gamma) * omega -
                    omega.cross((inertia * omega).eval());
  if (external != nullptr) {
    accel += (external->force_world / m).cast<S>();
    torque += external->torque_body.cast<S>();
  }
  dx.template segment<3>(sx::kVel) = accel;
  dx.template segment<3>(sx::kOmega) =
      params.inertia.inverse().cast<S>() * torque;
  dx.template segment<8>(sx::kJointRate) = u.template segment<8>(ux::kSagAccel);
  return dx;
}

inline RomState rom_derivative(const RomState& x, const ControlInput& u,
                               const RobotParams& params) {
  return rom_derivative<double>(x, u, params);
}

/// Hover state at `position` with the nominal leg pose and zero rates.
RomState hover_state(const Eigen::Vector3d& position, double yaw = 0.0);

/// Per-rotor hover thrust with zero joint accelerations.
ControlInput hover_input(const RobotParams& params);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace morpho
