#pragma once

#include <Eigen/Core>
#include <numbers>

namespace morpho {

inline constexpr int kNumLegs = 4;
inline constexpr int kStateDim = 28;
inline constexpr int kInputDim = 12;

/// Offsets into the ROM state vector
///   [p_b(3), theta_b(3), q_sag(4), q_front(4), v_b(3), omega_b(3),
///    qdot_sag(4), qdot_front(4)].
/// theta_b is (roll, pitch, yaw); p_b and v_b are world frame, omega_b body.
namespace sx {
inline constexpr int kPos = 0;
inline constexpr int kAtt = 3;
inline constexpr int kRoll = 3;
inline constexpr int kPitch = 4;
inline constexpr int kYaw = 5;
inline constexpr int kJoint = 6;
inline constexpr int kSag = 6;
inline constexpr int kFront = 10;
inline constexpr int kVel = 14;
inline constexpr int kOmega = 17;
inline constexpr int kJointRate = 20;
inline constexpr int kSagRate = 20;
inline constexpr int kFrontRate = 24;
}  // namespace sx

/// Offsets into the control vector [T(4), qddot_sag(4), qddot_front(4)].
namespace ux {
inline constexpr int kThrust = 0;
inline constexpr int kSagAccel = 4;
inline constexpr int kFrontAccel = 8;
}  // namespace ux

template <typename S>
using StateT = Eigen::Matrix<S, kStateDim, 1>;
template <typename S>
using InputT = Eigen::Matrix<S, kInputDim, 1>;
template <typename S>
using Vec3T = Eigen::Matrix<S, 3, 1>;
template <typename S>
using Mat3T = Eigen::Matrix<S, 3, 3>;

using RomState = StateT<double>;
using ControlInput = InputT<double>;

/// Joint angle at which every thrust axis points along body +z.
inline constexpr double kNominalJointAngle = std::numbers::pi / 4.0;

}  // namespace morpho
