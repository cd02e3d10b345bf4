#include "morpho/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace morpho {

void RobotParams::validate() const {
  if (!(body_mass > 0.0)) throw ValidationError("robot.body_mass", "must be > 0");
  if (!(leg_mass > 0.0)) throw ValidationError("robot.leg_mass", "must be > 0");
  if (!(leg_length > 0.0)) {
    throw ValidationError("robot.leg_length", "must be > 0");
  }
  if (!(gravity > 0.0)) throw ValidationError("robot.gravity", "must be > 0");
  if (!(drag_gamma >= 0.0)) {
    throw ValidationError("robot.drag_gamma", "must be >= 0");
  }
  if (!(rotor_moment_gain >= 0.0)) {
    throw ValidationError("robot.rotor_moment_gain", "must be >= 0");
  }
  if (!inertia.allFinite() ||
      (inertia - inertia.transpose()).cwiseAbs().maxCoeff() >
          1e-12 * inertia.cwiseAbs().maxCoeff()) {
    throw ValidationError("robot.inertia", "must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw ValidationError("robot.inertia", "must be positive definite");
  }
  double sign_sum = 0.0;
  for (double s : rotor_spin_signs) {
    if (s != 1.0 && s != -1.0) {
      throw ValidationError("robot.rotor_spin_signs", "entries must be +1 or -1");
    }
    sign_sum += s;
  }
  if (sign_sum != 0.0) {
    throw ValidationError("robot.rotor_spin_signs", "must sum to zero");
  }
}

void PlantPerturbation::validate() const {
  auto check = [](double v, const char* field) {
    if (!(v >= -0.5 && v <= 0.5)) {
      throw ValidationError(field, "must lie in [-0.5, 0.5]");
    }
  };
  check(mass, "scenario.plant_perturbation.mass");
  check(inertia, "scenario.plant_perturbation.inertia");
  check(rotor_moment_gain, "scenario.plant_perturbation.rotor_moment_gain");
  check(drag_gamma, "scenario.plant_perturbation.drag_gamma");
}

RobotParams PlantPerturbation::apply(const RobotParams& nominal) const {
  RobotParams p = nominal;
  p.body_mass *= 1.0 + mass;
  p.leg_mass *= 1.0 + mass;
  p.inertia *= 1.0 + inertia;
  p.rotor_moment_gain *= 1.0 + rotor_moment_gain;
  p.drag_gamma *= 1.0 + drag_gamma;
  return p;
}

RomState hover_state(const Eigen::Vector3d& position, double yaw) {
  RomState x = RomState::Zero();
  x.segment<3>(sx::kPos) = position;
  x[sx::kYaw] = yaw;
  x.segment<8>(sx::kJoint).setConstant(kNominalJointAngle);
  return x;
}

ControlInput hover_input(const RobotParams& params) {
  ControlInput u = ControlInput::Zero();
  u.segment<4>(ux::kThrust).setConstant(params.hover_thrust());
  return u;
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, kTwoPi);
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

}  // namespace morpho
