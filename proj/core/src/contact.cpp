#include "morpho/contact.hpp"

#include <ceres/jet.h>

#include <algorithm>
#include <cmath>

#include "morpho/errors.hpp"

namespace morpho {

void ContactParams::validate() const {
  if (!(stiffness > 0.0)) throw ValidationError("contact.stiffness", "must be > 0");
  if (!(damping > 0.0)) throw ValidationError("contact.damping", "must be > 0");
  if (!(transition_width > 0.0)) {
    throw ValidationError("contact.transition_width", "must be > 0");
  }
  if (!(critical_velocity > 0.0)) {
    throw ValidationError("contact.critical_velocity", "must be > 0");
  }
  if (!(mu_dynamic >= 0.0)) {
    throw ValidationError("contact.mu_dynamic", "must be >= 0");
  }
  if (!(mu_static >= mu_dynamic)) {
    throw ValidationError("contact.mu_static", "must be >= mu_dynamic");
  }
  if (!(wheel_radius >= 0.0)) {
    throw ValidationError("contact.wheel_radius", "must be >= 0");
  }
}

double smoothing(double d, double w) {
  if (d <= 0.0) return 0.0;
  if (d >= w) return 1.0;
  const double t = d / w;
  return t * t * (3.0 - 2.0 * t);
}

double normal_force(double d, double d_rate, const ContactParams& p) {
  if (d <= 0.0) return 0.0;
  const double f =
      smoothing(d, p.transition_width) * (p.stiffness * d + p.damping * d_rate);
  return std::max(0.0, f);
}

double friction_coefficient(double speed, const ContactParams& p) {
  const double r = speed / (3.0 * p.critical_velocity);
  return p.mu_dynamic + (p.mu_static - p.mu_dynamic) * std::exp(-r * r);
}

Eigen::Vector2d friction_force(double f_n, const Eigen::Vector2d& v_t,
                               const ContactParams& p) {
  const double speed = v_t.norm();
  if (f_n <= 0.0 || speed == 0.0) return Eigen::Vector2d::Zero();
  const double magnitude = friction_coefficient(speed, p) *
                           std::tanh(speed / p.critical_velocity) * f_n;
  return -magnitude * v_t / speed;
}

std::array<WheelKinematics, 4> wheel_kinematics(const RomState& x,
                                                const RobotParams& robot) {
  using Jet2 = ceres::Jet<double, 2>;
  const Eigen::Matrix3d r = rotation_matrix<double>(
      x[sx::kRoll], x[sx::kPitch], x[sx::kYaw]);
  const Eigen::Vector3d p = x.segment<3>(sx::kPos);
  const Eigen::Vector3d v = x.segment<3>(sx::kVel);
  const Eigen::Vector3d omega = x.segment<3>(sx::kOmega);

  std::array<WheelKinematics, 4> out;
  for (int i = 0; i < kNumLegs; ++i) {
    const Jet2 q_sag(x[sx::kSag + i], 0);
    const Jet2 q_front(x[sx::kFront + i], 1);
    const LegPose<Jet2> pose =
        leg_forward_kinematics<Jet2>(i, q_sag, q_front, robot);
    Eigen::Vector3d pos, leg_rate;
    for (int k = 0; k < 3; ++k) {
      pos[k] = pose.position[k].a;
      leg_rate[k] = pose.position[k].v[0] * x[sx::kSagRate + i] +
                    pose.position[k].v[1] * x[sx::kFrontRate + i];
    }
    out[i].center_body = pos;
    out[i].center_world = p + r * pos;
    out[i].velocity_world = v + r * (omega.cross(pos) + leg_rate);
  }
  return out;
}

ExternalWrench contact_wrench(const RomState& x, const RobotParams& robot,
                              const ContactParams& contact) {
  ExternalWrench w;
  const Eigen::Matrix3d r = rotation_matrix<double>(
      x[sx::kRoll], x[sx::kPitch], x[sx::kYaw]);
  for (const WheelKinematics& wheel : wheel_kinematics(x, robot)) {
    const double d = contact.wheel_radius - wheel.center_world.z();
    if (d <= 0.0) continue;
    const double f_n = normal_force(d, -wheel.velocity_world.z(), contact);
    const Eigen::Vector2d f_t =
        friction_force(f_n, wheel.velocity_world.head<2>(), contact);
    const Eigen::Vector3d f(f_t.x(), f_t.y(), f_n);
    // Force acts at the lowest point of the wheel.
    const Eigen::Vector3d contact_body =
        wheel.center_body +
        r.transpose() * Eigen::Vector3d(0.0, 0.0, -contact.wheel_radius);
    w.force_world += f;
    w.torque_body += contact_body.cross(r.transpose() * f);
  }
  return w;
}

}  // namespace morpho
