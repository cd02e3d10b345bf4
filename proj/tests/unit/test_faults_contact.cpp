#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "morpho/contact.hpp"
#include "morpho/dynamics.hpp"
#include "morpho/errors.hpp"
#include "morpho/faults.hpp"
#include "oracles.hpp"

using namespace morpho;

// ---------------------------------------------------------------- faults

TEST(FaultSchedule, HealthyBeforeEvents) {
  const FaultSchedule s = staged_loe(3, {7, 14, 21}, {0.33, 0.66, 1.0});
  EXPECT_EQ(s.effectiveness_at(0.0), Eigen::Vector4d::Ones());
  EXPECT_EQ(s.effectiveness_at(6.999), Eigen::Vector4d::Ones());
}

TEST(FaultSchedule, StageOneCaseTwoSchedule) {
  const FaultSchedule s = staged_loe(3, {7, 14, 21}, {0.33, 0.66, 1.0});
  EXPECT_NEAR(s.effectiveness_at(15.0)[3], 0.34, 1e-12);
  EXPECT_NEAR(s.effectiveness_at(7.0)[3], 0.67, 1e-12);
  EXPECT_EQ(s.effectiveness_at(30.0)[3], 0.0);
  EXPECT_EQ(s.effectiveness_at(30.0).head<3>(), Eigen::Vector3d::Ones());
  EXPECT_EQ(s.event_times(), (std::vector<double>{7, 14, 21}));
}

TEST(FaultSchedule, ValidationRejectsDisorderAndRange) {
  FaultSchedule s;
  s.rotors[0] = {{2.0, 0.5}, {1.0, 0.2}};
  EXPECT_THROW(s.validate(), ValidationError);
  s.rotors[0] = {{1.0, 0.5}, {1.0, 0.2}};
  EXPECT_THROW(s.validate(), ValidationError);
  s.rotors[0] = {{1.0, 1.5}};
  EXPECT_THROW(s.validate(), ValidationError);
  s.rotors[0] = {{1.0, 0.5}, {2.0, 0.0}};
  EXPECT_NO_THROW(s.validate());
}

TEST(Apply, IdentityAnnihilationAndProduct) {
  const Eigen::Vector4d t(1.0, 2.0, 3.0, 30.0);
  EXPECT_EQ(apply(Eigen::Vector4d::Ones(), t), t);
  EXPECT_EQ(apply(Eigen::Vector4d(1, 1, 1, 0), t)[3], 0.0);
  EXPECT_NEAR(apply(Eigen::Vector4d(1, 1, 1, 0.67), Eigen::Vector4d::Constant(14.715))[3],
              9.859, 1e-3);
}

TEST(Apply, HomogeneousAndMonotone) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Vector4d eta(u(rng), u(rng), u(rng), u(rng));
    const Eigen::Vector4d t = 30.0 * Eigen::Vector4d(u(rng), u(rng), u(rng), u(rng));
    const double a = 3.0 * u(rng);
    EXPECT_TRUE(apply(eta, (a * t).eval()).isApprox(a * apply(eta, t), 1e-14));
    const Eigen::Vector4d bigger = t + Eigen::Vector4d::Constant(1.0);
    EXPECT_TRUE((apply(eta, bigger).array() >= apply(eta, t).array()).all());
  }
}

TEST(Apply, CapModeLimitsAtScaledHover) {
  const Eigen::Vector4d eta(1.0, 1.0, 1.0, 0.5);
  const Eigen::Vector4d cmd(5.0, 5.0, 5.0, 20.0);
  EXPECT_NEAR(apply(eta, cmd, LoeMode::kCap, 14.715)[3], 0.5 * 14.715, 1e-12);
  EXPECT_EQ(apply(eta, cmd, LoeMode::kCap, 14.715)[0], 5.0);
}

// ---------------------------------------------------------------- contact

TEST(Smoothing, EndpointsAndMidpoint) {
  EXPECT_EQ(smoothing(0.0, 1e-3), 0.0);
  EXPECT_EQ(smoothing(-1.0, 1e-3), 0.0);
  EXPECT_DOUBLE_EQ(smoothing(1e-3, 1e-3), 1.0);
  EXPECT_DOUBLE_EQ(smoothing(5e-4, 1e-3), 0.5);
  EXPECT_EQ(smoothing(1.0, 1e-3), 1.0);
}

TEST(NormalForce, Examples) {
  const ContactParams p;
  EXPECT_EQ(normal_force(-0.01, 0.0, p), 0.0);
  EXPECT_EQ(normal_force(0.0, 5.0, p), 0.0);
  EXPECT_DOUBLE_EQ(normal_force(p.transition_width, 0.0, p),
                   p.stiffness * p.transition_width);
  EXPECT_EQ(normal_force(0.01, -100.0, p), 0.0);
}

TEST(FrictionForce, Examples) {
  const ContactParams p;
  EXPECT_EQ(friction_force(0.0, Eigen::Vector2d(1, 0), p), Eigen::Vector2d::Zero());
  EXPECT_EQ(friction_force(10.0, Eigen::Vector2d::Zero(), p), Eigen::Vector2d::Zero());
  const Eigen::Vector2d v = Eigen::Vector2d(0.6, -0.8) * 10.0 * p.critical_velocity;
  const Eigen::Vector2d f = friction_force(10.0, v, p);
  EXPECT_GE(f.norm(), p.mu_dynamic * 10.0 - 1e-12);
  EXPECT_LE(f.norm(), p.mu_static * 10.0 + 1e-12);
  EXPECT_TRUE((-f.normalized()).isApprox(v.normalized(), 1e-12));
}

TEST(FrictionForce, DissipativeAndDynamicLimit) {
  const ContactParams p;
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector2d v(u(rng) * 0.01, u(rng) * 0.01);
    EXPECT_LE(friction_force(20.0, v, p).dot(v), 0.0);
  }
  EXPECT_NEAR(friction_force(1.0, Eigen::Vector2d(10.0, 0.0), p).norm(), p.mu_dynamic, 1e-9);
}

TEST(Contact, ContinuityAcrossSeams) {
  const ContactParams p;
  const double w = p.transition_width;
  // Spacing well below w * 1e-6 so smooth slope alone stays under the bound.
  double worst = 0.0;
  for (double seam : {0.0, w}) {
    for (double rate : {-0.5, 0.0, 0.5}) {
      double prev = normal_force(seam - 1e-8, rate, p);
      for (int i = -99; i <= 100; ++i) {
        const double f = normal_force(seam + i * 1e-10, rate, p);
        const double scale = std::max(1.0, std::abs(f));
        worst = std::max(worst, std::abs(f - prev) / scale);
        prev = f;
      }
    }
  }
  const Eigen::Vector2d dir(0.8, 0.6);
  Eigen::Vector2d prev = friction_force(30.0, dir * (p.critical_velocity - 1e-8), p);
  for (int i = -99; i <= 100; ++i) {
    const Eigen::Vector2d f = friction_force(30.0, dir * (p.critical_velocity + i * 1e-10), p);
    worst = std::max(worst, (f - prev).norm() / 30.0);
    prev = f;
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(ContactWrench, NoActionAtDistance) {
  const RobotParams r;
  const ContactParams c;
  RomState x = hover_state(Eigen::Vector3d(0, 0, 0.06));
  x[sx::kVel + 2] = -3.0;
  const ExternalWrench w = contact_wrench(x, r, c);
  EXPECT_EQ(w.force_world, Eigen::Vector3d::Zero());
  EXPECT_EQ(w.torque_body, Eigen::Vector3d::Zero());
}

TEST(ContactWrench, StaticEquilibriumAgainstBisection) {
  const RobotParams r;
  const ContactParams c;
  const double per_wheel = r.total_mass() * r.gravity / 4.0;
  const double d_star = oracle::bisect(
      [&](double d) { return smoothing(d, c.transition_width) * c.stiffness * d - per_wheel; },
      0.0, 1.0);
  // Wheels sit at body height in the nominal pose.
  const RomState x = hover_state(Eigen::Vector3d(0, 0, c.wheel_radius - d_star));
  const ExternalWrench w = contact_wrench(x, r, c);
  EXPECT_NEAR(w.force_world.z(), r.total_mass() * r.gravity, 4e-6);
  EXPECT_LT(w.force_world.head<2>().norm(), 1e-9);
  EXPECT_LT(w.torque_body.norm(), 1e-9);
  for (const auto& wheel : wheel_kinematics(x, r)) {
    const double d = c.wheel_radius - wheel.center_world.z();
    EXPECT_NEAR(normal_force(d, 0.0, c), per_wheel, 1e-6);
  }
}

TEST(ContactParams, Validation) {
  ContactParams c;
  c.mu_dynamic = 0.9;
  EXPECT_THROW(c.validate(), ValidationError);
  c = ContactParams{};
  c.stiffness = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
}
