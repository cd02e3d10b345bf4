#include "morpho/self_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "morpho/contact.hpp"
#include "morpho/dynamics.hpp"
#include "morpho/faults.hpp"
#include "morpho/integrator.hpp"
#include "morpho/nmpc.hpp"

namespace morpho {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

CheckResult hover_equilibrium() {
  const RobotParams robot;
  const RomState dx =
      rom_derivative(hover_state(Eigen::Vector3d(1.0, -2.0, 3.0), 0.3), hover_input(robot), robot);
  const double worst = dx.segment<14>(sx::kVel).lpNorm<Eigen::Infinity>();
  const bool weight_ok = std::abs(robot.total_mass() * robot.gravity - 58.86) < 1e-9 &&
                         std::abs(robot.hover_thrust() - 14.715) < 1e-9;
  return {"hover equilibrium", worst <= 1e-9 && weight_ok,
          fmt("max rate-channel derivative %.3g", worst)};
}

CheckResult rk4_order() {
  auto f = [](const Eigen::Matrix<double, 1, 1>& x, const Eigen::Matrix<double, 1, 1>&) {
    return Eigen::Matrix<double, 1, 1>(-x);
  };
  const Eigen::Matrix<double, 1, 1> x0(1.0), u(0.0);
  auto error = [&](int steps) {
    const auto x = discretize(f, x0, u, 1.0, steps);
    return std::abs(x[0] - std::exp(-1.0));
  };
  const double slope = std::log2(error(10) / error(20));
  return {"rk4 convergence order", slope >= 3.7 && slope <= 4.3, fmt("slope %.3f", slope)};
}

CheckResult gradient() {
  const RobotParams robot;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  bool descent = true;
  for (int k = 0; k < 20; ++k) {
    const bool sagittal = k % 2 == 1;
    OcpConfig cfg = k % 4 == 2 ? OcpConfig::agile_defaults(robot)
                               : OcpConfig::fault_tolerant_defaults(robot, sagittal);
    NmpcSolver solver(cfg, robot, IntegratorConfig{});
    RomState x0 = hover_state(Eigen::Vector3d(unit(rng), unit(rng), 5.0 + unit(rng)),
                              0.5 * unit(rng));
    for (int i = 0; i < 3; ++i) x0[sx::kRoll + i] += 0.2 * unit(rng);
    for (int i = 0; i < 3; ++i) x0[sx::kVel + i] += unit(rng);
    for (int i = 0; i < 3; ++i) x0[sx::kOmega + i] += 0.5 * unit(rng);
    RomState goal = hover_state(Eigen::Vector3d(2.0 * unit(rng), 2.0 * unit(rng), 5.0));
    const ReferencePlan refs = ReferencePlan::constant(goal, cfg.horizon);

    const Eigen::VectorXd lo = solver.lower_bounds();
    const Eigen::VectorXd hi = solver.upper_bounds();
    Eigen::VectorXd z(lo.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double mid = 0.5 * (lo[i] + hi[i]);
      z[i] = mid + 0.3 * (hi[i] - lo[i]) * unit(rng);
    }
    Eigen::VectorXd g;
    const double f0 = solver.objective_and_gradient(x0, refs, z, g);
    Eigen::VectorXd fd(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[i]));
      Eigen::VectorXd zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      fd[i] = (solver.objective(x0, refs, zp) - solver.objective(x0, refs, zm)) / (2.0 * h);
    }
    const double rel = (fd - g).lpNorm<Eigen::Infinity>() /
                       std::max(1.0, g.lpNorm<Eigen::Infinity>());
    worst = std::max(worst, rel);

    bool decreased = false;
    for (double a = 1e-2; a > 1e-10 && !decreased; a *= 0.1) {
      decreased = solver.objective(x0, refs, z - (a / g.norm()) * g) < f0;
    }
    descent = descent && decreased;
  }
  return {"ocp gradient vs central differences (20 instances)", worst <= 1e-4 && descent,
          fmt("worst relative error %.3g", worst) + (descent ? ", descent ok" : ", descent FAILED")};
}

CheckResult contact_continuity() {
  const ContactParams p;
  const double eps = 1e-12;
  double worst = 0.0;
  for (double seam : {0.0, p.transition_width}) {
    const double scale = std::max(1.0, std::abs(normal_force(seam + 1e-6, 0.1, p)));
    const double jump =
        std::abs(normal_force(seam + eps, 0.1, p) - normal_force(seam - eps, 0.1, p));
    worst = std::max(worst, jump / scale);
  }
  const Eigen::Vector2d dir(0.6, 0.8);
  const double vc = p.critical_velocity;
  const double fj = (friction_force(50.0, dir * (vc + eps), p) -
                     friction_force(50.0, dir * (vc - eps), p))
                        .norm();
  worst = std::max(worst, fj / 50.0);
  return {"contact force continuity", worst <= 1e-6, fmt("max relative jump %.3g", worst)};
}

CheckResult healthy_identity() {
  const Eigen::Vector4d cmd(3.0, 14.715, 22.5, 30.0);
  const bool ok = apply(Eigen::Vector4d::Ones(), cmd) == cmd;
  FaultSchedule empty;
  const bool ones = empty.effectiveness_at(12.0) == Eigen::Vector4d::Ones();
  return {"healthy rotors pass commands through", ok && ones, ""};
}

}  // namespace

std::vector<CheckResult> run_self_check() {
  std::vector<CheckResult> out;
  auto guarded = [&](const char* name, CheckResult (*fn)()) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("hover equilibrium", hover_equilibrium);
  guarded("rk4 convergence order", rk4_order);
  guarded("ocp gradient", gradient);
  guarded("contact force continuity", contact_continuity);
  guarded("healthy rotors pass commands through", healthy_identity);
  return out;
}

bool print_self_check(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const CheckResult& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name;
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << '\n';
    all = all && r.passed;
  }
  return all;
}

}  // namespace morpho
