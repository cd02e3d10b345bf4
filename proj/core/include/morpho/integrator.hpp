#pragma once

#include <cmath>

namespace morpho {

struct IntegratorConfig {
  /// Plant RK4 step, s.
  double plant_step = 1e-4;
  /// RK4 sub-steps per control interval inside the prediction model.
  int prediction_substeps = 5;
  /// Controller update period, s. Integer multiple of plant_step.
  double control_period = 0.1;

  void validate() const;
  /// control_period / plant_step, rounded.
  long plant_steps_per_period() const {
    return std::lround(control_period / plant_step);
  }
  double prediction_step() const {
    return control_period / prediction_substeps;
  }

  bool operator==(const IntegratorConfig&) const = default;
};

/// One classical RK4 step of x' = f(x, u) with u held over the step.
template <typename F, typename X, typename U, typename H>
X rk4_step(F&& f, const X& x, const U& u, const H& h) {
  const X k1 = f(x, u);
  const X x2 = x + (h * 0.5) * k1;
  const X k2 = f(x2, u);
  const X x3 = x + (h * 0.5) * k2;
  const X k3 = f(x3, u);
  const X x4 = x + h * k3;
  const X k4 = f(x4, u);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Advances one control period with `substeps` RK4 steps, u zero-order held.
template <typename F, typename X, typename U>
X discretize(F&& f, const X& x, const U& u, double period, int substeps) {
  const double h = period / substeps;
  X out = x;
  for (int i = 0; i < substeps; ++i) {
    out = rk4_step(f, out, u, h);
  }
  return out;
}

template <typename F, typename X, typename U>
X discretize(F&& f, const X& x, const U& u, const IntegratorConfig& config) {
  return discretize(f, x, u, config.control_period, config.prediction_substeps);
}

}  // namespace morpho
