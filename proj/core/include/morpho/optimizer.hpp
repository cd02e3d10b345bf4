#pragma once

#include <Eigen/Core>
#include <functional>

namespace morpho {

struct BoxMinimizerOptions {
  /// Stop when the projected-gradient infinity norm falls below this.
  double gradient_tolerance = 1e-4;
  /// Stop when an accepted step lowers the cost by less than this fraction.
  double relative_cost_tolerance = 1e-8;
  int max_iterations = 200;
  /// Number of (s, y) curvature pairs kept.
  int memory = 8;
  double armijo_c1 = 1e-4;
  int max_backtracks = 40;

  bool operator==(const BoxMinimizerOptions&) const = default;
};

enum class Termination {
  kGradient,
  kCostStall,
  kIterationLimit,
  kLineSearchFailure,
};

const char* to_string(Termination t);

struct BoxMinimizerResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  Termination termination = Termination::kIterationLimit;
};

/// Objective value only.
using ValueFn = std::function<double(const Eigen::VectorXd&)>;
/// Objective value; writes the gradient into the second argument.
using ValueGradFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Projects x onto [lo, hi] component-wise.
Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi);

/// Projected limited-memory quasi-Newton descent with Armijo backtracking
/// along the projection arc.
///
/// The cost never increases from the projected start point, and the
/// returned x lies inside the box exactly. Throws NonFiniteCost if the
/// objective is NaN/Inf at the start point.
BoxMinimizerResult minimize_box(const ValueFn& value, const ValueGradFn& value_grad,
                                const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi,
                                const BoxMinimizerOptions& options = {});

}  // namespace morpho
