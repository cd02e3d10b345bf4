#include "morpho/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "morpho/errors.hpp"

namespace morpho {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kGradient:
      return "gradient";
    case Termination::kCostStall:
      return "cost_stall";
    case Termination::kIterationLimit:
      return "iteration_limit";
    case Termination::kLineSearchFailure:
      return "line_search_failure";
  }
  return "unknown";
}

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Variables pinned at a bound with the gradient pushing outward.
Eigen::VectorXd free_mask(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                          const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, std::abs(x[i]));
    if ((x[i] <= lo[i] + tol && g[i] > 0.0) ||
        (x[i] >= hi[i] - tol && g[i] < 0.0)) {
      mask[i] = 0.0;
    }
  }
  return mask;
}

// Two-loop recursion restricted to the free coordinates.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& g,
                                const Eigen::VectorXd& mask,
                                const std::deque<CurvaturePair>& pairs) {
  Eigen::VectorXd q = g.cwiseProduct(mask);
  std::vector<double> alpha(pairs.size());
  for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
    const CurvaturePair& p = pairs[i];
    alpha[i] = p.rho * p.s.cwiseProduct(mask).dot(q);
    q -= alpha[i] * p.y.cwiseProduct(mask);
  }
  const CurvaturePair& last = pairs.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const CurvaturePair& p = pairs[i];
    const double beta = p.rho * p.y.cwiseProduct(mask).dot(q);
    q += (alpha[i] - beta) * p.s.cwiseProduct(mask);
  }
  return -q.cwiseProduct(mask);
}

}  // namespace

BoxMinimizerResult minimize_box(const ValueFn& value, const ValueGradFn& value_grad,
                                const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi,
                                const BoxMinimizerOptions& options) {
  BoxMinimizerResult result;
  Eigen::VectorXd x = project(x0, lo, hi);
  Eigen::VectorXd g(x.size());
  double f = value_grad(x, g);
  result.evaluations = 1;
  if (!std::isfinite(f) || !g.allFinite()) {
    throw NonFiniteCost("objective is not finite at the start point");
  }

  std::deque<CurvaturePair> pairs;
  result.termination = Termination::kIterationLimit;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd projected_step = project(x - g, lo, hi) - x;
    if (projected_step.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
      result.termination = Termination::kGradient;
      result.converged = true;
      break;
    }

    const Eigen::VectorXd mask = free_mask(x, g, lo, hi);
    Eigen::VectorXd d;
    bool quasi_newton = !pairs.empty();
    if (quasi_newton) {
      d = lbfgs_direction(g, mask, pairs);
      if (!(g.dot(d) < 0.0)) quasi_newton = false;
    }
    if (!quasi_newton) d = -g.cwiseProduct(mask);

    double step = quasi_newton ? 1.0
                               : 1.0 / std::max(1.0, d.lpNorm<Eigen::Infinity>());
    Eigen::VectorXd x_new;
    double f_new = f;
    bool accepted = false;
    for (int b = 0; b < options.max_backtracks; ++b) {
      x_new = project(x + step * d, lo, hi);
      f_new = value(x_new);
      ++result.evaluations;
      if (std::isfinite(f_new) &&
          f_new <= f + options.armijo_c1 * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!pairs.empty()) {
        pairs.clear();  // retry from steepest descent
        continue;
      }
      result.termination = Termination::kLineSearchFailure;
      break;
    }

    Eigen::VectorXd g_new(x.size());
    f_new = value_grad(x_new, g_new);
    ++result.evaluations;
    if (!std::isfinite(f_new) || !g_new.allFinite()) {
      result.termination = Termination::kLineSearchFailure;
      break;
    }

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      pairs.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
    }

    const double decrease = f - f_new;
    x = x_new;
    g = g_new;
    const double f_old = f;
    f = f_new;
    if (decrease <= options.relative_cost_tolerance *
                        std::max(std::abs(f_old), 1e-12)) {
      result.termination = Termination::kCostStall;
      result.converged = true;
      ++iter;
      break;
    }
  }

  result.x = x;
  result.cost = f;
  result.iterations = iter;
  return result;
}

}  // namespace morpho
