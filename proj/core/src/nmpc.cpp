#include "morpho/nmpc.hpp"

#include <ceres/jet.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "morpho/dynamics.hpp"
#include "morpho/errors.hpp"

namespace morpho {

namespace {

using detail::value_of;

template <typename S>
S hinge_sq(const S& v) {
  return value_of(v) > 0.0 ? S(v * v) : S(0.0);
}

template <typename S>
S abs_s(const S& v) {
  return value_of(v) < 0.0 ? S(-v) : v;
}

// Shifts by a constant multiple of 2 pi, so derivatives pass through.
template <typename S>
S wrap_s(const S& a) {
  const double raw = value_of(a);
  return a + S(wrap_angle(raw) - raw);
}

bool is_attitude(int i) { return i >= sx::kAtt && i < sx::kAtt + 3; }

template <typename S>
S stage_cost_t(const StateT<S>& x, const RomState& ref, const InputT<S>& u,
               const OcpConfig& cfg) {
  S c(0.0);
  for (int i = 0; i < kStateDim; ++i) {
    const double w = cfg.q_weights[i];
    if (w == 0.0) continue;
    if (i == sx::kYaw && cfg.yaw_policy == YawPolicy::kFree) continue;
    S e = x[i] - S(ref[i]);
    if (is_attitude(i)) e = wrap_s(e);
    c += S(w) * e * e;
  }
  for (int k = 0; k < kInputDim; ++k) {
    const double w = cfg.r_weights[k];
    if (w == 0.0) continue;
    const S e = u[k] - S(cfg.input_reference[k]);
    c += S(w) * e * e;
  }

  for (int i : {sx::kRoll, sx::kPitch}) {
    c += S(cfg.attitude_soft_weight) *
         hinge_sq(S(abs_s(wrap_s(x[i])) - S(cfg.attitude_limit)));
  }
  for (int i = 0; i < 8; ++i) {
    const S& q = x[sx::kJoint + i];
    c += S(cfg.joint_soft_weight) *
         (hinge_sq(S(S(cfg.joint_min) - q)) + hinge_sq(S(q - S(cfg.joint_max))));
  }
  if (cfg.side_sum_limit > 0.0) {
    // Left side: legs 0 and 3; right side: legs 1 and 2.
    const S left = x[sx::kSag + 0] + x[sx::kSag + 3];
    const S right = x[sx::kSag + 1] + x[sx::kSag + 2];
    c += S(cfg.side_sum_soft_weight) *
         (hinge_sq(S(left - S(cfg.side_sum_limit))) +
          hinge_sq(S(right - S(cfg.side_sum_limit))));
  }
  c += S(cfg.singular_weight) *
       hinge_sq(S(abs_s(wrap_s(x[sx::kPitch])) -
                  S(std::numbers::pi / 2.0 - kSingularPitchMargin)));
  return c;
}

template <typename S>
StateT<S> propagate(const StateT<S>& x, const InputT<S>& u, const RobotParams& model,
                    const IntegratorConfig& integ, const ExternalWrench* dist) {
  auto f = [&model, dist](const StateT<S>& xs, const InputT<S>& us) {
    return rom_derivative<S>(xs, us, model, SingularityPolicy::kClamp, dist);
  };
  return discretize(f, x, u, integ.control_period, integ.prediction_substeps);
}

// Stage input from the decision vector; frontal accelerations are zero in
// sagittal-only mode.
template <typename S>
InputT<S> stage_input(const Eigen::VectorXd& z, int stage, const OcpConfig& cfg) {
  const int m = cfg.inputs_per_stage();
  InputT<S> u;
  for (int k = 0; k < kInputDim; ++k) u[k] = S(0.0);
  for (int k = 0; k < m; ++k) u[k] = S(z[stage * m + k]);
  return u;
}

double rollout_double(const RomState& x0, const Eigen::VectorXd& z,
                      const ReferencePlan& refs, const OcpConfig& cfg,
                      const RobotParams& model, const IntegratorConfig& integ,
                      const ExternalWrench* dist, std::vector<RomState>* trajectory) {
  RomState x = x0;
  if (trajectory != nullptr) {
    trajectory->clear();
    trajectory->push_back(x);
  }
  double cost = 0.0;
  for (int j = 0; j < cfg.horizon; ++j) {
    const ControlInput u = stage_input<double>(z, j, cfg);
    x = propagate<double>(x, u, model, integ, dist);
    cost += stage_cost_t<double>(x, refs.stages[j], u, cfg);
    if (trajectory != nullptr) trajectory->push_back(x);
  }
  return cost;
}

// Gradient block for the inputs of `stage`: the rollout before that stage is
// independent of them, so it starts from the cached double state. With
// `curvature` set, also accumulates the Gauss-Newton diagonal of the
// quadratic tracking and input terms.
template <int L>
void gradient_block(int stage, const RomState& x_stage, const Eigen::VectorXd& z,
                    const ReferencePlan& refs, const OcpConfig& cfg,
                    const RobotParams& model, const IntegratorConfig& integ,
                    const ExternalWrench* dist, Eigen::VectorXd& gradient,
                    Eigen::VectorXd* curvature = nullptr) {
  using Jet = ceres::Jet<double, L>;
  const int m = cfg.inputs_per_stage();
  StateT<Jet> x;
  for (int i = 0; i < kStateDim; ++i) x[i] = Jet(x_stage[i]);
  Jet cost(0.0);
  for (int j = stage; j < cfg.horizon; ++j) {
    InputT<Jet> u = stage_input<Jet>(z, j, cfg);
    if (j == stage) {
      for (int k = 0; k < m; ++k) u[k] = Jet(z[j * m + k], k);
    }
    x = propagate<Jet>(x, u, model, integ, dist);
    cost += stage_cost_t<Jet>(x, refs.stages[j], u, cfg);
    if (curvature == nullptr) continue;
    for (int i = 0; i < kStateDim; ++i) {
      const double w = cfg.q_weights[i];
      if (w == 0.0 || (i == sx::kYaw && cfg.yaw_policy == YawPolicy::kFree)) continue;
      for (int k = 0; k < m; ++k) {
        (*curvature)[stage * m + k] += 2.0 * w * x[i].v[k] * x[i].v[k];
      }
    }
  }
  for (int k = 0; k < m; ++k) gradient[stage * m + k] = cost.v[k];
  if (curvature != nullptr) {
    for (int k = 0; k < m; ++k) {
      (*curvature)[stage * m + k] += 2.0 * cfg.r_weights[k];
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// OcpConfig

void OcpConfig::validate() const {
  if (horizon < 1) throw ValidationError("ocp.horizon", "must be >= 1");
  if ((q_weights.array() < 0.0).any() || !q_weights.allFinite()) {
    throw ValidationError("ocp.q_weights", "entries must be finite and >= 0");
  }
  if ((r_weights.array() < 0.0).any() || !r_weights.allFinite()) {
    throw ValidationError("ocp.r_weights", "entries must be finite and >= 0");
  }
  if (!(r_weights.segment<4>(ux::kThrust).array() > 0.0).all()) {
    throw ValidationError("ocp.r_weights", "thrust entries must be > 0");
  }
  if (!(thrust_min >= 0.0 && thrust_max > thrust_min)) {
    throw ValidationError("ocp.thrust_bounds", "need 0 <= lower < upper");
  }
  if (!(joint_accel_max > joint_accel_min)) {
    throw ValidationError("ocp.joint_accel_bounds", "need lower < upper");
  }
  if (!(joint_max > joint_min)) {
    throw ValidationError("ocp.joint_bounds", "need lower < upper");
  }
  if (!(attitude_limit > 0.0)) {
    throw ValidationError("ocp.attitude_limit", "must be > 0");
  }
  if (attitude_soft_weight < 0.0 || joint_soft_weight < 0.0 ||
      side_sum_soft_weight < 0.0 || singular_weight < 0.0) {
    throw ValidationError("ocp.soft_weights", "must be >= 0");
  }
  if (!(disturbance_gain >= 0.0 && disturbance_gain <= 1.0)) {
    throw ValidationError("ocp.disturbance_gain", "must lie in [0, 1]");
  }
  if (solver.max_iterations < 1 || solver.memory < 1) {
    throw ValidationError("ocp.solver", "max_iterations and memory must be >= 1");
  }
}

OcpConfig OcpConfig::fault_tolerant_defaults(const RobotParams& robot,
                                             bool sagittal_only) {
  OcpConfig c;
  c.mode = ControlMode::kFaultTolerant;
  c.sagittal_only = sagittal_only;
  c.yaw_policy = sagittal_only ? YawPolicy::kFree : YawPolicy::kPenalized;
  c.thrust_min = 0.0;
  c.thrust_max = 30.0;

  auto& q = c.q_weights;
  q.segment<2>(sx::kPos).setConstant(20.0);
  q[sx::kPos + 2] = 60.0;
  q[sx::kRoll] = 150.0;
  q[sx::kPitch] = 150.0;
  q[sx::kYaw] = sagittal_only ? 0.0 : 20.0;
  q.segment<8>(sx::kJoint).setConstant(2.0);
  q.segment<2>(sx::kVel).setConstant(8.0);
  q[sx::kVel + 2] = 15.0;
  q.segment<2>(sx::kOmega).setConstant(5.0);
  q[sx::kOmega + 2] = sagittal_only ? 0.0 : 5.0;
  q.segment<8>(sx::kJointRate).setConstant(0.05);

  c.r_weights.segment<4>(ux::kThrust).setConstant(0.02);
  c.r_weights.segment<8>(ux::kSagAccel).setConstant(2e-4);
  c.input_reference = hover_input(robot);

  c.disturbance_gain = 0.5;

  if (sagittal_only) c.side_sum_limit = 110.0 * std::numbers::pi / 180.0;
  return c;
}

OcpConfig OcpConfig::agile_defaults(const RobotParams& robot) {
  OcpConfig c;
  c.mode = ControlMode::kAgile;
  c.sagittal_only = false;
  c.yaw_policy = YawPolicy::kPenalized;
  c.thrust_min = 0.0;
  c.thrust_max = 50.0;

  auto& q = c.q_weights;
  q.segment<3>(sx::kPos).setConstant(40.0);
  q[sx::kRoll] = 20.0;
  q[sx::kPitch] = 20.0;
  q[sx::kYaw] = 20.0;
  q.segment<8>(sx::kJoint).setConstant(0.5);
  q.segment<3>(sx::kVel).setConstant(15.0);
  q.segment<3>(sx::kOmega).setConstant(1.0);
  q.segment<8>(sx::kJointRate).setConstant(0.01);

  c.r_weights.segment<4>(ux::kThrust).setConstant(0.005);
  c.r_weights.segment<8>(ux::kSagAccel).setConstant(5e-5);
  c.input_reference = hover_input(robot);
  return c;
}

ReferencePlan ReferencePlan::constant(const RomState& goal, int horizon) {
  ReferencePlan plan;
  plan.goal = goal;
  plan.stages.assign(static_cast<std::size_t>(horizon), goal);
  return plan;
}

// ---------------------------------------------------------------------------
// Free functions

double stage_cost(const RomState& x, const RomState& x_ref, const ControlInput& u,
                  const OcpConfig& cfg) {
  return stage_cost_t<double>(x, x_ref, u, cfg);
}

double stage_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& x_ref,
                  const Eigen::VectorXd& u, const OcpConfig& cfg) {
  if (x.size() != kStateDim || x_ref.size() != kStateDim) {
    throw DimensionMismatch("state vectors must have 28 entries");
  }
  if (u.size() != kInputDim) {
    throw DimensionMismatch("input vector must have 12 entries");
  }
  return stage_cost(RomState(x), RomState(x_ref), ControlInput(u), cfg);
}

RolloutResult rollout_cost(const RomState& x0, const std::vector<ControlInput>& inputs,
                           const ReferencePlan& refs, const OcpConfig& cfg,
                           const RobotParams& model, const IntegratorConfig& integ) {
  if (static_cast<int>(inputs.size()) != cfg.horizon) {
    throw DimensionMismatch("input sequence length must equal the horizon");
  }
  if (static_cast<int>(refs.stages.size()) != cfg.horizon) {
    throw DimensionMismatch("reference plan length must equal the horizon");
  }
  RolloutResult r;
  RomState x = x0;
  r.trajectory.push_back(x);
  for (int j = 0; j < cfg.horizon; ++j) {
    ControlInput u = inputs[j];
    if (cfg.sagittal_only) u.segment<4>(ux::kFrontAccel).setZero();
    x = propagate<double>(x, u, model, integ, nullptr);
    r.cost += stage_cost_t<double>(x, refs.stages[j], u, cfg);
    r.trajectory.push_back(x);
  }
  return r;
}

std::vector<ControlInput> warm_start_shift(const SolveResult& prev) {
  std::vector<ControlInput> out;
  if (prev.inputs.empty()) return out;
  out.assign(prev.inputs.begin() + 1, prev.inputs.end());
  out.push_back(prev.inputs.back());
  return out;
}

ReferencePlan collocate_reference(const RomState& x_now, const RomState& goal,
                                  int horizon, double speed_limit,
                                  double control_period) {
  ReferencePlan plan;
  plan.goal = goal;
  const Eigen::Vector3d start = x_now.segment<3>(sx::kPos);
  const Eigen::Vector3d delta = goal.segment<3>(sx::kPos) - start;
  const double dist = delta.norm();
  const double advance = std::max(0.0, speed_limit) * control_period;

  Eigen::Vector3d att_delta;
  for (int k = 0; k < 3; ++k) {
    att_delta[k] = wrap_angle(goal[sx::kAtt + k] - x_now[sx::kAtt + k]);
  }

  Eigen::Vector3d previous = start;
  for (int j = 0; j < horizon; ++j) {
    const double along = std::min(dist, (j + 1) * advance);
    const double fraction = dist > 0.0 ? along / dist : 1.0;
    RomState ref = goal;
    const Eigen::Vector3d pos =
        dist > 0.0 ? Eigen::Vector3d(start + delta * fraction) : start;
    ref.segment<3>(sx::kPos) = pos;
    ref.segment<3>(sx::kVel) = (pos - previous) / control_period;
    for (int k = 0; k < 3; ++k) {
      ref[sx::kAtt + k] =
          wrap_angle(x_now[sx::kAtt + k] + fraction * att_delta[k]);
    }
    plan.stages.push_back(ref);
    previous = pos;
  }
  return plan;
}

// ---------------------------------------------------------------------------
// NmpcSolver

NmpcSolver::NmpcSolver(OcpConfig cfg, RobotParams model, IntegratorConfig integ)
    : cfg_(std::move(cfg)), model_(std::move(model)), integ_(integ) {
  cfg_.validate();
  model_.validate();
  integ_.validate();
}

Eigen::VectorXd NmpcSolver::pack(const std::vector<ControlInput>& inputs) const {
  if (static_cast<int>(inputs.size()) != cfg_.horizon) {
    throw DimensionMismatch("input sequence length must equal the horizon");
  }
  const int m = cfg_.inputs_per_stage();
  Eigen::VectorXd z(cfg_.decision_size());
  for (int j = 0; j < cfg_.horizon; ++j) z.segment(j * m, m) = inputs[j].head(m);
  return z;
}

std::vector<ControlInput> NmpcSolver::unpack(const Eigen::VectorXd& z) const {
  if (z.size() != cfg_.decision_size()) {
    throw DimensionMismatch("decision vector has the wrong size");
  }
  std::vector<ControlInput> out;
  for (int j = 0; j < cfg_.horizon; ++j) out.push_back(stage_input<double>(z, j, cfg_));
  return out;
}

Eigen::VectorXd NmpcSolver::lower_bounds() const {
  const int m = cfg_.inputs_per_stage();
  Eigen::VectorXd lo(cfg_.decision_size());
  for (int j = 0; j < cfg_.horizon; ++j) {
    lo.segment(j * m, 4).setConstant(cfg_.thrust_min);
    lo.segment(j * m + 4, m - 4).setConstant(cfg_.joint_accel_min);
  }
  return lo;
}

Eigen::VectorXd NmpcSolver::upper_bounds() const {
  const int m = cfg_.inputs_per_stage();
  Eigen::VectorXd hi(cfg_.decision_size());
  for (int j = 0; j < cfg_.horizon; ++j) {
    hi.segment(j * m, 4).setConstant(cfg_.thrust_max);
    hi.segment(j * m + 4, m - 4).setConstant(cfg_.joint_accel_max);
  }
  return hi;
}

void NmpcSolver::check_refs(const ReferencePlan& refs) const {
  if (static_cast<int>(refs.stages.size()) != cfg_.horizon) {
    throw DimensionMismatch("reference plan length must equal the horizon");
  }
}

double NmpcSolver::objective(const RomState& x0, const ReferencePlan& refs,
                             const Eigen::VectorXd& z) const {
  check_refs(refs);
  return rollout_double(x0, z, refs, cfg_, model_, integ_, &disturbance_, nullptr);
}

double NmpcSolver::objective_and_gradient(const RomState& x0,
                                          const ReferencePlan& refs,
                                          const Eigen::VectorXd& z,
                                          Eigen::VectorXd& gradient,
                                          Eigen::VectorXd* curvature) const {
  check_refs(refs);
  std::vector<RomState> traj;
  const double cost = rollout_double(x0, z, refs, cfg_, model_, integ_, &disturbance_, &traj);
  gradient.resize(cfg_.decision_size());
  if (curvature != nullptr) curvature->setZero(cfg_.decision_size());
  for (int stage = 0; stage < cfg_.horizon; ++stage) {
    if (cfg_.sagittal_only) {
      gradient_block<8>(stage, traj[stage], z, refs, cfg_, model_, integ_, &disturbance_,
                        gradient, curvature);
    } else {
      gradient_block<12>(stage, traj[stage], z, refs, cfg_, model_, integ_, &disturbance_,
                        gradient, curvature);
    }
  }
  return cost;
}

SolveResult NmpcSolver::solve(
    const RomState& x0, const ReferencePlan& refs,
    const std::optional<std::vector<ControlInput>>& warm_start) {
  check_refs(refs);
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<ControlInput> init =
      warm_start.value_or(std::vector<ControlInput>(cfg_.horizon, hover_input(model_)));
  // Jacobi preconditioning: the minimizer works on w = z / scale with the
  // scale taken from the Gauss-Newton diagonal at the initial guess.
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(cfg_.decision_size());
  if (cfg_.precondition) {
    Eigen::VectorXd g, curvature;
    objective_and_gradient(x0, refs, pack(init), g, &curvature);
    const double floor = 1e-6 * std::max(1e-12, curvature.maxCoeff());
    scale = curvature.cwiseMax(floor).cwiseSqrt().cwiseInverse();
  }
  const Eigen::VectorXd w0 = pack(init).cwiseQuotient(scale);

  auto value = [&](const Eigen::VectorXd& w) {
    return objective(x0, refs, w.cwiseProduct(scale));
  };
  auto value_grad = [&](const Eigen::VectorXd& w, Eigen::VectorXd& g) {
    const double f = objective_and_gradient(x0, refs, w.cwiseProduct(scale), g);
    g = g.cwiseProduct(scale);
    return f;
  };
  BoxMinimizerResult opt =
      minimize_box(value, value_grad, w0, lower_bounds().cwiseQuotient(scale),
                   upper_bounds().cwiseQuotient(scale), cfg_.solver);
  // unscaling can push an active bound out by an ulp
  opt.x = opt.x.cwiseProduct(scale).cwiseMax(lower_bounds()).cwiseMin(upper_bounds());

  SolveResult result;
  result.inputs = unpack(opt.x);
  result.cost = rollout_double(x0, opt.x, refs, cfg_, model_, integ_, &disturbance_,
                               &result.trajectory);
  result.iterations = opt.iterations;
  result.converged = opt.converged;
  result.termination = opt.termination;
  if (!std::isfinite(result.cost)) {
    throw NonFiniteCost("OCP cost is not finite after the solve");
  }
  result.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

RomState NmpcSolver::predict(const RomState& x, const ControlInput& u) const {
  return propagate<double>(x, u, model_, integ_, &disturbance_);
}

SolveResult NmpcSolver::step(const RomState& x0, const ReferencePlan& refs) {
  std::optional<std::vector<ControlInput>> warm;
  if (previous_) warm = warm_start_shift(*previous_);
  SolveResult result = solve(x0, refs, warm);
  previous_ = result;
  return result;
}

}  // namespace morpho
