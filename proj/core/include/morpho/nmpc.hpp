#pragma once

// Receding-horizon controller over the reduced-order model.
//
// The OCP is single-shooting: the decision vector stacks the inputs of all
// horizon stages, states come from RK4 rollouts of the prediction model, and
// the resulting box-constrained problem is minimized with a projected L-BFGS
// method. Gradients are exact, obtained by forward-mode differentiation of
// the rollout one stage block at a time.
//
// Stage j pairs input u_j with the state it produces, x_{j+1} = Phi(x_j, u_j),
// and with the reference refs.stages[j].

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "morpho/dynamics.hpp"
#include "morpho/integrator.hpp"
#include "morpho/optimizer.hpp"
#include "morpho/robot_params.hpp"
#include "morpho/state.hpp"

namespace morpho {

enum class ControlMode { kFaultTolerant, kAgile };
enum class YawPolicy { kFree, kPenalized };

struct OcpConfig {
  int horizon = 5;
  ControlMode mode = ControlMode::kFaultTolerant;
  YawPolicy yaw_policy = YawPolicy::kPenalized;
  /// Frontal joints frozen: their accelerations leave the decision vector.
  bool sagittal_only = false;

  /// Diagonal state weights.
  StateT<double> q_weights = StateT<double>::Zero();
  /// Diagonal input weights, applied to (u - input_reference).
  InputT<double> r_weights = InputT<double>::Zero();
  InputT<double> input_reference = InputT<double>::Zero();

  double thrust_min = 0.0;   ///< N
  double thrust_max = 30.0;  ///< N
  double joint_accel_min = -50.0;
  double joint_accel_max = 50.0;

  // Soft state bounds: quadratic hinge penalties on the violation.
  double attitude_limit = 1.5707963267948966;  ///< |roll|, |pitch|, rad
  double joint_min = 0.0;                      ///< rad
  double joint_max = 1.5707963267948966;       ///< rad
  /// Cap on q_sag(front) + q_sag(rear) per side, rad; <= 0 disables.
  double side_sum_limit = 0.0;
  double attitude_soft_weight = 1e3;
  double joint_soft_weight = 1e3;
  double side_sum_soft_weight = 1e3;
  /// Penalty weight for pitch inside the Euler-rate singular margin.
  double singular_weight = 1e6;

  /// Blend factor of the state-only wrench disturbance estimate per tick;
  /// 0 disables it.
  double disturbance_gain = 0.0;

  /// Rescale the decision variables by the Gauss-Newton diagonal before
  /// minimizing.
  bool precondition = true;
  BoxMinimizerOptions solver;

  int inputs_per_stage() const { return sagittal_only ? 8 : 12; }
  int decision_size() const { return horizon * inputs_per_stage(); }

  void validate() const;

  /// Attitude-first regulation with rotor capacity [0, 30] N. Sagittal-only
  /// leaves yaw free and caps each side's sagittal sum at 110 deg.
  static OcpConfig fault_tolerant_defaults(const RobotParams& robot,
                                           bool sagittal_only);
  /// Position/velocity-first tracking with rotor capacity [0, 50] N.
  static OcpConfig agile_defaults(const RobotParams& robot);

  bool operator==(const OcpConfig&) const = default;
};

/// Per-stage reference states for one solve.
struct ReferencePlan {
  std::vector<RomState> stages;
  RomState goal = RomState::Zero();

  /// All stages equal to `goal`.
  static ReferencePlan constant(const RomState& goal, int horizon);
};

struct SolveResult {
  std::vector<ControlInput> inputs;
  /// x_0 .. x_{N_h}.
  std::vector<RomState> trajectory;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  Termination termination = Termination::kIterationLimit;
  double solve_time = 0.0;  ///< wall clock, s
};

/// Quadratic tracking + input cost of one stage, with soft-bound penalties.
/// Attitude errors are wrapped to (-pi, pi]; the yaw term vanishes when the
/// yaw policy is free.
double stage_cost(const RomState& x, const RomState& x_ref, const ControlInput& u,
                  const OcpConfig& cfg);
/// Dynamic-size variant; throws DimensionMismatch on wrong sizes.
double stage_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& x_ref,
                  const Eigen::VectorXd& u, const OcpConfig& cfg);

struct RolloutResult {
  double cost = 0.0;
  std::vector<RomState> trajectory;
};

/// Single-shooting forward simulation through the prediction model and the
/// summed stage costs.
RolloutResult rollout_cost(const RomState& x0, const std::vector<ControlInput>& inputs,
                           const ReferencePlan& refs, const OcpConfig& cfg,
                           const RobotParams& model, const IntegratorConfig& integ);

/// Drops u_0, shifts left and repeats the last input.
std::vector<ControlInput> warm_start_shift(const SolveResult& prev);

/// Speed-limited straight-line references from the current position toward
/// the goal. Stage j sits (j+1) * speed_limit * control_period along the line
/// (clamped at the goal) with the matching finite-difference velocity;
/// attitudes are interpolated by the same fraction, yaw the short way round.
ReferencePlan collocate_reference(const RomState& x_now, const RomState& goal,
                                  int horizon, double speed_limit,
                                  double control_period);

/// One controller instance: OCP data plus the warm start carried between
/// control ticks. Not thread-safe; use one instance per simulation.
///
/// The interface takes only the measured state and references. Actuator
/// health is deliberately not an input.
class NmpcSolver {
 public:
  NmpcSolver(OcpConfig cfg, RobotParams model, IntegratorConfig integ);

  const OcpConfig& config() const { return cfg_; }
  const RobotParams& model() const { return model_; }

  /// Solves from an explicit warm start (hover input when absent).
  SolveResult solve(const RomState& x0, const ReferencePlan& refs,
                    const std::optional<std::vector<ControlInput>>& warm_start);

  /// Solves from the shifted previous solution and remembers the result.
  SolveResult step(const RomState& x0, const ReferencePlan& refs);
  void reset() {
    previous_.reset();
    disturbance_ = ExternalWrench{};
  }

  /// Constant wrench added to the prediction model.
  void set_model_disturbance(const ExternalWrench& w) { disturbance_ = w; }
  const ExternalWrench& model_disturbance() const { return disturbance_; }

  /// One control period of the prediction model, disturbance included.
  RomState predict(const RomState& x, const ControlInput& u) const;

  /// Decision-vector view of an input sequence and back.
  Eigen::VectorXd pack(const std::vector<ControlInput>& inputs) const;
  std::vector<ControlInput> unpack(const Eigen::VectorXd& z) const;
  Eigen::VectorXd lower_bounds() const;
  Eigen::VectorXd upper_bounds() const;

  /// OCP objective over the decision vector.
  double objective(const RomState& x0, const ReferencePlan& refs,
                   const Eigen::VectorXd& z) const;
  /// Objective and its exact gradient; optionally the Gauss-Newton diagonal
  /// of the quadratic terms.
  double objective_and_gradient(const RomState& x0, const ReferencePlan& refs,
                                const Eigen::VectorXd& z, Eigen::VectorXd& gradient,
                                Eigen::VectorXd* curvature = nullptr) const;

 private:
  void check_refs(const ReferencePlan& refs) const;

  OcpConfig cfg_;
  RobotParams model_;
  IntegratorConfig integ_;
  std::optional<SolveResult> previous_;
  ExternalWrench disturbance_;
};

}  // namespace morpho
