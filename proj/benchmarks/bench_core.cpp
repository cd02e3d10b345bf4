#include <benchmark/benchmark.h>

#include "morpho/contact.hpp"
#include "morpho/dynamics.hpp"
#include "morpho/harness.hpp"
#include "morpho/integrator.hpp"
#include "morpho/nmpc.hpp"

using namespace morpho;

namespace {

RomState perturbed_hover() {
  RomState x = hover_state(Eigen::Vector3d(0.2, -0.1, 4.8), 0.3);
  x[sx::kRoll] = 0.1;
  x[sx::kSag + 1] = 0.3;
  x.segment<3>(sx::kOmega) = Eigen::Vector3d(0.2, -0.1, 0.5);
  return x;
}

void BM_RomDerivative(benchmark::State& state) {
  const RobotParams p;
  const RomState x = perturbed_hover();
  const ControlInput u = hover_input(p);
  for (auto _ : state) benchmark::DoNotOptimize(rom_derivative(x, u, p));
}
BENCHMARK(BM_RomDerivative);

void BM_PlantControlPeriod(benchmark::State& state) {
  const RobotParams p;
  const ContactParams c;
  IntegratorConfig integ;
  integ.plant_step = state.range(0) == 0 ? 1e-4 : 1e-3;
  const RomState x = perturbed_hover();
  const ControlInput u = hover_input(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(advance_plant(x, u, 0.0, FaultSchedule{}, p, integ, &c));
  }
}
BENCHMARK(BM_PlantControlPeriod)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ObjectiveGradient(benchmark::State& state) {
  const RobotParams p;
  const OcpConfig cfg = state.range(0) == 0 ? OcpConfig::fault_tolerant_defaults(p, false)
                                            : OcpConfig::agile_defaults(p);
  NmpcSolver s(cfg, p, IntegratorConfig{});
  const RomState x0 = perturbed_hover();
  const ReferencePlan refs =
      ReferencePlan::constant(hover_state(Eigen::Vector3d(0, 0, 5)), cfg.horizon);
  const Eigen::VectorXd z = s.pack(std::vector<ControlInput>(cfg.horizon, hover_input(p)));
  Eigen::VectorXd g;
  for (auto _ : state) benchmark::DoNotOptimize(s.objective_and_gradient(x0, refs, z, g));
}
BENCHMARK(BM_ObjectiveGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_SolveColdStart(benchmark::State& state) {
  const RobotParams p;
  const OcpConfig cfg = OcpConfig::fault_tolerant_defaults(p, false);
  NmpcSolver s(cfg, p, IntegratorConfig{});
  const RomState x0 = perturbed_hover();
  const ReferencePlan refs =
      ReferencePlan::constant(hover_state(Eigen::Vector3d(0, 0, 5)), cfg.horizon);
  for (auto _ : state) benchmark::DoNotOptimize(s.solve(x0, refs, std::nullopt));
}
BENCHMARK(BM_SolveColdStart)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
