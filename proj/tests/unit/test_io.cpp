#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "morpho/cli.hpp"
#include "morpho/errors.hpp"
#include "morpho/log_io.hpp"
#include "morpho/plot_script.hpp"
#include "morpho/scenario_io.hpp"
#include "morpho/scenarios.hpp"

using namespace morpho;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("morpho_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

int count_lines(const std::string& text, bool skip_comments) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (skip_comments && !line.empty() && line[0] == '#') continue;
    ++n;
  }
  return n;
}

SimLog small_log(int rows) {
  SimLog log;
  for (int i = 0; i < rows; ++i) {
    LogRow r;
    r.time = 0.1 * i;
    r.state = hover_state(Eigen::Vector3d(0.1 * i, 1.0 / 3.0, 5.0));
    r.thrust_commanded.setConstant(14.715);
    r.thrust_actual = r.thrust_commanded;
    r.cost = 1e-7 * i;
    r.iterations = 12 + i;
    r.converged = true;
    r.tracking_error = 0.25 * i;
    r.waypoint_index = i;
    log.rows.push_back(r);
  }
  return log;
}

// A random but valid scenario document touching every section.
std::string random_document(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  auto coin = [&] { return u(rng) < 0.5; };
  std::ostringstream d;
  d.precision(17);
  const bool agile = coin();
  const bool sag = !agile && coin();
  d << "scenario:\n";
  d << "  name: rt" << static_cast<int>(pick(0, 1000)) << "\n";
  d << "  mode: " << (agile ? "agile" : "fault_tolerant") << "\n";
  d << "  actuation: " << (sag ? "sagittal_only" : "full") << "\n";
  d << "  duration: " << pick(0.5, 30) << "\n";
  if (coin()) d << "  seed: " << static_cast<int>(pick(0, 1e6)) << "\n";
  if (coin()) d << "  reference_speed: " << pick(0, 15) << "\n";
  if (coin()) d << "  contact_enabled: " << (coin() ? "true" : "false") << "\n";
  d << "  initial_state:\n";
  d << "    position: [" << pick(-5, 5) << ", " << pick(-5, 5) << ", " << pick(0, 10) << "]\n";
  d << "    attitude_deg: [" << pick(-30, 30) << ", " << pick(-30, 30) << ", "
    << pick(-180, 180) << "]\n";
  if (coin()) {
    d << "    sagittal_deg: [" << pick(0, 90) << ", " << pick(0, 90) << ", " << pick(0, 90)
      << ", " << pick(0, 90) << "]\n";
  }
  if (coin()) d << "    angular_velocity_deg: [" << pick(-90, 90) << ", 0, " << pick(-90, 90) << "]\n";
  d << "  waypoints:\n";
  const int n = 1 + static_cast<int>(pick(0, 3.99));
  for (int i = 0; i < n; ++i) {
    d << "    - {position: [" << pick(-5, 5) << ", " << pick(-5, 5) << ", " << pick(0, 8)
      << "], yaw_deg: " << pick(-180, 180) << ", hold: " << pick(0, 2) << "}\n";
  }
  if (coin()) {
    d << "  plant_perturbation: {inertia: " << pick(-0.5, 0.5) << ", drag_gamma: "
      << pick(-0.5, 0.5) << "}\n";
  }
  if (coin()) {
    d << "robot:\n  body_mass: " << pick(3, 6) << "\n  inertia: [" << pick(0.2, 0.5) << ", "
      << pick(0.2, 0.5) << ", " << pick(0.5, 0.9) << "]\n  drag_gamma: " << pick(0.1, 0.5)
      << "\n";
  }
  if (coin()) d << "integrator:\n  prediction_substeps: " << 1 + static_cast<int>(pick(0, 9)) << "\n";
  d << "ocp:\n";
  d << "  horizon: " << 1 + static_cast<int>(pick(0, 8)) << "\n";
  d << "  thrust_bounds: [0, " << pick(20, 60) << "]\n";
  if (coin()) d << "  attitude_limit_deg: " << pick(30, 90) << "\n";
  if (coin()) d << "  joint_bounds_deg: [" << pick(0, 10) << ", " << pick(80, 90) << "]\n";
  if (coin()) d << "  side_sum_limit_deg: " << pick(90, 130) << "\n";
  if (coin()) d << "  q_weights: {position: [1, 2, " << pick(0, 100) << "], attitude: [3, 4, 5]}\n";
  if (coin()) d << "  r_weights: {thrust: [0.1, 0.2, 0.3, " << pick(0.01, 1) << "]}\n";
  if (coin()) d << "  disturbance_gain: " << pick(0, 1) << "\n";
  if (coin()) d << "  precondition: false\n";
  if (coin()) d << "  solver: {max_iterations: 50, gradient_tolerance: " << pick(1e-6, 1e-3) << "}\n";
  d << "faults:\n  mode: " << (coin() ? "scale" : "cap") << "\n  events:\n";
  double t = 0.0;
  for (int i = 0; i < 3; ++i) {
    t += pick(0.1, 5);
    d << "    - {rotor: " << 1 + static_cast<int>(pick(0, 3.99)) << ", time: " << t
      << ", effectiveness: " << pick(0, 1) << "}\n";
  }
  if (coin()) {
    const double a = pick(1, 4);
    d << "  randomized: {rotor: 2, earliest: " << a << ", latest: " << a + pick(0, 1) << "}\n";
  }
  if (coin()) d << "contact:\n  stiffness: " << pick(1e3, 1e5) << "\n  mu_static: 0.8\n";
  return d.str();
}

}  // namespace

// ------------------------------------------------------------ scenario files

TEST(ScenarioIo, EmptyDocumentGivesDefaults) {
  const Scenario s = parse_scenario("");
  EXPECT_EQ(s.mode, ControlMode::kFaultTolerant);
  EXPECT_EQ(s.ocp.thrust_max, 30.0);
  EXPECT_TRUE(s.faults.empty());
  EXPECT_FALSE(s.randomized_fault.has_value());
  EXPECT_EQ(s, default_scenario());
}

TEST(ScenarioIo, NegativeThrustBoundIsValidationError) {
  try {
    parse_scenario("ocp:\n  thrust_bounds: [0, -1]\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "ocp.thrust_bounds");
  }
}

TEST(ScenarioIo, UnknownKeyReportsLineAndField) {
  try {
    parse_scenario("scenario:\n  duration: 3\n  durration: 4\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "scenario.durration");
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_scenario("bogus: 1\n"), ParseError);
  EXPECT_THROW(parse_scenario("ocp:\n  solver: {memroy: 3}\n"), ParseError);
}

TEST(ScenarioIo, TypeAndSyntaxErrors) {
  EXPECT_THROW(parse_scenario("scenario:\n  duration: soon\n"), ParseError);
  EXPECT_THROW(parse_scenario("scenario: [1, 2\n"), ParseError);
  EXPECT_THROW(parse_scenario("ocp:\n  horizon: 2.5\n"), ParseError);
  EXPECT_THROW(parse_scenario("scenario:\n  mode: turbo\n"), ParseError);
  EXPECT_THROW(parse_scenario("faults:\n  events:\n    - {rotor: 5, time: 1}\n"), ParseError);
  EXPECT_THROW(parse_scenario("- 1\n- 2\n"), ParseError);
}

TEST(ScenarioIo, AnglesAreDegrees) {
  const Scenario s = parse_scenario(
      "scenario:\n  initial_state:\n    position: [0, 0, 2]\n    attitude_deg: [10, 0, 90]\n"
      "  waypoints:\n    - {position: [1, 0, 2], yaw_deg: 180}\n");
  EXPECT_NEAR(s.initial_state[sx::kRoll], std::numbers::pi / 18.0, 1e-15);
  EXPECT_NEAR(s.initial_state[sx::kYaw], std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(s.waypoints[0].yaw, std::numbers::pi, 1e-15);
}

TEST(ScenarioIo, ModeSelectsControllerDefaults) {
  const Scenario a = parse_scenario("scenario:\n  mode: agile\n");
  EXPECT_EQ(a.ocp.thrust_max, 50.0);
  const Scenario s = parse_scenario("scenario:\n  actuation: sagittal_only\n");
  EXPECT_EQ(s.ocp.yaw_policy, YawPolicy::kFree);
  EXPECT_TRUE(s.ocp.sagittal_only);
}

TEST(ScenarioIo, RoundTripRandomDocuments) {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 100; ++k) {
    const std::string doc = random_document(rng);
    Scenario first;
    ASSERT_NO_THROW(first = parse_scenario(doc)) << doc;
    const std::string text = serialize_scenario(first);
    const Scenario second = parse_scenario(text);
    EXPECT_EQ(first, second) << doc << "\n---\n" << text;
    EXPECT_EQ(text, serialize_scenario(second));
  }
}

TEST(ScenarioIo, BuiltinsSurviveSerialization) {
  for (const Scenario& s : builtin_scenarios()) {
    const Scenario back = parse_scenario(serialize_scenario(s));
    EXPECT_EQ(serialize_scenario(back), serialize_scenario(s)) << s.name;
    EXPECT_EQ(back.faults, s.faults) << s.name;
    EXPECT_EQ(back.randomized_fault, s.randomized_fault) << s.name;
  }
}

TEST(ScenarioIo, MissingFileIsParseError) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.yaml"), ParseError);
}

// ------------------------------------------------------------ CSV

TEST(LogIo, TwoRowLogHasHeaderAndTwoRows) {
  std::ostringstream out;
  write_csv(small_log(2), out);
  EXPECT_EQ(count_lines(out.str(), true), 3);
  EXPECT_EQ(out.str().rfind(kLogVersionLine, 0), 0u);
}

TEST(LogIo, EmptyLogIsHeaderOnly) {
  std::ostringstream out;
  write_csv(SimLog{}, out);
  EXPECT_EQ(count_lines(out.str(), true), 1);
}

TEST(LogIo, FixedColumnsAndPrecision) {
  const auto& cols = log_columns();
  EXPECT_EQ(cols.front(), "time");
  EXPECT_EQ(cols.size(), 1u + 28 + 4 + 4 + 8 + 28 + 4 + 5 + 6);
  std::ostringstream out;
  write_csv(small_log(2), out);
  EXPECT_NE(out.str().find(",0.333333333,"), std::string::npos);
}

TEST(LogIo, ReadBack) {
  const fs::path dir = scratch_dir("readback");
  const SimLog log = small_log(5);
  write_csv(log, dir / "a.csv");
  const SimLog back = read_csv(dir / "a.csv");
  ASSERT_EQ(back.rows.size(), 5u);
  EXPECT_NEAR(back.control_period, 0.1, 1e-12);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_TRUE(back.rows[i].state.isApprox(log.rows[i].state, 1e-8));
    EXPECT_EQ(back.rows[i].iterations, log.rows[i].iterations);
    EXPECT_EQ(back.rows[i].waypoint_index, log.rows[i].waypoint_index);
  }
}

TEST(LogIo, Errors) {
  EXPECT_THROW(write_csv(small_log(1), fs::path("/nonexistent/dir/x.csv")), IoError);
  EXPECT_THROW(read_csv("/nonexistent/x.csv"), IoError);
  const fs::path dir = scratch_dir("badcsv");
  write_file(dir / "bad.csv", "time,x\n0,1\n");
  EXPECT_THROW(read_csv(dir / "bad.csv"), IoError);
}

// ------------------------------------------------------------ plot script

TEST(PlotScript, SingleLog) {
  const fs::path dir = scratch_dir("plot1");
  write_csv(small_log(3), dir / "one.csv");
  emit_plot_script({dir / "one.csv"}, dir / "plot.gp");
  const std::string s = slurp(dir / "plot.gp");
  EXPECT_NE(s.find((dir / "one.csv").generic_string()), std::string::npos);
  EXPECT_EQ(s.find("trajectories"), std::string::npos);
  EXPECT_EQ(count_lines(s, false) > 10, true);
  EXPECT_NE(s.find("layout 2,2"), std::string::npos);
}

TEST(PlotScript, OverlaysSeveralLogs) {
  const fs::path dir = scratch_dir("plot4");
  std::vector<fs::path> logs;
  for (int a : {30, 60, 90, 120}) {
    logs.push_back(dir / ("agile-turn-" + std::to_string(a) + ".csv"));
    write_csv(small_log(3), logs.back());
  }
  emit_plot_script(logs, dir / "all.gp");
  const std::string s = slurp(dir / "all.gp");
  const auto overlay = s.find("# overlaid trajectories");
  ASSERT_NE(overlay, std::string::npos);
  for (const auto& p : logs) {
    EXPECT_NE(s.find(p.generic_string(), overlay), std::string::npos) << p;
  }
}

TEST(PlotScript, MissingLogNamesPath) {
  const fs::path dir = scratch_dir("plotmissing");
  try {
    emit_plot_script({dir / "absent.csv"}, dir / "p.gp");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("absent.csv"), std::string::npos);
  }
}

// ------------------------------------------------------------ CLI

TEST(Cli, ListPrintsEightNames) {
  std::ostringstream out, err;
  EXPECT_EQ(cli_main({"list"}, out, err), kExitOk);
  EXPECT_EQ(count_lines(out.str(), false), 8);
}

TEST(Cli, MissingScenarioFile) {
  std::ostringstream out, err;
  EXPECT_EQ(cli_main({"run", "missing.cfg"}, out, err), kExitInvalid);
  EXPECT_NE(err.str().find("parse error"), std::string::npos);
}

TEST(Cli, InvalidScenarioAndArguments) {
  const fs::path dir = scratch_dir("cli_invalid");
  write_file(dir / "bad.yaml", "ocp:\n  thrust_bounds: [0, -1]\n");
  std::ostringstream out, err;
  EXPECT_EQ(cli_main({"run", (dir / "bad.yaml").string()}, out, err), kExitInvalid);
  EXPECT_NE(err.str().find("thrust_bounds"), std::string::npos);
  EXPECT_EQ(cli_main({"builtin", "nope"}, out, err), kExitInvalid);
  EXPECT_EQ(cli_main({"frobnicate"}, out, err), kExitInvalid);
  EXPECT_EQ(cli_main({}, out, err), kExitInvalid);
}

TEST(Cli, RunWritesLogWithoutTouchingInput) {
  const fs::path dir = scratch_dir("cli_run");
  const std::string doc = "scenario:\n  name: tiny\n  duration: 0.5\n";
  write_file(dir / "tiny.yaml", doc);
  std::ostringstream out, err;
  ASSERT_EQ(cli_main({"run", (dir / "tiny.yaml").string(), "--out", (dir / "o").string()},
                     out, err),
            kExitOk)
      << err.str();
  EXPECT_EQ(slurp(dir / "tiny.yaml"), doc);
  EXPECT_EQ(count_lines(slurp(dir / "o" / "tiny.csv"), true), 1 + 6);
  EXPECT_TRUE(fs::exists(dir / "o" / "tiny.gp"));

  std::ostringstream mout;
  EXPECT_EQ(cli_main({"metrics", (dir / "o" / "tiny.csv").string()}, mout, err), kExitOk);
  EXPECT_NE(mout.str().find("rms_tracking_error_m"), std::string::npos);
}

TEST(Cli, CheckPasses) {
  std::ostringstream out, err;
  EXPECT_EQ(cli_main({"check"}, out, err), kExitOk) << out.str();
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
}

TEST(Cli, BuiltinStageTwoHoverEndToEnd) {
  const fs::path dir = scratch_dir("cli_builtin");
  std::ostringstream out, err;
  ASSERT_EQ(cli_main({"builtin", "stage2-hover", "--out", (dir / "d").string()}, out, err),
            kExitOk)
      << err.str();
  EXPECT_EQ(count_lines(slurp(dir / "d" / "stage2-hover.csv"), true), 1 + 151);
  const std::string script = slurp(dir / "d" / "stage2-hover.gp");
  EXPECT_NE(script.find("stage2-hover.csv"), std::string::npos);
}
