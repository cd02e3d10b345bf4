#include "morpho/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "morpho/errors.hpp"
#include "morpho/harness.hpp"
#include "morpho/log_io.hpp"
#include "morpho/metrics.hpp"
#include "morpho/plot_script.hpp"
#include "morpho/scenario_io.hpp"
#include "morpho/scenarios.hpp"
#include "morpho/self_check.hpp"

namespace morpho {

namespace fs = std::filesystem;

namespace {

constexpr double kFastPlantStep = 1e-3;

std::string num(double v, const char* f = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

int simulate(Scenario scenario, const fs::path& dir, bool fast, std::ostream& out,
             std::ostream& err) {
  if (fast) {
    scenario.integrator.plant_step = kFastPlantStep;
    scenario.validate();
  }
  const SimLog log = run_closed_loop(scenario);
  fs::create_directories(dir);
  const fs::path csv = dir / (scenario.name + ".csv");
  const fs::path script = dir / (scenario.name + ".gp");
  write_csv(log, csv);
  emit_plot_script({csv}, script);
  out << "wrote " << csv.string() << " (" << log.rows.size() << " rows) and "
      << script.string() << '\n';
  if (log.failed) {
    err << "run terminated early: " << log.failure << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

void print_metrics(const Metrics& m, std::ostream& out) {
  auto line = [&](const std::string& key, const std::string& value) {
    out << key << std::string(key.size() < 26 ? 26 - key.size() : 1, ' ') << value << '\n';
  };
  line("rms_tracking_error_m", num(m.rms_tracking_error));
  line("peak_tracking_error_m", num(m.peak_tracking_error));
  line("terminal_yaw_rate_deg_s", num(m.terminal_yaw_rate));
  line("yaw_rate_settling_time_s", num(m.yaw_rate_settling_time));
  line("peak_yaw_rate_deg_s", num(m.peak_yaw_rate));
  line("peak_turn_rate_deg_s", num(m.peak_turn_rate));
  line("min_turn_speed_m_s", m.min_turn_speed ? num(*m.min_turn_speed) : "n/a");
  for (const RecoveryEvent& r : m.recoveries) {
    line("recovery_s_after_t=" + num(r.event_time),
         r.recovery_time ? num(*r.recovery_time) : "not recovered");
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Morphing-quadrotor reduced-order simulator with NMPC", "morphonmpc"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string builtin_name;
  std::string out_dir = ".";
  std::string csv_path;
  bool fast = false;

  CLI::App* run = app.add_subcommand("run", "Simulate a scenario file");
  run->add_option("scenario", scenario_file, "YAML scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--fast", fast, "Plant step 1e-3 s instead of the configured step");

  CLI::App* builtin = app.add_subcommand("builtin", "Simulate a built-in scenario");
  builtin->add_option("name", builtin_name, "Scenario name (see list)")->required();
  builtin->add_option("--out", out_dir, "Output directory");
  builtin->add_flag("--fast", fast, "Plant step 1e-3 s instead of the configured step");

  CLI::App* list = app.add_subcommand("list", "List built-in scenarios");
  CLI::App* check = app.add_subcommand("check", "Run the invariant and gradient self-test");
  CLI::App* metrics = app.add_subcommand("metrics", "Recompute metrics from a CSV log");
  metrics->add_option("log", csv_path, "CSV log")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*list) {
      for (const Scenario& s : builtin_scenarios()) out << s.name << '\n';
      return kExitOk;
    }
    if (*check) {
      return print_self_check(run_self_check(), out) ? kExitOk : kExitRuntime;
    }
    if (*metrics) {
      print_metrics(compute_metrics(read_csv(csv_path)), out);
      return kExitOk;
    }
    if (*run) return simulate(load_scenario(scenario_file), out_dir, fast, out, err);
    if (*builtin) return simulate(builtin_scenario(builtin_name), out_dir, fast, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ScenarioInvalid& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const EmptyLog& e) {
    err << "invalid log: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInvalid;
}

}  // namespace morpho
