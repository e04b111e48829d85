// auxsim: run, validate and serve scenarios from the command line.
//
// Exit codes: 0 ok, 1 fatal simulation error, 2 invalid input.

#include "auxsim/server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace auxsim;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kInvalid = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Parses and reports every issue; nullopt means exit 2.
std::optional<ScenarioScript> load(const std::string& path, bool strict, std::optional<double> tick) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  ParseResult r = parse_scenario(*text, strict);
  for (const auto& w : r.warnings) std::cerr << path << ": warning: " << w.to_string() << "\n";
  for (const auto& e : r.errors) std::cerr << path << ": error: " << e.to_string() << "\n";
  if (!r.script) return std::nullopt;
  if (tick) {
    if (!(*tick > 0.0)) {
      std::cerr << "--tick must be positive\n";
      return std::nullopt;
    }
    r.script->tick_s = *tick;
  }
  return r.script;
}

void print_calibration(const Config& c) {
  const ActuatorCalibration& cal = c.gripper.calibration;
  std::printf("%-18s %9s %9s %11s %11s\n", "chambers", "phi1_deg", "phi2_deg", "stage1_n", "tip_n");
  const struct {
    const char* name;
    double c1, c2;
  } rows[] = {{"ambient", 0, 0}, {"chamber 1", 1, 0}, {"chamber 2", 0, 1}, {"both", 1, 1}};
  for (const auto& r : rows) {
    const HingeAngles h = hinge_targets(cal, r.c1, r.c2);
    std::printf("%-18s %9.3f %9.3f %11.3f %11.3f\n", r.name, h.phi1_deg, h.phi2_deg,
                blocked_force(cal, ForcePoint::stage1, r.c1, r.c2, cal.deficit_ref_deg),
                blocked_force(cal, ForcePoint::tip, r.c1, r.c2, cal.deficit_ref_deg));
  }
  std::printf("forces at %.1f deg short of target, tau %.3f s\n", cal.deficit_ref_deg, cal.tau_s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"auxsim: auxetic gripper and quadruped simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  std::optional<double> tick;
  bool strict = false;

  auto* run = app.add_subcommand("run", "replay a scenario and write its report");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "directory for the report files");
  run->add_option("--tick", tick, "override the scenario tick in seconds");
  run->add_flag("--strict", strict, "reject unknown fields instead of warning");

  auto* validate = app.add_subcommand("validate", "check a scenario without running it");
  validate->add_option("scenario", scenario_path, "scenario JSON file")->required();
  validate->add_option("--tick", tick, "override the scenario tick in seconds");
  validate->add_flag("--strict", strict, "reject unknown fields instead of warning");

  bool print_ledger = false;
  std::string config_path;
  auto* calibrate = app.add_subcommand("calibrate", "show the actuator calibration");
  calibrate->add_flag("--print-ledger", print_ledger, "print every model parameter as a config block");
  calibrate->add_option("--config", config_path, "scenario whose config to use instead of the defaults");

  ServerOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "start the session server");
  serve->add_option("--host", serve_opts.host, "bind address")->capture_default_str();
  serve->add_option("--port", serve_opts.port, "port, 0 for any free one")->capture_default_str();
  serve->add_option("--tick", serve_opts.tick_s, "tick in seconds")->capture_default_str();
  serve->add_option("--snapshot-hz", serve_opts.snapshot_hz, "default snapshot rate")->capture_default_str();
  serve->add_flag("--manual", serve_opts.manual, "sessions advance only through the step route");
  serve->add_option("--log-dir", serve_opts.log_dir, "write each closed session's command log here");

  app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  if (*run) {
    const auto script = load(scenario_path, strict, tick);
    if (!script) return kInvalid;
    const RunReport report = replay(*script);
    if (!out_dir.empty()) {
      try {
        write_report(report, out_dir);
      } catch (const std::exception& e) {
        std::cerr << out_dir << ": " << e.what() << "\n";
        return kFatal;
      }
    } else {
      std::cout << report.final_state_json;
    }
    if (report.fatal) {
      std::cerr << "fatal: " << *report.fatal << "\n";
      return kFatal;
    }
    return kOk;
  }

  if (*validate) {
    const auto script = load(scenario_path, strict, tick);
    if (!script) return kInvalid;
    std::cout << scenario_path << ": ok, " << script->commands.size() << " commands, "
              << script->duration_s << " s at tick " << script->tick_s << " s\n";
    return kOk;
  }

  if (*calibrate) {
    Config config;
    if (!config_path.empty()) {
      const auto script = load(config_path, true, std::nullopt);
      if (!script) return kInvalid;
      config = script->config;
    }
    if (print_ledger) {
      std::cout << config_to_json(config).dump(2) << "\n";
    } else {
      print_calibration(config);
    }
    return kOk;
  }

  if (*serve) {
    // block the signals before any thread starts so only sigwait sees them
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    Server server(serve_opts);
    try {
      server.start();
    } catch (const std::exception& e) {
      std::cerr << "serve: " << e.what() << "\n";
      return kFatal;
    }
    std::cerr << "listening on " << serve_opts.host << ":" << server.port() << "\n";
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    return kOk;
  }

  std::cout << "auxsim " << AUXSIM_VERSION << " (scenario and protocol version " << kScenarioVersion << ")\n";
  return kOk;
}
