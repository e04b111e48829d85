#pragma once

// Scenario files: a JSON document with a version, the parameter ledger, and
// timestamped commands. Parsing is strict and collects every problem it
// finds, each tagged with a field path.

#include "auxsim/sim.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace auxsim {

using json = nlohmann::json;

inline constexpr int kScenarioVersion = 1;

struct TimedCommand {
  double t_s = 0.0;
  Command command;

  friend bool operator==(const TimedCommand&, const TimedCommand&) = default;
};

struct ScenarioScript {
  int version = kScenarioVersion;
  double tick_s = 0.005;
  double duration_s = 0.0;
  Config config;
  std::vector<TimedCommand> commands;

  friend bool operator==(const ScenarioScript&, const ScenarioScript&) = default;
};

struct ParseIssue {
  std::string path;  // "/commands/3/chamber", empty for syntax errors
  std::string message;
  int line = 0;  // syntax errors only
  int column = 0;

  std::string to_string() const;
};

// Collects issues while walking a JSON tree. In lenient mode unknown fields
// become warnings instead of errors.
class FieldReader {
 public:
  explicit FieldReader(bool strict = true) : strict_(strict) {}

  void error(const std::string& path, std::string message);
  // Flags keys of obj not listed in allowed. Returns false if obj is not an object.
  bool object(const json& obj, const std::string& path, std::initializer_list<const char*> allowed);

  std::optional<double> number(const json& obj, const std::string& path, const char* key,
                               bool required);
  std::optional<int> integer(const json& obj, const std::string& path, const char* key,
                             bool required);
  std::optional<std::string> string(const json& obj, const std::string& path, const char* key,
                                    bool required);

  const std::vector<ParseIssue>& errors() const { return errors_; }
  const std::vector<ParseIssue>& warnings() const { return warnings_; }
  bool ok() const { return errors_.empty(); }

 private:
  bool strict_;
  std::vector<ParseIssue> errors_;
  std::vector<ParseIssue> warnings_;
};

// Missing blocks and fields take the ledger defaults. mount_depth_mm, when
// absent, scales with l_mm.
Config config_from_json(const json& j, FieldReader& reader, const std::string& path);
json config_to_json(const Config& config);

std::optional<ObjectSpec> object_from_json(const json& j, FieldReader& reader,
                                           const std::string& path);
json object_to_json(const ObjectSpec& object);

// Chamber by name ("b2", "f1.c2") or by index 0..11.
std::optional<int> chamber_from_json(const json& j, FieldReader& reader, const std::string& path);

struct ParseResult {
  std::optional<ScenarioScript> script;
  std::vector<ParseIssue> errors;
  std::vector<ParseIssue> warnings;
};

ParseResult parse_scenario(const std::string& text, bool strict = true);
std::string emit_scenario(const ScenarioScript& script);

// Tick index at which a command time applies.
std::int64_t tick_index(double t_s, double tick_s);

// State as JSON. decimals < 0 keeps full precision; otherwise numbers are
// rounded through fixed formatting for byte-stable files.
json state_json(const Simulator& sim, int decimals = -1);

struct RunReport {
  std::string trajectory_csv;
  std::string markers_csv;
  std::string chambers_csv;
  std::string verdicts_csv;
  std::string events_ndjson;
  std::string final_state_json;
  std::optional<std::string> fatal;
};

// Runs the script start to finish. Rejected commands are logged as events;
// a module exception stops the run and is reported in fatal.
RunReport replay(const ScenarioScript& script);
// Same, leaving the simulator in its final state for inspection.
RunReport replay(const ScenarioScript& script, std::optional<Simulator>& sim_out);

// Writes the report files into dir, creating it if needed.
void write_report(const RunReport& report, const std::string& dir);

}  // namespace auxsim
