#include "auxsim/scenario.hpp"
#include "scenario_gen.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace auxsim;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioScript load(const std::string& name) {
  const auto r = parse_scenario(read_file(fs::path(AUXSIM_SCENARIO_DIR) / name));
  for (const auto& e : r.errors) MESSAGE(e.to_string());
  REQUIRE(r.script);
  return *r.script;
}

bool has_error(const ParseResult& r, const std::string& path, const std::string& needle) {
  for (const auto& e : r.errors) {
    if (e.path == path && e.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("minimal file gives an empty script with ledger defaults") {
  const auto r = parse_scenario(R"({"version": 1, "tick": 0.005, "commands": []})");
  REQUIRE(r.script);
  CHECK(r.errors.empty());
  CHECK(r.script->commands.empty());
  CHECK(r.script->tick_s == 0.005);
  CHECK(r.script->config == Config{});
}

TEST_CASE("forward, turn, forward sequence parses into its phases") {
  const ScenarioScript s = load("forward_turn.json");
  REQUIRE(s.commands.size() == 6);
  int gait = 0, turns = 0;
  for (const auto& c : s.commands) {
    gait += c.command.type == CommandType::gait_step;
    turns += c.command.type == CommandType::turn;
  }
  CHECK(gait == 5);
  CHECK(turns == 1);
  // forward phase, turn, forward phase
  CHECK(s.commands[3].command == Command::turn(1));

  const auto again = parse_scenario(emit_scenario(s));
  REQUIRE(again.script);
  CHECK(*again.script == s);
}

TEST_CASE("chamber 13 is an unknown chamber") {
  const auto r = parse_scenario(R"({"version": 1, "tick": 0.005, "duration": 1,
    "commands": [{"t": 0, "type": "chamber", "chamber": 13, "command": "vacuum"}]})");
  CHECK_FALSE(r.script);
  CHECK(has_error(r, "/commands/0/chamber", "unknown chamber"));
  const auto n = parse_scenario(R"({"version": 1, "duration": 1,
    "commands": [{"t": 0, "type": "chamber", "chamber": "f4.c1", "command": "vacuum"}]})");
  CHECK(has_error(n, "/commands/0/chamber", "unknown chamber"));
}

TEST_CASE("every problem is reported, not just the first") {
  const auto r = parse_scenario(R"({
    "version": 2,
    "tick": -1,
    "duration": 5,
    "colour": "red",
    "config": {"lock": {"lock_threshold_deg": "one"}, "gait": {"foot_mu": [1, 2]}},
    "commands": [
      {"t": 3, "type": "turn", "direction": "left"},
      {"t": 1, "type": "gait_step", "pair": [0, 2]},
      {"t": 9, "type": "fly"}
    ]})");
  CHECK_FALSE(r.script);
  CHECK(has_error(r, "/version", "unsupported"));
  CHECK(has_error(r, "/tick", "positive"));
  CHECK(has_error(r, "/colour", "unknown field"));
  CHECK(has_error(r, "/config/lock/lock_threshold_deg", "number"));
  CHECK(has_error(r, "/config/gait/foot_mu", "4 numbers"));
  CHECK(has_error(r, "/commands/0/direction", "\"+\""));
  CHECK(has_error(r, "/commands/1/pair", "adjacent"));
  CHECK(has_error(r, "/commands/1/t", "sorted"));
  CHECK(has_error(r, "/commands/2/t", "after the end"));
  CHECK(has_error(r, "/commands/2/type", "unknown command type"));
  CHECK(r.errors.size() == 10);
}

TEST_CASE("unknown fields are errors in strict mode and warnings otherwise") {
  const std::string text = R"({"version": 1, "commands": [], "config": {"object": {"colour": 1}}})";
  const auto strict = parse_scenario(text, true);
  CHECK_FALSE(strict.script);
  CHECK(has_error(strict, "/config/object/colour", "unknown field"));
  const auto lenient = parse_scenario(text, false);
  REQUIRE(lenient.script);
  REQUIRE(lenient.warnings.size() == 1);
  CHECK(lenient.warnings[0].path == "/config/object/colour");
}

TEST_CASE("syntax errors carry line and column") {
  const auto r = parse_scenario("{\n  \"version\": 1,\n  \"commands\": [,]\n}");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 3);
  CHECK(r.errors[0].column == 16);
  CHECK(r.errors[0].message.find("syntax error") == 0);
  CHECK(r.errors[0].to_string().find("line 3, column 16") == 0);
}

TEST_CASE("invalid parameter values are reported under the config path") {
  const auto r = parse_scenario(R"({"version": 1, "commands": [],
    "config": {"geometry": {"alpha_deg": 200}, "calibration": {"tau_s": 0}}})");
  CHECK_FALSE(r.script);
  bool geometry = false;
  for (const auto& e : r.errors) geometry = geometry || e.path == "/config/geometry";
  CHECK(geometry);
}

TEST_CASE("mount depth follows the unit size unless given") {
  const auto r = parse_scenario(R"({"version": 1, "commands": [], "config": {"geometry": {"l_mm": 30}}})");
  REQUIRE(r.script);
  CHECK(r.script->config.gripper.mount_depth_mm == kMountDepthPerL * 30.0);
  const auto g = parse_scenario(
      R"({"version": 1, "commands": [], "config": {"geometry": {"l_mm": 30}, "finger": {"mount_depth_mm": 99}}})");
  REQUIRE(g.script);
  CHECK(g.script->config.gripper.mount_depth_mm == 99.0);
}

TEST_CASE("parse after emit is the identity over the corpus") {
  std::vector<ScenarioScript> corpus;
  for (const auto& entry : fs::directory_iterator(AUXSIM_SCENARIO_DIR)) {
    if (entry.path().extension() == ".json") corpus.push_back(load(entry.path().filename().string()));
  }
  CHECK(corpus.size() >= 8);
  std::mt19937_64 rng(7);
  while (corpus.size() < 40) corpus.push_back(gen::random_script(rng));

  for (const auto& s : corpus) {
    const std::string text = emit_scenario(s);
    const auto r = parse_scenario(text);
    for (const auto& e : r.errors) MESSAGE(e.to_string());
    REQUIRE(r.script);
    CHECK(*r.script == s);
    CHECK(emit_scenario(*r.script) == text);
  }
}

TEST_CASE("replaying a scenario twice gives byte-identical reports") {
  for (const char* name : {"forward_turn.json", "box_grasp_parallel.json", "finger_sweep.json"}) {
    const ScenarioScript s = load(name);
    const RunReport a = replay(s);
    const RunReport b = replay(s);
    CHECK(a.trajectory_csv == b.trajectory_csv);
    CHECK(a.markers_csv == b.markers_csv);
    CHECK(a.chambers_csv == b.chambers_csv);
    CHECK(a.verdicts_csv == b.verdicts_csv);
    CHECK(a.events_ndjson == b.events_ndjson);
    CHECK(a.final_state_json == b.final_state_json);
    CHECK_FALSE(a.fatal);
  }
}

TEST_CASE("trajectory CSV has one fixed-format row per tick") {
  const ScenarioScript s = load("forward_turn.json");
  const RunReport r = replay(s);
  const auto rows = lines(r.trajectory_csv);
  REQUIRE(rows.size() == static_cast<std::size_t>(tick_index(s.duration_s, s.tick_s)) + 2);
  CHECK(rows[0] == "t_s,x_mm,y_mm,heading_deg,mode,locked,event");
  CHECK(rows[1] == "0.000000,0.000000,0.000000,0.000000,cross_link,0,gait_step_start");
  // 144 degree bend and latched at the end
  const std::string last = rows.back();
  CHECK(last.find(",144.000000,parallel,1,") != std::string::npos);
}

TEST_CASE("finger sweep reaches the calibrated end angles") {
  const RunReport r = replay(load("finger_sweep.json"));
  std::vector<std::string> at;
  for (const auto& l : lines(r.markers_csv)) {
    if (l.rfind("5.995000,", 0) == 0) at.push_back(l);
  }
  REQUIRE(at.size() == 4);
  CHECK(at[0].find("5.995000,0,0.000000,105.000000,") == 0);
  CHECK(at[1].find("5.995000,1,120.000000,0.000000,") == 0);
  CHECK(at[2].find("5.995000,2,144.000000,105.000000,") == 0);
  CHECK(at[2].substr(at[2].rfind(',') + 1) == "249.000000");
  CHECK(at[3].find("5.995000,3,0.000000,0.000000,80.000000,0.000000,120.000000,0.000000,0.000000") == 0);
}

TEST_CASE("box grasp verdicts follow the gripper mode") {
  const RunReport par = replay(load("box_grasp_parallel.json"));
  const RunReport crs = replay(load("box_grasp_cross.json"));
  const RunReport ball = replay(load("ball_grasp.json"));
  CHECK(lines(par.verdicts_csv).at(1) == "3.500000,parallel,rectangle,1,closure_ok,1.000000,4");
  CHECK(lines(crs.verdicts_csv).at(1) == "0.500000,cross_link,rectangle,0,slip,-1.000000,4");
  CHECK(lines(ball.verdicts_csv).at(1).find("cross_link,circle,1,closure_ok") != std::string::npos);
}

TEST_CASE("rejected commands become events, not failures") {
  const auto r = parse_scenario(R"({"version": 1, "duration": 1, "commands": [
    {"t": 0, "type": "gait_step", "pair": [0, 1]},
    {"t": 0.5, "type": "turn", "direction": "+"}]})");
  REQUIRE(r.script);
  const RunReport rep = replay(*r.script);
  CHECK_FALSE(rep.fatal);
  CHECK(rep.events_ndjson.find(R"("detail":"busy: procedure in progress","t_s":0.5,"tick":100,"type":"rejected")") !=
        std::string::npos);
}

TEST_CASE("results do not depend on the tick size") {
  ScenarioScript coarse = load("finger_sweep.json");
  ScenarioScript fine = coarse;
  fine.tick_s = 0.001;
  coarse.duration_s = fine.duration_s = 1.0;
  std::optional<Simulator> a, b;
  replay(coarse, a);
  replay(fine, b);
  for (int i = 0; i < kChamberCount; ++i) {
    CHECK(std::abs(a->state().chambers[i].contraction - b->state().chambers[i].contraction) < 1e-12);
  }
}

TEST_CASE("reports land only in the output directory") {
  const fs::path dir = fs::temp_directory_path() / "auxsim_report_test";
  fs::remove_all(dir);
  write_report(replay(load("ball_grasp.json")), (dir / "out").string());
  std::vector<std::string> names;
  for (const auto& e : fs::recursive_directory_iterator(dir)) names.push_back(e.path().lexically_relative(dir).string());
  std::sort(names.begin(), names.end());
  const std::vector<std::string> expected{"out",
                                          "out/chambers.csv",
                                          "out/events.ndjson",
                                          "out/final_state.json",
                                          "out/markers.csv",
                                          "out/trajectory.csv",
                                          "out/verdicts.csv"};
  CHECK(names == expected);
  fs::remove_all(dir);
}

TEST_CASE("final state file is stable text") {
  const RunReport r = replay(load("release_cycle.json"));
  const json j = json::parse(r.final_state_json);
  CHECK(j["theta_deg"] == 0.0);
  CHECK(j["mode"] == "cross_link");
  CHECK(j["lock"]["engaged"] == false);
  CHECK(j["chambers"].size() == 12);
  CHECK(j["tick"] == 2400);
}
