#include "auxsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace auxsim {

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

const char* command_word(ChamberCommand c) { return c == ChamberCommand::vacuum ? "vacuum" : "ambient"; }

const char* shape_name(Shape s) { return s == Shape::circle ? "circle" : "rectangle"; }

// reads an array of exactly N numbers
template <std::size_t N>
std::optional<std::array<double, N>> number_array(const json& obj, FieldReader& r,
                                                  const std::string& path, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const json& a = obj.at(key);
  const std::string p = join(path, key);
  if (!a.is_array() || a.size() != N) {
    r.error(p, "expected an array of " + std::to_string(N) + " numbers");
    return std::nullopt;
  }
  std::array<double, N> out{};
  bool ok = true;
  for (std::size_t i = 0; i < N; ++i) {
    if (!a[i].is_number()) {
      r.error(join(p, std::to_string(i)), "expected a number");
      ok = false;
      continue;
    }
    out[i] = a[i].get<double>();
  }
  if (!ok) return std::nullopt;
  return out;
}

void read_into(double& dst, const json& obj, FieldReader& r, const std::string& path,
               const char* key) {
  if (auto v = r.number(obj, path, key, false)) dst = *v;
}

std::optional<Command> command_from_json(const json& j, FieldReader& r, const std::string& path,
                                         double& t_s) {
  if (!j.is_object()) {
    r.error(path, "expected an object");
    return std::nullopt;
  }
  auto type = r.string(j, path, "type", true);
  auto t = r.number(j, path, "t", true);
  if (t) t_s = *t;
  if (!type) {
    r.object(j, path, {"t", "type"});
    return std::nullopt;
  }
  if (*type == "chamber") {
    r.object(j, path, {"t", "type", "chamber", "command"});
    std::optional<int> id;
    if (!j.contains("chamber")) {
      r.error(join(path, "chamber"), "missing required field");
    } else {
      id = chamber_from_json(j.at("chamber"), r, join(path, "chamber"));
    }
    auto word = r.string(j, path, "command", true);
    std::optional<ChamberCommand> action;
    if (word) {
      if (*word == "vacuum") {
        action = ChamberCommand::vacuum;
      } else if (*word == "ambient") {
        action = ChamberCommand::ambient;
      } else {
        r.error(join(path, "command"), "expected \"vacuum\" or \"ambient\"");
      }
    }
    if (!id || !action) return std::nullopt;
    return Command::set_chamber(*id, *action);
  }
  if (*type == "gait_step") {
    r.object(j, path, {"t", "type", "pair"});
    auto pair = number_array<2>(j, r, path, "pair");
    if (!j.contains("pair")) r.error(join(path, "pair"), "missing required field");
    if (!pair) return std::nullopt;
    const int a = static_cast<int>((*pair)[0]);
    const int b = static_cast<int>((*pair)[1]);
    if (a != (*pair)[0] || b != (*pair)[1] || !adjacent_pair(a, b)) {
      r.error(join(path, "pair"), "gait pair must be two adjacent finger indices 0..3");
      return std::nullopt;
    }
    return Command::gait_step(a, b);
  }
  if (*type == "turn") {
    r.object(j, path, {"t", "type", "direction"});
    auto dir = r.string(j, path, "direction", true);
    if (!dir) return std::nullopt;
    if (*dir != "+" && *dir != "-") {
      r.error(join(path, "direction"), "expected \"+\" or \"-\"");
      return std::nullopt;
    }
    return Command::turn(*dir == "+" ? 1 : -1);
  }
  if (*type == "grasp_trial") {
    r.object(j, path, {"t", "type", "object"});
    if (!j.contains("object")) return Command::grasp();
    auto obj = object_from_json(j.at("object"), r, join(path, "object"));
    if (!obj) return std::nullopt;
    return Command::grasp(*obj);
  }
  r.error(join(path, "type"), "unknown command type \"" + *type + "\"");
  return std::nullopt;
}

json command_to_json(const TimedCommand& tc) {
  const Command& c = tc.command;
  json j;
  j["t"] = tc.t_s;
  switch (c.type) {
    case CommandType::chamber:
      j["type"] = "chamber";
      j["chamber"] = chamber_name(c.chamber);
      j["command"] = command_word(c.action);
      break;
    case CommandType::gait_step:
      j["type"] = "gait_step";
      j["pair"] = {c.pair[0], c.pair[1]};
      break;
    case CommandType::turn:
      j["type"] = "turn";
      j["direction"] = c.direction > 0 ? "+" : "-";
      break;
    case CommandType::grasp_trial:
      j["type"] = "grasp_trial";
      if (c.object) j["object"] = object_to_json(*c.object);
      break;
  }
  return j;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string ParseIssue::to_string() const {
  if (line > 0) return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  return (path.empty() ? std::string("/") : path) + ": " + message;
}

void FieldReader::error(const std::string& path, std::string message) {
  errors_.push_back({path, std::move(message)});
}

bool FieldReader::object(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    error(path, "expected an object");
    return false;
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (known) continue;
    ParseIssue issue{join(path, key), "unknown field"};
    (strict_ ? errors_ : warnings_).push_back(issue);
  }
  return true;
}

std::optional<double> FieldReader::number(const json& obj, const std::string& path,
                                          const char* key, bool required) {
  if (!obj.is_object() || !obj.contains(key)) {
    if (required) error(join(path, key), "missing required field");
    return std::nullopt;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    error(join(path, key), "expected a number");
    return std::nullopt;
  }
  return v.get<double>();
}

std::optional<int> FieldReader::integer(const json& obj, const std::string& path, const char* key,
                                        bool required) {
  if (!obj.is_object() || !obj.contains(key)) {
    if (required) error(join(path, key), "missing required field");
    return std::nullopt;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    error(join(path, key), "expected an integer");
    return std::nullopt;
  }
  return v.get<int>();
}

std::optional<std::string> FieldReader::string(const json& obj, const std::string& path,
                                               const char* key, bool required) {
  if (!obj.is_object() || !obj.contains(key)) {
    if (required) error(join(path, key), "missing required field");
    return std::nullopt;
  }
  const json& v = obj.at(key);
  if (!v.is_string()) {
    error(join(path, key), "expected a string");
    return std::nullopt;
  }
  return v.get<std::string>();
}

std::optional<int> chamber_from_json(const json& j, FieldReader& r, const std::string& path) {
  if (j.is_number_integer()) {
    const auto id = j.get<long long>();
    if (id < 0 || id >= kChamberCount) {
      r.error(path, "unknown chamber " + std::to_string(id));
      return std::nullopt;
    }
    return static_cast<int>(id);
  }
  if (j.is_string()) {
    if (auto id = chamber_id(j.get<std::string>())) return *id;
    r.error(path, "unknown chamber \"" + j.get<std::string>() + "\"");
    return std::nullopt;
  }
  r.error(path, "expected a chamber name or index");
  return std::nullopt;
}

std::optional<ObjectSpec> object_from_json(const json& j, FieldReader& r, const std::string& path) {
  if (!r.object(j, path, {"shape", "radius_mm", "width_mm", "depth_mm", "mass_kg", "mu"})) {
    return std::nullopt;
  }
  ObjectSpec o;
  const std::size_t before = r.errors().size();
  if (auto s = r.string(j, path, "shape", false)) {
    if (*s == "circle") {
      o.shape = Shape::circle;
    } else if (*s == "rectangle") {
      o.shape = Shape::rectangle;
    } else {
      r.error(join(path, "shape"), "expected \"circle\" or \"rectangle\"");
    }
  }
  read_into(o.radius_mm, j, r, path, "radius_mm");
  read_into(o.width_mm, j, r, path, "width_mm");
  read_into(o.depth_mm, j, r, path, "depth_mm");
  read_into(o.mass_kg, j, r, path, "mass_kg");
  read_into(o.mu, j, r, path, "mu");
  if (r.errors().size() != before) return std::nullopt;
  try {
    o.validate();
  } catch (const std::exception& e) {
    r.error(path, e.what());
    return std::nullopt;
  }
  return o;
}

json object_to_json(const ObjectSpec& o) {
  return {{"shape", shape_name(o.shape)}, {"radius_mm", o.radius_mm}, {"width_mm", o.width_mm},
          {"depth_mm", o.depth_mm},       {"mass_kg", o.mass_kg},     {"mu", o.mu}};
}

Config config_from_json(const json& j, FieldReader& r, const std::string& path) {
  Config c;
  if (!r.object(j, path,
                {"geometry", "calibration", "finger", "lock", "gait", "grasp", "object", "environment"})) {
    return c;
  }
  const std::size_t before = r.errors().size();

  double alpha = c.gripper.geometry.alpha_deg;
  double l = c.gripper.geometry.l_mm;
  if (j.contains("geometry")) {
    const std::string p = join(path, "geometry");
    const json& g = j.at("geometry");
    if (r.object(g, p, {"alpha_deg", "l_mm"})) {
      read_into(alpha, g, r, p, "alpha_deg");
      read_into(l, g, r, p, "l_mm");
      try {
        c.gripper.geometry = UnitGeometry::make_default(alpha, l);
      } catch (const std::exception& e) {
        r.error(p, e.what());
      }
    }
  }
  c.gripper.mount_depth_mm = kMountDepthPerL * l;

  if (j.contains("calibration")) {
    const std::string p = join(path, "calibration");
    const json& b = j.at("calibration");
    auto& cal = c.gripper.calibration;
    if (r.object(b, p,
                 {"phi2_solo_max_deg", "phi1_solo_max_deg", "phi1_both_max_deg", "phi2_both_max_deg",
                  "f_tip_max_n", "f_stage1_max_n", "tau_s", "deficit_ref_deg"})) {
      read_into(cal.phi2_solo_max_deg, b, r, p, "phi2_solo_max_deg");
      read_into(cal.phi1_solo_max_deg, b, r, p, "phi1_solo_max_deg");
      read_into(cal.phi1_both_max_deg, b, r, p, "phi1_both_max_deg");
      read_into(cal.phi2_both_max_deg, b, r, p, "phi2_both_max_deg");
      read_into(cal.f_tip_max_n, b, r, p, "f_tip_max_n");
      read_into(cal.f_stage1_max_n, b, r, p, "f_stage1_max_n");
      read_into(cal.tau_s, b, r, p, "tau_s");
      read_into(cal.deficit_ref_deg, b, r, p, "deficit_ref_deg");
    }
  }
  if (j.contains("finger")) {
    const std::string p = join(path, "finger");
    const json& b = j.at("finger");
    if (r.object(b, p, {"link_lengths_mm", "mount_depth_mm"})) {
      if (auto links = number_array<3>(b, r, p, "link_lengths_mm")) c.gripper.link_lengths_mm = *links;
      read_into(c.gripper.mount_depth_mm, b, r, p, "mount_depth_mm");
    }
  }
  if (j.contains("lock")) {
    const std::string p = join(path, "lock");
    const json& b = j.at("lock");
    if (r.object(b, p, {"lock_threshold_deg", "release_threshold_deg", "release_contraction"})) {
      read_into(c.lock.lock_threshold_deg, b, r, p, "lock_threshold_deg");
      read_into(c.lock.release_threshold_deg, b, r, p, "release_threshold_deg");
      read_into(c.lock.release_contraction, b, r, p, "release_contraction");
    }
  }
  if (j.contains("gait")) {
    const std::string p = join(path, "gait");
    const json& b = j.at("gait");
    if (r.object(b, p, {"contact_angle_deg", "mass_kg", "recovery_force_n", "foot_mu"})) {
      read_into(c.gait.contact_angle_deg, b, r, p, "contact_angle_deg");
      read_into(c.gait.mass_kg, b, r, p, "mass_kg");
      read_into(c.gait.recovery_force_n, b, r, p, "recovery_force_n");
      if (auto mu = number_array<4>(b, r, p, "foot_mu")) c.gait.foot_mu = *mu;
    }
  }
  if (j.contains("grasp")) {
    const std::string p = join(path, "grasp");
    const json& b = j.at("grasp");
    if (r.object(b, p, {"cone_edges"})) {
      if (auto n = r.integer(b, p, "cone_edges", false)) c.grasp.cone_edges = *n;
    }
  }
  if (j.contains("object")) {
    if (auto o = object_from_json(j.at("object"), r, join(path, "object"))) c.object = *o;
  }
  if (j.contains("environment")) {
    const std::string p = join(path, "environment");
    const json& b = j.at("environment");
    if (r.object(b, p, {"gravity_n_per_kg"})) read_into(c.gravity_n_per_kg, b, r, p, "gravity_n_per_kg");
  }

  c.sync();
  if (r.errors().size() == before) {
    try {
      c.validate();
    } catch (const std::exception& e) {
      r.error(path, e.what());
    }
  }
  return c;
}

json config_to_json(const Config& c) {
  const auto& g = c.gripper;
  const auto& cal = g.calibration;
  json j;
  j["geometry"] = {{"alpha_deg", g.geometry.alpha_deg}, {"l_mm", g.geometry.l_mm}};
  j["calibration"] = {{"phi2_solo_max_deg", cal.phi2_solo_max_deg},
                      {"phi1_solo_max_deg", cal.phi1_solo_max_deg},
                      {"phi1_both_max_deg", cal.phi1_both_max_deg},
                      {"phi2_both_max_deg", cal.phi2_both_max_deg},
                      {"f_tip_max_n", cal.f_tip_max_n},
                      {"f_stage1_max_n", cal.f_stage1_max_n},
                      {"tau_s", cal.tau_s},
                      {"deficit_ref_deg", cal.deficit_ref_deg}};
  j["finger"] = {{"link_lengths_mm", g.link_lengths_mm}, {"mount_depth_mm", g.mount_depth_mm}};
  j["lock"] = {{"lock_threshold_deg", c.lock.lock_threshold_deg},
               {"release_threshold_deg", c.lock.release_threshold_deg},
               {"release_contraction", c.lock.release_contraction}};
  j["gait"] = {{"contact_angle_deg", c.gait.contact_angle_deg},
               {"mass_kg", c.gait.mass_kg},
               {"recovery_force_n", c.gait.recovery_force_n},
               {"foot_mu", c.gait.foot_mu}};
  j["grasp"] = {{"cone_edges", c.grasp.cone_edges}};
  j["object"] = object_to_json(c.object);
  j["environment"] = {{"gravity_n_per_kg", c.gravity_n_per_kg}};
  return j;
}

std::int64_t tick_index(double t_s, double tick_s) { return std::llround(t_s / tick_s); }

ParseResult parse_scenario(const std::string& text, bool strict) {
  ParseResult out;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    // drop the library prefix "[json.exception.parse_error.101] "
    if (const auto pos = msg.find("] "); pos != std::string::npos) msg = msg.substr(pos + 2);
    out.errors.push_back({"", "syntax error: " + msg, line, col});
    return out;
  }

  FieldReader r(strict);
  ScenarioScript s;
  if (!r.object(doc, "", {"version", "tick", "duration", "config", "commands"})) {
    out.errors = r.errors();
    return out;
  }
  if (auto v = r.integer(doc, "", "version", true)) {
    if (*v != kScenarioVersion) r.error("/version", "unsupported version " + std::to_string(*v));
    s.version = *v;
  }
  if (auto t = r.number(doc, "", "tick", false)) {
    if (!(*t > 0.0)) r.error("/tick", "tick must be positive");
    s.tick_s = *t;
  }
  if (auto d = r.number(doc, "", "duration", false)) {
    if (!(*d >= 0.0)) r.error("/duration", "duration must be non-negative");
    s.duration_s = *d;
  }
  if (doc.contains("config")) s.config = config_from_json(doc.at("config"), r, "/config");

  if (doc.contains("commands")) {
    const json& cmds = doc.at("commands");
    if (!cmds.is_array()) {
      r.error("/commands", "expected an array");
    } else {
      double last = -INFINITY;
      for (std::size_t i = 0; i < cmds.size(); ++i) {
        const std::string p = "/commands/" + std::to_string(i);
        double t = 0.0;
        auto c = command_from_json(cmds[i], r, p, t);
        if (cmds[i].is_object() && cmds[i].contains("t") && cmds[i].at("t").is_number()) {
          if (t < 0.0) r.error(p + "/t", "time must be non-negative");
          if (t > s.duration_s) r.error(p + "/t", "time is after the end of the scenario");
          if (t < last) r.error(p + "/t", "commands must be sorted by time");
          last = std::max(last, t);
        }
        if (c) s.commands.push_back({t, *c});
      }
    }
  } else {
    r.error("/commands", "missing required field");
  }

  out.errors = r.errors();
  out.warnings = r.warnings();
  if (out.errors.empty()) out.script = std::move(s);
  return out;
}

std::string emit_scenario(const ScenarioScript& s) {
  json j;
  j["version"] = s.version;
  j["tick"] = s.tick_s;
  j["duration"] = s.duration_s;
  j["config"] = config_to_json(s.config);
  j["commands"] = json::array();
  for (const auto& c : s.commands) j["commands"].push_back(command_to_json(c));
  return j.dump(2) + "\n";
}

json state_json(const Simulator& sim, int decimals) {
  auto num = [decimals](double v) -> double {
    if (decimals < 0) return v;
    return std::stod(format_fixed(v, decimals));
  };
  const SimState& s = sim.state();
  json j;
  j["version"] = kScenarioVersion;
  j["tick"] = s.tick;
  j["t_s"] = num(sim.time_s());
  j["theta_deg"] = num(s.fold_deg);
  j["mode"] = mode_label(s.mode);
  j["lock"] = {{"mode", mode_name(s.lock.mode)}, {"engaged", s.lock.engaged}, {"armed", s.lock.armed}};
  j["chambers"] = json::array();
  for (const auto& ch : s.chambers) {
    j["chambers"].push_back({{"id", chamber_name(ch.id)},
                             {"command", command_word(ch.command)},
                             {"contraction", num(ch.contraction)}});
  }
  j["fingers"] = json::array();
  for (const auto& f : s.fingers) {
    j["fingers"].push_back({{"phi1_deg", num(f.phi1_deg)}, {"phi2_deg", num(f.phi2_deg)}});
  }
  j["pose"] = {{"x_mm", num(s.pose.x_mm)},
               {"y_mm", num(s.pose.y_mm)},
               {"heading_deg", num(s.pose.heading_deg)},
               {"anchored", s.pose.anchored}};
  const char* proc = s.macro == MacroKind::gait ? "gait" : s.macro == MacroKind::turn ? "turn" : "none";
  j["procedure"] = proc;
  j["events"] = json::array();
  for (const auto& e : sim.events_at(s.tick)) {
    j["events"].push_back({{"tick", e.tick}, {"type", e.type}, {"detail", e.detail}});
  }
  return j;
}

RunReport replay(const ScenarioScript& script) {
  std::optional<Simulator> sim;
  return replay(script, sim);
}

RunReport replay(const ScenarioScript& script, std::optional<Simulator>& sim_out) {
  RunReport rep;
  sim_out.emplace(script.config, script.tick_s);
  Simulator& sim = *sim_out;
  const auto& cal = sim.config().gripper.calibration;
  const std::int64_t total = tick_index(script.duration_s, script.tick_s);

  std::string traj = "t_s,x_mm,y_mm,heading_deg,mode,locked,event\n";
  std::string markers = "t_s,finger,phi1_deg,phi2_deg,mid_x_mm,mid_y_mm,tip_x_mm,tip_y_mm,tip_deg\n";
  std::string chambers = "t_s,theta_deg";
  for (int i = 0; i < kChamberCount; ++i) chambers += "," + chamber_name(i);
  chambers += "\n";

  std::size_t next_cmd = 0;
  std::size_t event_cursor = 0;
  auto ff = [](double v) { return format_fixed(v); };
  try {
    for (std::int64_t n = 0; n <= total; ++n) {
      while (next_cmd < script.commands.size() &&
             tick_index(script.commands[next_cmd].t_s, script.tick_s) <= n) {
        sim.apply(script.commands[next_cmd].command);
        ++next_cmd;
      }
      const SimState& s = sim.state();
      const std::string t = ff(sim.time_s());
      std::string ev;
      const auto& events = sim.events();
      for (; event_cursor < events.size(); ++event_cursor) {
        if (!ev.empty()) ev += ";";
        ev += events[event_cursor].type;
      }
      traj += t + "," + ff(s.pose.x_mm) + "," + ff(s.pose.y_mm) + "," + ff(s.pose.heading_deg) + "," +
              mode_label(s.mode) + "," + (s.lock.engaged ? "1" : "0") + "," + ev + "\n";
      for (int f = 0; f < 4; ++f) {
        const FingerMarkers m = finger_fk(s.fingers[f], cal);
        markers += t + "," + std::to_string(f) + "," + ff(s.fingers[f].phi1_deg) + "," +
                   ff(s.fingers[f].phi2_deg) + "," + ff(m.mid.x) + "," + ff(m.mid.y) + "," +
                   ff(m.tip.x) + "," + ff(m.tip.y) + "," + ff(m.tip_orientation_deg) + "\n";
      }
      chambers += t + "," + ff(s.fold_deg);
      for (const auto& ch : s.chambers) chambers += "," + ff(ch.contraction);
      chambers += "\n";
      if (n < total) sim.step();
    }
  } catch (const std::exception& e) {
    rep.fatal = e.what();
  }

  std::string verdicts = "t_s,mode,shape,success,reason,margin,contacts\n";
  for (const auto& g : sim.grasps()) {
    verdicts += ff(static_cast<double>(g.tick) * script.tick_s) + "," + mode_label(g.trial.mode) +
                "," + shape_name(g.object.shape) + "," + (g.trial.verdict.success ? "1" : "0") + "," +
                std::string(reason_name(g.trial.verdict.reason)) + "," + ff(g.trial.verdict.margin) +
                "," + std::to_string(g.trial.contacts.contacts.size()) + "\n";
  }

  std::string nd;
  for (const auto& e : sim.events()) {
    json j{{"tick", e.tick},
           {"t_s", std::stod(ff(static_cast<double>(e.tick) * script.tick_s))},
           {"type", e.type},
           {"detail", e.detail}};
    nd += j.dump() + "\n";
  }
  if (rep.fatal) nd += json{{"tick", sim.state().tick}, {"type", "fatal"}, {"detail", *rep.fatal}}.dump() + "\n";

  rep.trajectory_csv = std::move(traj);
  rep.markers_csv = std::move(markers);
  rep.chambers_csv = std::move(chambers);
  rep.verdicts_csv = std::move(verdicts);
  rep.events_ndjson = std::move(nd);
  rep.final_state_json = state_json(sim, 6).dump(2) + "\n";
  return rep;
}

void write_report(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::pair<const char*, const std::string*> files[] = {
      {"trajectory.csv", &report.trajectory_csv}, {"markers.csv", &report.markers_csv},
      {"chambers.csv", &report.chambers_csv},     {"verdicts.csv", &report.verdicts_csv},
      {"events.ndjson", &report.events_ndjson},   {"final_state.json", &report.final_state_json}};
  for (const auto& [name, body] : files) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << *body;
    if (!out) throw std::runtime_error(std::string("cannot write ") + name);
  }
}

}  // namespace auxsim
