#include "auxsim/sim.hpp"

#include <cmath>
#include <cstdio>

namespace auxsim {

namespace {

int fold_sign(const LockState& lock) { return lock.mode == Mode::parallel_plus ? 1 : -1; }

bool diagonal_holds(const GaitParams& p, Diagonal d) {
  if (d == Diagonal::a) return foot_holds(p, 0) && foot_holds(p, 2);
  if (d == Diagonal::b) return foot_holds(p, 1) && foot_holds(p, 3);
  return true;
}

}  // namespace

std::string mode_label(const ModeReading& m) {
  const std::string base = m.mode == GripperMode::parallel ? "parallel" : "cross_link";
  return m.transitional ? "transitional:" + base : base;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  // never print negative zero
  bool zero = true;
  for (char c : s) {
    if (c >= '1' && c <= '9') zero = false;
  }
  if (zero && !s.empty() && s[0] == '-') s.erase(0, 1);
  return s;
}

Command Command::set_chamber(int id, ChamberCommand action) {
  Command c;
  c.type = CommandType::chamber;
  c.chamber = id;
  c.action = action;
  return c;
}

Command Command::gait_step(int a, int b) {
  Command c;
  c.type = CommandType::gait_step;
  c.pair = {a, b};
  return c;
}

Command Command::turn(int direction) {
  Command c;
  c.type = CommandType::turn;
  c.direction = direction >= 0 ? 1 : -1;
  return c;
}

Command Command::grasp(std::optional<ObjectSpec> object) {
  Command c;
  c.type = CommandType::grasp_trial;
  c.object = object;
  return c;
}

bool operator==(const Command& a, const Command& b) {
  if (a.type != b.type) return false;
  switch (a.type) {
    case CommandType::chamber:
      return a.chamber == b.chamber && a.action == b.action;
    case CommandType::gait_step:
      return a.pair == b.pair;
    case CommandType::turn:
      return a.direction == b.direction;
    case CommandType::grasp_trial: {
      if (a.object.has_value() != b.object.has_value()) return false;
      if (!a.object) return true;
      const ObjectSpec& x = *a.object;
      const ObjectSpec& y = *b.object;
      return x.shape == y.shape && x.radius_mm == y.radius_mm && x.width_mm == y.width_mm &&
             x.depth_mm == y.depth_mm && x.mass_kg == y.mass_kg && x.mu == y.mu;
    }
  }
  return false;
}

Simulator::Simulator(Config config, double tick_s) : config_(std::move(config)), tick_s_(tick_s) {
  if (!(tick_s_ > 0.0)) throw DomainError("tick must be positive");
  config_.sync();
  config_.validate();
  for (int i = 0; i < kChamberCount; ++i) {
    state_.chambers[i].id = i;
    state_.chambers[i].tau_s = config_.gripper.calibration.tau_s;
  }
  for (auto& f : state_.fingers) f.link_lengths_mm = config_.gripper.link_lengths_mm;
  state_.mode = mode_of(state_.fold_deg, state_.lock);
}

void Simulator::emit(std::string type, std::string detail) {
  events_.push_back({state_.tick, std::move(type), std::move(detail)});
}

std::vector<SimEvent> Simulator::events_at(std::int64_t tick) const {
  std::vector<SimEvent> out;
  for (auto it = events_.rbegin(); it != events_.rend() && it->tick >= tick; ++it) {
    if (it->tick == tick) out.insert(out.begin(), *it);
  }
  return out;
}

void Simulator::set_pair(bool plus, ChamberCommand c) {
  state_.chambers[plus ? 0 : 1].command = c;
  state_.chambers[plus ? 2 : 3].command = c;
}

std::optional<std::string> Simulator::apply(const Command& command) {
  auto reject = [&](std::string reason) -> std::optional<std::string> {
    emit("rejected", reason);
    return reason;
  };
  switch (command.type) {
    case CommandType::chamber: {
      if (command.chamber < 0 || command.chamber >= kChamberCount) return reject("unknown chamber");
      state_.chambers[command.chamber].command = command.action;
      emit("chamber", chamber_name(command.chamber) + "=" +
                          (command.action == ChamberCommand::vacuum ? "vacuum" : "ambient"));
      return std::nullopt;
    }
    case CommandType::gait_step: {
      const int a = command.pair[0];
      const int b = command.pair[1];
      if (busy()) return reject("busy: procedure in progress");
      if (!adjacent_pair(a, b)) return reject("gait pair must be adjacent fingers");
      for (int f : {a, b}) {
        for (int c : {1, 2}) state_.chambers[finger_chamber(f, c)].command = ChamberCommand::vacuum;
      }
      state_.macro = MacroKind::gait;
      state_.gait = GaitMacro{};
      state_.gait.a = a;
      state_.gait.b = b;
      emit("gait_step_start", std::to_string(a) + "," + std::to_string(b));
      return std::nullopt;
    }
    case CommandType::turn: {
      if (busy()) return reject("busy: procedure in progress");
      if (state_.lock.engaged) {
        const bool plus = state_.lock.mode == Mode::parallel_plus;
        const auto& ch = state_.chambers;
        const bool release_on = ch[plus ? 1 : 0].command == ChamberCommand::vacuum &&
                                ch[plus ? 3 : 2].command == ChamberCommand::vacuum;
        if (!release_on) {
          emit("lock_hold", std::string(mode_name(state_.lock.mode)));
          return reject("locked: run release first");
        }
      }
      state_.macro = MacroKind::turn;
      state_.turn = TurnMacro{};
      state_.turn.direction = command.direction >= 0 ? 1 : -1;
      state_.turn.start_tick = state_.tick;
      state_.turn.start_heading = state_.pose.heading_deg;
      emit("turn_start", state_.turn.direction > 0 ? "+" : "-");
      if (state_.lock.engaged) {
        state_.turn.stage = 1;
        start_swing(-fold_sign(state_.lock));
      } else {
        // fold into a latched state first, no feet pinned
        state_.turn.stage = 0;
        state_.turn.target_sign = state_.fold_deg >= 0.0 ? 1 : -1;
        state_.turn.anchor = Diagonal::none;
        set_pair(state_.turn.target_sign > 0, ChamberCommand::vacuum);
        set_pair(state_.turn.target_sign < 0, ChamberCommand::ambient);
      }
      return std::nullopt;
    }
    case CommandType::grasp_trial: {
      GraspRecord rec;
      rec.tick = state_.tick;
      rec.object = command.object.value_or(config_.object);
      try {
        rec.trial =
            grasp_trial(config_.gripper, state_.fold_deg, state_.lock, rec.object, config_.grasp);
      } catch (const std::exception& e) {
        return reject(std::string("grasp: ") + e.what());
      }
      const auto& v = rec.trial.verdict;
      emit("grasp", std::string(v.success ? "success" : "failure") + ";" +
                        std::string(reason_name(v.reason)) + ";" + format_fixed(v.margin));
      grasps_.push_back(rec);
      return std::nullopt;
    }
  }
  return reject("unknown command");
}

void Simulator::start_swing(int target_sign) {
  TurnMacro& t = state_.turn;
  t.target_sign = target_sign;
  // the fold moves toward target_sign; pick the pinned diagonal whose
  // heading change has the commanded sign
  t.anchor = -target_sign == t.direction ? Diagonal::a : Diagonal::b;
  if (!diagonal_holds(config_.gait, t.anchor)) {
    for (int k = 0; k < 4; ++k) state_.chambers[k].command = ChamberCommand::ambient;
    finish_turn("turn_slip", "anchors cannot hold the fold");
    return;
  }
  set_pair(target_sign > 0, ChamberCommand::vacuum);
  set_pair(target_sign < 0, ChamberCommand::ambient);
  state_.pose.anchored = {};
  if (t.anchor == Diagonal::a) {
    state_.pose.anchored[0] = state_.pose.anchored[2] = true;
  } else {
    state_.pose.anchored[1] = state_.pose.anchored[3] = true;
  }
  emit("turn_swing", std::to_string(t.stage) + (t.anchor == Diagonal::a ? ";anchor=0,2" : ";anchor=1,3"));
}

void Simulator::finish_turn(const std::string& type, const std::string& detail) {
  state_.macro = MacroKind::none;
  state_.pose.anchored = {};
  const double elapsed = static_cast<double>(state_.tick - state_.turn.start_tick) * tick_s_;
  emit(type, detail + ";dheading=" + format_fixed(state_.turn.turned_deg) +
                 ";elapsed=" + format_fixed(elapsed));
}

void Simulator::update_fingers() {
  for (int f = 0; f < 4; ++f) {
    const double c1 = state_.chambers[finger_chamber(f, 1)].contraction;
    const double c2 = state_.chambers[finger_chamber(f, 2)].contraction;
    const HingeAngles h = hinge_targets(config_.gripper.calibration, c1, c2);
    state_.fingers[f].phi1_deg = h.phi1_deg;
    state_.fingers[f].phi2_deg = h.phi2_deg;
  }
}

void Simulator::advance_gait() {
  GaitMacro& g = state_.gait;
  const std::array<int, 4> ids{finger_chamber(g.a, 1), finger_chamber(g.a, 2),
                               finger_chamber(g.b, 1), finger_chamber(g.b, 2)};
  auto all_at = [&](double v) {
    for (int id : ids) {
      if (state_.chambers[id].contraction != v) return false;
    }
    return true;
  };
  const double reach = finger_fk(state_.fingers[g.a], config_.gripper.calibration).tip.x;
  if (!g.releasing) {
    if (!all_at(1.0)) return;
    g.anchored = pad_contact(state_.fingers[g.a], config_.gait) &&
                 pad_contact(state_.fingers[g.b], config_.gait) &&
                 foot_holds(config_.gait, g.a) && foot_holds(config_.gait, g.b);
    g.geometry = step_geometry(config_.gripper, state_.fold_deg, config_.gait, g.a, g.b);
    g.world_direction = rotate(g.geometry.direction, state_.pose.heading_deg);
    g.last_reach_mm = reach;
    g.releasing = true;
    for (int id : ids) state_.chambers[id].command = ChamberCommand::ambient;
    state_.pose.anchored = {};
    state_.pose.anchored[g.a] = state_.pose.anchored[g.b] = g.anchored;
    emit(g.anchored ? "gait_anchor" : "gait_slip", std::to_string(g.a) + "," + std::to_string(g.b));
    return;
  }
  if (g.anchored) {
    const double d = g.geometry.scale * (reach - g.last_reach_mm);
    state_.pose.x_mm += d * g.world_direction.x;
    state_.pose.y_mm += d * g.world_direction.y;
    g.travelled_mm += d;
  }
  g.last_reach_mm = reach;
  if (!all_at(0.0)) return;
  state_.pose.heading_deg =
      normalize_deg(state_.pose.heading_deg + g.geometry.yaw_deg_per_mm * g.travelled_mm);
  state_.pose.anchored = {};
  state_.macro = MacroKind::none;
  emit("gait_step_done", format_fixed(g.travelled_mm));
}

void Simulator::advance_turn(double dfold) {
  TurnMacro& t = state_.turn;
  const double dh = turn_heading_change(dfold, t.anchor);
  state_.pose.heading_deg = normalize_deg(state_.pose.heading_deg + dh);
  t.turned_deg += dh;
  if (!state_.lock.engaged || fold_sign(state_.lock) != t.target_sign) return;
  // latched on the target side: vent, the magnets hold the pose
  set_pair(t.target_sign > 0, ChamberCommand::ambient);
  if (t.stage < 2) {
    ++t.stage;
    start_swing(-t.target_sign);
  } else {
    finish_turn("turn_done", "ok");
  }
}

void Simulator::step() {
  for (auto& ch : state_.chambers) ch = chamber_step(ch, tick_s_);
  ++state_.tick;
  update_fingers();

  BodyActuation body;
  for (int k = 0; k < 4; ++k) body.chambers[k] = state_.chambers[k];
  const double before = state_.fold_deg;
  const BodyUpdate u = body_update(body, before, theta_max(), state_.lock, config_.lock);
  state_.fold_deg = u.fold_deg;
  state_.lock = u.lock;
  if (u.released_event) emit("lock_released", std::string(mode_name(state_.lock.mode)));
  if (u.engaged_event) emit("lock_engaged", std::string(mode_name(state_.lock.mode)));

  const ModeReading mode = mode_of(state_.fold_deg, state_.lock);
  if (mode.mode != state_.mode.mode || mode.transitional != state_.mode.transitional) {
    emit("mode", mode_label(mode));
  }
  state_.mode = mode;

  if (state_.macro == MacroKind::gait) {
    advance_gait();
  } else if (state_.macro == MacroKind::turn) {
    advance_turn(state_.fold_deg - before);
  }
}

void Simulator::run_ticks(std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) step();
}

GaitRun run_gait(Simulator& sim, const std::vector<Command>& script) {
  // a procedure never takes longer than this; guards against a stuck macro
  constexpr double kMaxProcedureS = 600.0;
  GaitRun run;
  run.samples.push_back({sim.time_s(), sim.state().pose});
  for (const Command& c : script) {
    if (c.type == CommandType::grasp_trial) {
      run.error = "run_gait: grasp trials are not gait commands";
      return run;
    }
    while (sim.busy()) sim.step();
    if (c.type == CommandType::chamber) {
      // a release before a turn; no procedure, so no sample
      if (auto r = sim.apply(c)) {
        run.error = *r;
        return run;
      }
      continue;
    }
    const std::size_t first_event = sim.events().size();
    if (auto r = sim.apply(c)) {
      run.error = *r;
      return run;
    }
    const auto limit = static_cast<std::int64_t>(kMaxProcedureS / sim.tick_s());
    std::int64_t n = 0;
    while (sim.busy() && n++ < limit) sim.step();
    if (sim.busy()) {
      run.error = "run_gait: procedure did not finish";
      return run;
    }
    run.samples.push_back({sim.time_s(), sim.state().pose});
    for (std::size_t i = first_event; i < sim.events().size(); ++i) {
      const std::string& type = sim.events()[i].type;
      if (type == "turn_slip" || type == "gait_slip") {
        run.error = type;
        return run;
      }
    }
  }
  return run;
}

}  // namespace auxsim
