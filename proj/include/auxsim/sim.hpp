#pragma once

// Fixed-step simulation of the whole robot: 12 chambers, the latched body,
// four fingers and the planar pose of the quadruped. Commands apply at tick
// boundaries; a tick advances chambers, then fingers, then the body, then
// any running gait or turn procedure.

#include "auxsim/config.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace auxsim {

enum class CommandType { chamber, gait_step, turn, grasp_trial };

struct Command {
  CommandType type = CommandType::chamber;
  int chamber = 0;
  ChamberCommand action = ChamberCommand::ambient;
  std::array<int, 2> pair{0, 1};
  int direction = 1;  // +1 or -1
  std::optional<ObjectSpec> object;

  static Command set_chamber(int id, ChamberCommand action);
  static Command gait_step(int a, int b);
  static Command turn(int direction);
  static Command grasp(std::optional<ObjectSpec> object = std::nullopt);

  friend bool operator==(const Command& a, const Command& b);
};

struct SimEvent {
  std::int64_t tick = 0;
  std::string type;
  std::string detail;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct GraspRecord {
  std::int64_t tick = 0;
  ObjectSpec object;
  GraspTrial trial;
};

enum class MacroKind { none, gait, turn };

struct GaitMacro {
  int a = 0;
  int b = 1;
  bool releasing = false;
  bool anchored = false;
  double last_reach_mm = 0.0;
  double travelled_mm = 0.0;
  StepGeometry geometry;
  Vec2 world_direction;
};

struct TurnMacro {
  int direction = 1;
  int stage = 0;  // 0 pre-fold, 1 and 2 the swings
  int target_sign = 1;
  Diagonal anchor = Diagonal::none;
  std::int64_t start_tick = 0;
  double start_heading = 0.0;
  double turned_deg = 0.0;
};

struct SimState {
  std::int64_t tick = 0;
  std::array<ChamberState, kChamberCount> chambers{};
  double fold_deg = 0.0;
  LockState lock;
  std::array<FingerState, 4> fingers{};
  QuadrupedPose pose;
  ModeReading mode;
  MacroKind macro = MacroKind::none;
  GaitMacro gait;
  TurnMacro turn;
};

class Simulator {
 public:
  explicit Simulator(Config config, double tick_s = 0.005);

  // Applies a command at the current tick boundary. Returns the rejection
  // reason, or nothing when accepted.
  std::optional<std::string> apply(const Command& command);
  void step();
  void run_ticks(std::int64_t n);

  const SimState& state() const { return state_; }
  const Config& config() const { return config_; }
  double tick_s() const { return tick_s_; }
  double time_s() const { return static_cast<double>(state_.tick) * tick_s_; }
  double theta_max() const { return config_.gripper.geometry.theta_max(); }
  const std::vector<SimEvent>& events() const { return events_; }
  const std::vector<GraspRecord>& grasps() const { return grasps_; }
  bool busy() const { return state_.macro != MacroKind::none; }

  // Events emitted at exactly this tick.
  std::vector<SimEvent> events_at(std::int64_t tick) const;

 private:
  void emit(std::string type, std::string detail = {});
  void update_fingers();
  void start_swing(int target_sign);
  void finish_turn(const std::string& type, const std::string& detail);
  void advance_gait();
  void advance_turn(double dfold);
  void set_pair(bool plus, ChamberCommand c);

  Config config_;
  double tick_s_;
  SimState state_;
  std::vector<SimEvent> events_;
  std::vector<GraspRecord> grasps_;
};

struct TrajectorySample {
  double t_s = 0.0;
  QuadrupedPose pose;
};

struct GaitRun {
  std::vector<TrajectorySample> samples;
  std::optional<std::string> error;
};

// Runs gait steps and turns back to back, sampling the pose before the
// first and after each one. Chamber commands in between (the release before
// a turn from a latched pose) apply without a sample. Stops at the first
// rejected or failed item.
GaitRun run_gait(Simulator& sim, const std::vector<Command>& script);

std::string format_fixed(double v, int decimals = 6);

// "parallel", "cross_link", or "transitional:<last stable>".
std::string mode_label(const ModeReading& m);

}  // namespace auxsim
