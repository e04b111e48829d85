#pragma once

// Magnet latch of the body and mode bookkeeping.
//
// The body chambers form two antagonistic pairs: b0+b2 drive the fold
// positive, b1+b3 negative. While unlocked the fold follows the drive
// quasi-statically, fold = theta_max * fold_drive. Near either folded state
// the magnets latch; only the opposing pair can pull the body back out.

#include "auxsim/actuation.hpp"

#include <array>
#include <string_view>

namespace auxsim {

enum class Mode { cross_link, parallel_plus, parallel_minus };

std::string_view mode_name(Mode m);

struct LockParams {
  double lock_threshold_deg = 1.0;
  // the latch re-arms only once the body has moved this far from a fold
  double release_threshold_deg = 5.0;
  double release_contraction = 0.8;

  void validate() const;
};

struct LockState {
  Mode mode = Mode::cross_link;  // last stable mode while in transit
  bool engaged = false;
  bool armed = true;
};

struct BodyActuation {
  std::array<ChamberState, 4> chambers{};

  double plus_drive() const;   // mean of b0, b2
  double minus_drive() const;  // mean of b1, b3
  double fold_drive() const { return plus_drive() - minus_drive(); }
};

LockState lock_update(double fold_deg, double theta_max_deg, LockState lock,
                      const LockParams& params);

struct ReleaseResult {
  LockState lock;
  double fold_drive = 0.0;
  bool released = false;
};

// Unlatches when both chambers of the pair opposing the current fold reach
// release_contraction. The wrong pair leaves the latch untouched.
ReleaseResult release(const BodyActuation& body, LockState lock, const LockParams& params);

// One quasi-static body update: release check, fold from drive, latch.
struct BodyUpdate {
  double fold_deg = 0.0;
  LockState lock;
  bool engaged_event = false;
  bool released_event = false;
};

BodyUpdate body_update(const BodyActuation& body, double fold_deg, double theta_max_deg,
                       LockState lock, const LockParams& params);

enum class GripperMode { cross_link, parallel };

struct ModeReading {
  GripperMode mode = GripperMode::cross_link;
  bool transitional = false;
};

ModeReading mode_of(double fold_deg, const LockState& lock);

}  // namespace auxsim
