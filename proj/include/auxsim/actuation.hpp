#pragma once

// Vacuum chambers and the two-hinge finger.
//
// Each finger has two chambers: c1 drives the distal hinge (fingertip bend),
// c2 the proximal hinge. The finger lies along +x of its mount frame when
// straight and bends toward +y.

#include "auxsim/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace auxsim {

struct LimitError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

enum class ChamberCommand { ambient, vacuum };

// Body chambers b0..b3 are ids 0..3; finger i chamber j (j = 1, 2) is
// 4 + 2*i + (j - 1).
inline constexpr int kChamberCount = 12;

std::string chamber_name(int id);
std::optional<int> chamber_id(std::string_view name);
inline constexpr int body_chamber(int k) { return k; }
inline constexpr int finger_chamber(int finger, int chamber) { return 4 + 2 * finger + (chamber - 1); }

struct ChamberState {
  int id = 0;
  ChamberCommand command = ChamberCommand::ambient;
  double contraction = 0.0;
  double tau_s = 0.18;
};

// Exact first-order lag toward 1 (vacuum) or 0 (ambient).
ChamberState chamber_step(ChamberState state, double dt_s);

struct ActuatorCalibration {
  double phi2_solo_max_deg = 105.0;
  double phi1_solo_max_deg = 120.0;
  double phi1_both_max_deg = 144.0;
  double phi2_both_max_deg = 105.0;
  double f_tip_max_n = 15.04;
  double f_stage1_max_n = 11.13;
  double tau_s = 0.18;
  double deficit_ref_deg = 10.0;

  void validate() const;
};

struct HingeAngles {
  double phi1_deg = 0.0;
  double phi2_deg = 0.0;
};

HingeAngles hinge_targets(const ActuatorCalibration& cal, double c1, double c2);

struct FingerState {
  double phi1_deg = 0.0;
  double phi2_deg = 0.0;
  std::array<double, 3> link_lengths_mm{40.0, 40.0, 40.0};
};

struct FingerMarkers {
  Vec2 mid;  // distal hinge, end of the middle link
  Vec2 tip;
  double tip_orientation_deg = 0.0;
};

// Mount-frame marker positions. Throws LimitError outside [0, max].
FingerMarkers finger_fk(const FingerState& finger, const ActuatorCalibration& cal);

enum class ForcePoint { stage1, tip };

// Force perpendicular to the finger at the measurement point when the hinge
// is held short of its target by deficit_deg.
double blocked_force(const ActuatorCalibration& cal, ForcePoint point, double c1, double c2,
                     double deficit_deg);

}  // namespace auxsim
