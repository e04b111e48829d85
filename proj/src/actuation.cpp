#include "auxsim/actuation.hpp"

#include <algorithm>
#include <cmath>

namespace auxsim {

namespace {

constexpr double kSnap = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require_fraction(double c, const char* what) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError(std::string(what) + " must be in [0, 1]");
}

}  // namespace

std::string chamber_name(int id) {
  if (id < 0 || id >= kChamberCount) throw DomainError("chamber id out of range");
  if (id < 4) return "b" + std::to_string(id);
  const int f = (id - 4) / 2;
  const int c = (id - 4) % 2 + 1;
  return "f" + std::to_string(f) + ".c" + std::to_string(c);
}

std::optional<int> chamber_id(std::string_view name) {
  if (name.size() == 2 && name[0] == 'b' && name[1] >= '0' && name[1] <= '3') {
    return body_chamber(name[1] - '0');
  }
  if (name.size() == 5 && name[0] == 'f' && name[1] >= '0' && name[1] <= '3' && name[2] == '.' &&
      name[3] == 'c' && (name[4] == '1' || name[4] == '2')) {
    return finger_chamber(name[1] - '0', name[4] - '0');
  }
  return std::nullopt;
}

ChamberState chamber_step(ChamberState state, double dt_s) {
  if (!(dt_s > 0.0)) throw DomainError("chamber_step: dt must be positive");
  if (!(state.tau_s > 0.0)) throw DomainError("chamber_step: tau must be positive");
  const double target = state.command == ChamberCommand::vacuum ? 1.0 : 0.0;
  const double c = target + (clamp01(state.contraction) - target) * std::exp(-dt_s / state.tau_s);
  state.contraction = std::abs(c - target) < kSnap ? target : clamp01(c);
  return state;
}

void ActuatorCalibration::validate() const {
  for (double v : {phi2_solo_max_deg, phi1_solo_max_deg, phi1_both_max_deg, phi2_both_max_deg,
                   f_tip_max_n, f_stage1_max_n, tau_s, deficit_ref_deg}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("calibration values must be positive");
  }
  if (phi1_both_max_deg < phi1_solo_max_deg) {
    throw DomainError("calibration: phi1_both_max below phi1_solo_max");
  }
}

HingeAngles hinge_targets(const ActuatorCalibration& cal, double c1, double c2) {
  require_fraction(c1, "c1");
  require_fraction(c2, "c2");
  HingeAngles out;
  out.phi2_deg = c1 * cal.phi2_solo_max_deg;
  out.phi1_deg =
      c2 * (cal.phi1_solo_max_deg + (cal.phi1_both_max_deg - cal.phi1_solo_max_deg) * c1);
  return out;
}

FingerMarkers finger_fk(const FingerState& finger, const ActuatorCalibration& cal) {
  if (!(finger.phi1_deg >= 0.0 && finger.phi1_deg <= cal.phi1_both_max_deg)) {
    throw LimitError("finger_fk: phi1 outside [0, " + std::to_string(cal.phi1_both_max_deg) + "]");
  }
  if (!(finger.phi2_deg >= 0.0 && finger.phi2_deg <= cal.phi2_both_max_deg)) {
    throw LimitError("finger_fk: phi2 outside [0, " + std::to_string(cal.phi2_both_max_deg) + "]");
  }
  const auto& len = finger.link_lengths_mm;
  const Vec2 proximal{len[0], 0.0};
  FingerMarkers m;
  m.mid = proximal + len[1] * unit_vector(finger.phi1_deg);
  m.tip_orientation_deg = finger.phi1_deg + finger.phi2_deg;
  m.tip = m.mid + len[2] * unit_vector(m.tip_orientation_deg);
  return m;
}

double blocked_force(const ActuatorCalibration& cal, ForcePoint point, double c1, double c2,
                     double deficit_deg) {
  require_fraction(c1, "c1");
  require_fraction(c2, "c2");
  if (!(deficit_deg >= 0.0)) throw DomainError("blocked_force: deficit must be non-negative");
  // stage 1 sits behind the proximal hinge only; the tip sees both chambers
  // in series and is pushed by whichever is stronger
  const double driving = point == ForcePoint::stage1 ? c2 : std::max(c1, c2);
  const double f_max = point == ForcePoint::stage1 ? cal.f_stage1_max_n : cal.f_tip_max_n;
  const double scale = std::min(driving, deficit_deg / cal.deficit_ref_deg);
  return f_max * std::clamp(scale, 0.0, 1.0);
}

}  // namespace auxsim
