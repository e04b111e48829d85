#include "auxsim/gripper.hpp"

#include <cmath>

namespace auxsim {

void GripperSpec::validate() const {
  geometry.validate();
  calibration.validate();
  for (double l : link_lengths_mm) {
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("finger link lengths must be positive");
  }
  if (!(mount_depth_mm >= 0.0) || !std::isfinite(mount_depth_mm)) {
    throw DomainError("mount depth must be non-negative");
  }
}

std::array<FingerMount, 4> finger_mounts(const UnitGeometry& geometry, double fold_deg,
                                         double mount_depth_mm) {
  const BodyPose pose = body_fk(geometry, fold_deg);
  const Vec2 centre = pose.center(geometry);
  std::array<FingerMount, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 body = pose.units[i].apply({0.0, -mount_depth_mm});
    const Vec2 g = rotate(body - centre, kGripperFrameRotationDeg);
    out[i] = {g, bearing_deg(g), norm(g)};
  }
  return out;
}

double bearing_gap_deg(double a, double b) {
  const double d = normalize_deg(a - b);
  return d > 180.0 ? 360.0 - d : d;
}

FingerState closing_pose(const ActuatorCalibration& cal, const std::array<double, 3>& links,
                         double c) {
  const HingeAngles h = hinge_targets(cal, c, c);
  return FingerState{h.phi1_deg, h.phi2_deg, links};
}

double inward_travel(const ActuatorCalibration& cal, const std::array<double, 3>& links,
                     double c) {
  return finger_fk(closing_pose(cal, links, c), cal).tip.y;
}

TravelPeak max_inward_travel(const ActuatorCalibration& cal, const std::array<double, 3>& links) {
  // coarse scan then golden-section refinement around the best sample
  constexpr int kSamples = 400;
  TravelPeak best{0.0, inward_travel(cal, links, 0.0)};
  for (int k = 1; k <= kSamples; ++k) {
    const double c = static_cast<double>(k) / kSamples;
    const double y = inward_travel(cal, links, c);
    if (y > best.travel_mm) best = {c, y};
  }
  double lo = std::max(0.0, best.c - 1.0 / kSamples);
  double hi = std::min(1.0, best.c + 1.0 / kSamples);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double a = hi - r * (hi - lo);
    const double b = lo + r * (hi - lo);
    if (inward_travel(cal, links, a) > inward_travel(cal, links, b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  const double c = 0.5 * (lo + hi);
  const double y = inward_travel(cal, links, c);
  if (y > best.travel_mm) best = {c, y};
  return best;
}

}  // namespace auxsim
