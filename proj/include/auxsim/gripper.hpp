#pragma once

// Finger placement on the four-unit body.
//
// The gripper frame is the body frame rotated by 135 degrees about the body
// centre, so that in the neutral state the fingers point to 45, 135, 225 and
// 315 degrees and parallel_plus closes the pairs {0,1} and {2,3} along +-y.
// Finger i is mounted on unit i at local (0, -mount_depth), below the hinge
// chord on the outer side.

#include "auxsim/actuation.hpp"
#include "auxsim/geometry.hpp"

#include <array>

namespace auxsim {

inline constexpr double kGripperFrameRotationDeg = 135.0;

// Mount depth in units of l giving 150 degrees between fingers 0 and 3 in
// either folded state of the default pentagon.
inline constexpr double kMountDepthPerL = 4.36984;

struct GripperSpec {
  UnitGeometry geometry = UnitGeometry::make_default(108.0, 25.0);
  ActuatorCalibration calibration;
  std::array<double, 3> link_lengths_mm{40.0, 40.0, 40.0};
  double mount_depth_mm = kMountDepthPerL * 25.0;

  void validate() const;
};

struct FingerMount {
  Vec2 position;           // gripper frame, mm
  double bearing_deg = 0;  // direction from the gripper axis to the mount
  double radius_mm = 0;
};

std::array<FingerMount, 4> finger_mounts(const UnitGeometry& geometry, double fold_deg,
                                         double mount_depth_mm);

// Smallest angle between two bearings, [0, 180].
double bearing_gap_deg(double a, double b);

// The closing path drives both chambers of a finger together (c1 = c2 = c).
FingerState closing_pose(const ActuatorCalibration& cal, const std::array<double, 3>& links,
                         double c);

// Tip displacement toward the gripper axis along the closing path.
double inward_travel(const ActuatorCalibration& cal, const std::array<double, 3>& links,
                     double c);

struct TravelPeak {
  double c = 0.0;
  double travel_mm = 0.0;
};

TravelPeak max_inward_travel(const ActuatorCalibration& cal, const std::array<double, 3>& links);

}  // namespace auxsim
