#pragma once

// Friction-anchored crawling. The robot frame is the gripper frame; heading
// is its world rotation. Fingers lie horizontally along their bearing and
// bend in the vertical plane, so the horizontal reach of a finger is its
// mount-frame tip x.
//
// A step contracts two adjacent fingers until the pads touch the ground,
// then vents them. While venting, the pinned pads push the body away from
// the pair. The translation is the least-squares fit that keeps both tips in
// place: along -(u_a + u_b)/|u_a + u_b|, scaled by cos(half the angle
// between the two bearings).

#include "auxsim/gripper.hpp"

#include <array>

namespace auxsim {

struct GaitParams {
  double contact_angle_deg = 200.0;
  double mass_kg = 0.2;
  double recovery_force_n = 0.2;
  std::array<double, 4> foot_mu{0.6, 0.6, 0.6, 0.6};
  double gravity_n_per_kg = 9.81;

  void validate() const;
};

struct QuadrupedPose {
  double x_mm = 0.0;
  double y_mm = 0.0;
  double heading_deg = 0.0;
  std::array<bool, 4> anchored{};

  friend bool operator==(const QuadrupedPose&, const QuadrupedPose&) = default;
};

// Closed at the threshold.
bool pad_contact(const FingerState& finger, const GaitParams& params);

bool adjacent_pair(int a, int b);

// mu * (quarter weight) >= recovery force.
bool foot_holds(const GaitParams& params, int foot);

struct StepGeometry {
  Vec2 direction;            // robot frame, unit
  double scale = 0.0;        // body travel per mm of tip reach change
  double yaw_deg_per_mm = 0.0;
};

StepGeometry step_geometry(const GripperSpec& gripper, double fold_deg, const GaitParams& params,
                           int a, int b);

// Horizontal tip reach along the closing path at contraction c.
double tip_reach(const GripperSpec& gripper, double c);

struct StepResult {
  QuadrupedPose pose;
  double displacement_mm = 0.0;
  bool slipped = false;
};

// One complete contract / vent cycle of the pair (a, b).
StepResult crawl_step(const QuadrupedPose& pose, const GripperSpec& gripper, double fold_deg,
                      const GaitParams& params, int a, int b);

// Heading change while the body folds by dfold with one diagonal pinned.
// Diagonal A holds units 0 and 2 (they rotate +fold/4 in the body frame),
// diagonal B holds units 1 and 3.
enum class Diagonal { none, a, b };

double turn_heading_change(double dfold_deg, Diagonal anchored);

}  // namespace auxsim
