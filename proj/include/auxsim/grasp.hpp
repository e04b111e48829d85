#pragma once

// Planar grasp evaluation in the gripper frame. The object cross-section is
// centred on the gripper axis; gravity acts along -z and has to be carried
// by friction at the pads.
//
// Each finger closes along its own bearing toward the axis and can only push
// along that direction, so the in-plane part of its contact force is fixed
// in direction. A contact whose closing direction falls outside the friction
// cone of the face it touches cannot push at all without sliding off.

#include "auxsim/gripper.hpp"
#include "auxsim/locking.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace auxsim {

struct DegenerateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Shape { circle, rectangle };

struct ObjectSpec {
  Shape shape = Shape::rectangle;
  double radius_mm = 0.0;
  double width_mm = 300.0;  // along gripper x
  double depth_mm = 100.0;  // along gripper y
  double mass_kg = 1.0;
  double mu = 0.6;

  static ObjectSpec circle(double radius_mm, double mass_kg, double mu);
  static ObjectSpec rectangle(double width_mm, double depth_mm, double mass_kg, double mu);
  void validate() const;
};

struct GraspParams {
  int cone_edges = 8;
  double gravity_n_per_kg = 9.81;

  void validate() const;
};

// Distance from the axis to the object boundary along a bearing, and the
// inward normal there.
struct BoundaryHit {
  double range_mm = 0.0;
  Vec2 point;
  Vec2 normal;
};

BoundaryHit boundary_along(const ObjectSpec& object, double bearing_deg);

struct Contact {
  int finger = 0;
  Vec2 point;
  Vec2 normal;   // inward, unit
  Vec2 closing;  // push direction, unit
  double closure = 0.0;     // chamber contraction at touch
  double max_force_n = 0.0;
};

struct ContactSet {
  std::vector<Contact> contacts;
  std::vector<int> unreachable;  // fingers that hit their limit first
};

ContactSet contact_candidates(const GripperSpec& gripper, double fold_deg,
                              const ObjectSpec& object);

enum class GraspReason { closure_ok, slip, unreachable, insufficient_force };

std::string_view reason_name(GraspReason r);

struct GraspVerdict {
  bool success = false;
  GraspReason reason = GraspReason::insufficient_force;
  double margin = -1.0;
};

// Throws DegenerateError for fewer than two contacts.
GraspVerdict force_closure(const std::vector<Contact>& contacts, const ObjectSpec& object,
                           const GraspParams& params);

struct GraspTrial {
  GraspVerdict verdict;
  ModeReading mode;
  ContactSet contacts;
};

GraspTrial grasp_trial(const GripperSpec& gripper, double fold_deg, const LockState& lock,
                       const ObjectSpec& object, const GraspParams& params);

}  // namespace auxsim
