#include "auxsim/gait.hpp"

#include <cmath>

namespace auxsim {

void GaitParams::validate() const {
  if (!(contact_angle_deg > 0.0)) throw DomainError("contact angle must be positive");
  if (!(mass_kg >= 0.0)) throw DomainError("mass must be non-negative");
  if (!(recovery_force_n >= 0.0)) throw DomainError("recovery force must be non-negative");
  for (double mu : foot_mu) {
    if (!(mu >= 0.0)) throw DomainError("foot mu must be non-negative");
  }
  if (!(gravity_n_per_kg >= 0.0)) throw DomainError("gravity must be non-negative");
}

bool pad_contact(const FingerState& finger, const GaitParams& params) {
  return finger.phi1_deg + finger.phi2_deg >= params.contact_angle_deg;
}

bool adjacent_pair(int a, int b) {
  if (a < 0 || a > 3 || b < 0 || b > 3) return false;
  return (a + 1) % 4 == b || (b + 1) % 4 == a;
}

bool foot_holds(const GaitParams& params, int foot) {
  const double normal = 0.25 * params.mass_kg * params.gravity_n_per_kg;
  return params.foot_mu[foot] * normal >= params.recovery_force_n;
}

double tip_reach(const GripperSpec& gripper, double c) {
  const FingerState f = closing_pose(gripper.calibration, gripper.link_lengths_mm, c);
  return finger_fk(f, gripper.calibration).tip.x;
}

StepGeometry step_geometry(const GripperSpec& gripper, double fold_deg, const GaitParams& params,
                           int a, int b) {
  if (!adjacent_pair(a, b)) throw DomainError("gait step needs two adjacent fingers");
  const auto mounts = finger_mounts(gripper.geometry, fold_deg, gripper.mount_depth_mm);
  const Vec2 sum = unit_vector(mounts[a].bearing_deg) + unit_vector(mounts[b].bearing_deg);
  StepGeometry g;
  g.direction = (-1.0 / norm(sum)) * sum;
  g.scale = 0.5 * norm(sum);

  // The two idle feet drag along the ground. Unequal friction gives a net
  // couple about the centre; the body yaws by (travel / R) * tau / (F R).
  const double reach = tip_reach(gripper, 0.0);
  const double normal = 0.25 * params.mass_kg * params.gravity_n_per_kg;
  double torque = 0.0;
  double drag = 0.0;
  double radius = 0.0;
  for (int j = 0; j < 4; ++j) {
    if (j == a || j == b) continue;
    const Vec2 foot = mounts[j].position + reach * unit_vector(mounts[j].bearing_deg);
    const double f = params.foot_mu[j] * normal;
    torque += cross(foot, -f * g.direction);
    drag += f;
    radius += 0.5 * norm(foot);
  }
  g.yaw_deg_per_mm = drag > 0.0 ? rad_to_deg(torque / (drag * radius * radius)) : 0.0;
  return g;
}

StepResult crawl_step(const QuadrupedPose& pose, const GripperSpec& gripper, double fold_deg,
                      const GaitParams& params, int a, int b) {
  const StepGeometry g = step_geometry(gripper, fold_deg, params, a, b);
  StepResult out;
  out.pose = pose;
  out.pose.anchored = {};
  const FingerState contracted = closing_pose(gripper.calibration, gripper.link_lengths_mm, 1.0);
  if (!pad_contact(contracted, params) || !foot_holds(params, a) || !foot_holds(params, b)) {
    out.slipped = true;
    return out;
  }
  const double travel = tip_reach(gripper, 0.0) - tip_reach(gripper, 1.0);
  out.displacement_mm = g.scale * travel;
  const Vec2 world = rotate(g.direction, pose.heading_deg);
  out.pose.x_mm += out.displacement_mm * world.x;
  out.pose.y_mm += out.displacement_mm * world.y;
  out.pose.heading_deg = normalize_deg(pose.heading_deg + g.yaw_deg_per_mm * out.displacement_mm);
  return out;
}

double turn_heading_change(double dfold_deg, Diagonal anchored) {
  switch (anchored) {
    case Diagonal::a:
      return -0.25 * dfold_deg;
    case Diagonal::b:
      return 0.25 * dfold_deg;
    case Diagonal::none:
      return 0.0;
  }
  return 0.0;
}

}  // namespace auxsim
