#include "auxsim/config.hpp"

namespace auxsim {

void Config::sync() {
  gait.gravity_n_per_kg = gravity_n_per_kg;
  grasp.gravity_n_per_kg = gravity_n_per_kg;
}

void Config::validate() const {
  gripper.validate();
  lock.validate();
  gait.validate();
  grasp.validate();
  object.validate();
  if (!(gravity_n_per_kg >= 0.0)) throw DomainError("gravity must be non-negative");
}

bool operator==(const Config& a, const Config& b) {
  const auto& ga = a.gripper;
  const auto& gb = b.gripper;
  const auto& ca = ga.calibration;
  const auto& cb = gb.calibration;
  return ga.geometry.alpha_deg == gb.geometry.alpha_deg && ga.geometry.l_mm == gb.geometry.l_mm &&
         ga.geometry.outline == gb.geometry.outline &&
         ga.geometry.hinge_prev == gb.geometry.hinge_prev &&
         ga.geometry.hinge_next == gb.geometry.hinge_next &&
         ca.phi2_solo_max_deg == cb.phi2_solo_max_deg &&
         ca.phi1_solo_max_deg == cb.phi1_solo_max_deg &&
         ca.phi1_both_max_deg == cb.phi1_both_max_deg &&
         ca.phi2_both_max_deg == cb.phi2_both_max_deg && ca.f_tip_max_n == cb.f_tip_max_n &&
         ca.f_stage1_max_n == cb.f_stage1_max_n && ca.tau_s == cb.tau_s &&
         ca.deficit_ref_deg == cb.deficit_ref_deg && ga.link_lengths_mm == gb.link_lengths_mm &&
         ga.mount_depth_mm == gb.mount_depth_mm &&
         a.lock.lock_threshold_deg == b.lock.lock_threshold_deg &&
         a.lock.release_threshold_deg == b.lock.release_threshold_deg &&
         a.lock.release_contraction == b.lock.release_contraction &&
         a.gait.contact_angle_deg == b.gait.contact_angle_deg &&
         a.gait.mass_kg == b.gait.mass_kg && a.gait.recovery_force_n == b.gait.recovery_force_n &&
         a.gait.foot_mu == b.gait.foot_mu && a.grasp.cone_edges == b.grasp.cone_edges &&
         a.object.shape == b.object.shape && a.object.radius_mm == b.object.radius_mm &&
         a.object.width_mm == b.object.width_mm && a.object.depth_mm == b.object.depth_mm &&
         a.object.mass_kg == b.object.mass_kg && a.object.mu == b.object.mu &&
         a.gravity_n_per_kg == b.gravity_n_per_kg;
}

}  // namespace auxsim
