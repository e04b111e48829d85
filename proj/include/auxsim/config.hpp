#pragma once

// The full parameter ledger of one simulated robot. Every value the model
// needs and no measurement pins down has a default here.

#include "auxsim/gait.hpp"
#include "auxsim/grasp.hpp"
#include "auxsim/locking.hpp"

namespace auxsim {

struct Config {
  GripperSpec gripper;
  LockParams lock;
  GaitParams gait;
  GraspParams grasp;
  ObjectSpec object;  // used by grasp trials that name no object
  double gravity_n_per_kg = 9.81;

  // Copies shared environment values into the module parameter blocks.
  void sync();
  void validate() const;

  friend bool operator==(const Config& a, const Config& b);
};

}  // namespace auxsim
