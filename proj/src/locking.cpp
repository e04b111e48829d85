#include "auxsim/locking.hpp"

#include <algorithm>
#include <cmath>

namespace auxsim {

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::cross_link:
      return "cross_link";
    case Mode::parallel_plus:
      return "parallel_plus";
    case Mode::parallel_minus:
      return "parallel_minus";
  }
  return "cross_link";
}

void LockParams::validate() const {
  if (!(lock_threshold_deg > 0.0)) throw DomainError("lock threshold must be positive");
  if (!(release_threshold_deg > lock_threshold_deg)) {
    throw DomainError("release threshold must exceed lock threshold");
  }
  if (!(release_contraction > 0.0 && release_contraction <= 1.0)) {
    throw DomainError("release contraction must be in (0, 1]");
  }
}

double BodyActuation::plus_drive() const {
  return 0.5 * (chambers[0].contraction + chambers[2].contraction);
}

double BodyActuation::minus_drive() const {
  return 0.5 * (chambers[1].contraction + chambers[3].contraction);
}

LockState lock_update(double fold_deg, double theta_max_deg, LockState lock,
                      const LockParams& params) {
  const double distance = std::abs(theta_max_deg - std::abs(fold_deg));
  if (lock.engaged) return lock;
  if (!lock.armed) {
    if (distance > params.release_threshold_deg) lock.armed = true;
  }
  if (lock.armed && distance < params.lock_threshold_deg) {
    lock.engaged = true;
    lock.mode = fold_deg > 0.0 ? Mode::parallel_plus : Mode::parallel_minus;
    return lock;
  }
  if (fold_deg == 0.0) lock.mode = Mode::cross_link;
  return lock;
}

ReleaseResult release(const BodyActuation& body, LockState lock, const LockParams& params) {
  ReleaseResult out{lock, body.fold_drive(), false};
  if (!lock.engaged) return out;
  const bool plus = lock.mode == Mode::parallel_plus;
  const auto& ch = body.chambers;
  const double a = plus ? ch[1].contraction : ch[0].contraction;
  const double b = plus ? ch[3].contraction : ch[2].contraction;
  if (a >= params.release_contraction && b >= params.release_contraction) {
    out.lock.engaged = false;
    out.lock.armed = false;
    out.released = true;
  }
  return out;
}

BodyUpdate body_update(const BodyActuation& body, double fold_deg, double theta_max_deg,
                       LockState lock, const LockParams& params) {
  BodyUpdate out{fold_deg, lock, false, false};
  if (lock.engaged) {
    const ReleaseResult r = release(body, lock, params);
    if (!r.released) {
      out.fold_deg = lock.mode == Mode::parallel_plus ? theta_max_deg : -theta_max_deg;
      return out;
    }
    out.lock = r.lock;
    out.released_event = true;
  }
  out.fold_deg = std::clamp(theta_max_deg * body.fold_drive(), -theta_max_deg, theta_max_deg);
  out.lock = lock_update(out.fold_deg, theta_max_deg, out.lock, params);
  if (out.lock.engaged) {
    out.engaged_event = true;
    out.fold_deg = out.lock.mode == Mode::parallel_plus ? theta_max_deg : -theta_max_deg;
  }
  return out;
}

ModeReading mode_of(double fold_deg, const LockState& lock) {
  if (lock.engaged) return {GripperMode::parallel, false};
  if (fold_deg == 0.0) return {GripperMode::cross_link, false};
  const GripperMode last =
      lock.mode == Mode::cross_link ? GripperMode::cross_link : GripperMode::parallel;
  return {last, true};
}

}  // namespace auxsim
