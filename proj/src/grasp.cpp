#include "auxsim/grasp.hpp"

#include "auxsim/lp.hpp"

#include <algorithm>
#include <cmath>

namespace auxsim {

namespace {

constexpr double kMarginEps = 1e-9;

double first_crossing(const GripperSpec& g, double target, double c_peak) {
  constexpr int kScan = 200;
  double lo = 0.0;
  double hi = c_peak;
  for (int k = 1; k <= kScan; ++k) {
    const double c = c_peak * k / kScan;
    if (inward_travel(g.calibration, g.link_lengths_mm, c) >= target) {
      hi = c;
      break;
    }
    lo = c;
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inward_travel(g.calibration, g.link_lengths_mm, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

ObjectSpec ObjectSpec::circle(double radius_mm, double mass_kg, double mu) {
  ObjectSpec o;
  o.shape = Shape::circle;
  o.radius_mm = radius_mm;
  o.width_mm = 0.0;
  o.depth_mm = 0.0;
  o.mass_kg = mass_kg;
  o.mu = mu;
  return o;
}

ObjectSpec ObjectSpec::rectangle(double width_mm, double depth_mm, double mass_kg, double mu) {
  ObjectSpec o;
  o.shape = Shape::rectangle;
  o.width_mm = width_mm;
  o.depth_mm = depth_mm;
  o.mass_kg = mass_kg;
  o.mu = mu;
  return o;
}

void ObjectSpec::validate() const {
  if (shape == Shape::circle) {
    if (!(radius_mm > 0.0)) throw DomainError("object radius must be positive");
  } else if (!(width_mm > 0.0 && depth_mm > 0.0)) {
    throw DomainError("object width and depth must be positive");
  }
  if (!(mass_kg >= 0.0)) throw DomainError("object mass must be non-negative");
  if (!(mu >= 0.0)) throw DomainError("object mu must be non-negative");
}

void GraspParams::validate() const {
  if (cone_edges < 3) throw DomainError("cone_edges must be at least 3");
  if (!(gravity_n_per_kg >= 0.0)) throw DomainError("gravity must be non-negative");
}

std::string_view reason_name(GraspReason r) {
  switch (r) {
    case GraspReason::closure_ok:
      return "closure_ok";
    case GraspReason::slip:
      return "slip";
    case GraspReason::unreachable:
      return "unreachable";
    case GraspReason::insufficient_force:
      return "insufficient_force";
  }
  return "insufficient_force";
}

BoundaryHit boundary_along(const ObjectSpec& object, double bearing_deg) {
  const Vec2 u = unit_vector(bearing_deg);
  BoundaryHit hit;
  if (object.shape == Shape::circle) {
    hit.range_mm = object.radius_mm;
    hit.point = object.radius_mm * u;
    hit.normal = -1.0 * u;
    return hit;
  }
  const double hx = 0.5 * object.width_mm;
  const double hy = 0.5 * object.depth_mm;
  const double tx = std::abs(u.x) > 1e-15 ? hx / std::abs(u.x) : INFINITY;
  const double ty = std::abs(u.y) > 1e-15 ? hy / std::abs(u.y) : INFINITY;
  hit.range_mm = std::min(tx, ty);
  hit.point = hit.range_mm * u;
  const Vec2 side{u.x > 0.0 ? -1.0 : 1.0, 0.0};
  const Vec2 face{0.0, u.y > 0.0 ? -1.0 : 1.0};
  if (std::abs(tx - ty) <= 1e-9 * hit.range_mm) {
    const Vec2 s = side + face;
    hit.normal = (1.0 / norm(s)) * s;
  } else {
    hit.normal = tx < ty ? side : face;
  }
  return hit;
}

ContactSet contact_candidates(const GripperSpec& gripper, double fold_deg,
                              const ObjectSpec& object) {
  object.validate();
  const auto mounts = finger_mounts(gripper.geometry, fold_deg, gripper.mount_depth_mm);
  const TravelPeak peak = max_inward_travel(gripper.calibration, gripper.link_lengths_mm);
  const HingeAngles full = hinge_targets(gripper.calibration, 1.0, 1.0);
  ContactSet out;
  for (int i = 0; i < 4; ++i) {
    const FingerMount& m = mounts[i];
    const BoundaryHit hit = boundary_along(object, m.bearing_deg);
    const double needed = m.radius_mm - hit.range_mm;
    if (needed < 0.0 || needed > peak.travel_mm) {
      out.unreachable.push_back(i);
      continue;
    }
    const double c = needed == 0.0 ? 0.0 : first_crossing(gripper, needed, peak.c);
    const HingeAngles at = hinge_targets(gripper.calibration, c, c);
    const double deficit =
        (full.phi1_deg + full.phi2_deg) - (at.phi1_deg + at.phi2_deg);
    Contact k;
    k.finger = i;
    k.point = hit.point;
    k.normal = hit.normal;
    k.closing = -1.0 * unit_vector(m.bearing_deg);
    k.closure = c;
    k.max_force_n = blocked_force(gripper.calibration, ForcePoint::tip, 1.0, 1.0, deficit);
    out.contacts.push_back(k);
  }
  return out;
}

GraspVerdict force_closure(const std::vector<Contact>& contacts, const ObjectSpec& object,
                           const GraspParams& params) {
  if (contacts.size() < 2) throw DegenerateError("force_closure: fewer than two contacts");
  object.validate();
  params.validate();
  const std::size_t nc = contacts.size();
  const std::size_t ke = static_cast<std::size_t>(params.cone_edges);
  const std::size_t nvar = nc * ke + 1;
  const std::size_t s_col = nc * ke;

  // generator k of contact j: in-plane n + mu cos(phi) t, lift mu sin(phi)
  struct Gen {
    Vec2 planar;
    double lift;
  };
  std::vector<Gen> gens(nc * ke);
  for (std::size_t j = 0; j < nc; ++j) {
    const Vec2 n = contacts[j].normal;
    const Vec2 t{-n.y, n.x};
    for (std::size_t k = 0; k < ke; ++k) {
      const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(ke);
      gens[j * ke + k] = {n + object.mu * std::cos(phi) * t, object.mu * std::sin(phi)};
    }
  }

  LinearProgram lp;
  lp.objective.assign(nvar, 0.0);
  lp.objective[s_col] = 1.0;
  auto row = [&] { return LpRow{std::vector<double>(nvar, 0.0), RowSense::eq, 0.0}; };

  double f_ref = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    const Vec2 d = contacts[j].closing;
    const Vec2 dp{-d.y, d.x};
    LpRow along = row();
    LpRow cap = row();
    LpRow floor = row();
    for (std::size_t k = 0; k < ke; ++k) {
      const Gen& g = gens[j * ke + k];
      along.coeffs[j * ke + k] = dot(g.planar, dp);
      cap.coeffs[j * ke + k] = dot(g.planar, d);
      floor.coeffs[j * ke + k] = -dot(g.planar, d);
    }
    cap.sense = RowSense::le;
    cap.rhs = contacts[j].max_force_n;
    floor.sense = RowSense::le;
    floor.coeffs[s_col] = 1.0;
    lp.rows.push_back(along);
    lp.rows.push_back(cap);
    lp.rows.push_back(floor);
    f_ref = std::max(f_ref, contacts[j].max_force_n);
  }
  LpRow fx = row();
  LpRow fy = row();
  LpRow mz = row();
  LpRow lift = row();
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t k = 0; k < ke; ++k) {
      const Gen& g = gens[j * ke + k];
      fx.coeffs[j * ke + k] = g.planar.x;
      fy.coeffs[j * ke + k] = g.planar.y;
      mz.coeffs[j * ke + k] = cross(contacts[j].point, g.planar);
      lift.coeffs[j * ke + k] = g.lift;
    }
  }
  lift.sense = RowSense::ge;
  lift.rhs = object.mass_kg * params.gravity_n_per_kg;
  lp.rows.push_back(fx);
  lp.rows.push_back(fy);
  lp.rows.push_back(mz);
  lp.rows.push_back(lift);

  // symmetric scenes leave round-off residue (1e-14 of the row scale) where
  // coefficients are exactly zero; row scaling would amplify it
  for (LpRow& r : lp.rows) {
    double scale = 0.0;
    for (double a : r.coeffs) scale = std::max(scale, std::abs(a));
    for (double& a : r.coeffs) {
      if (std::abs(a) < 1e-12 * std::max(scale, 1.0)) a = 0.0;
    }
  }
  const LpResult res = solve_lp(lp);
  GraspVerdict v;
  v.margin = res.status == LpStatus::optimal && f_ref > 0.0 ? res.value / f_ref : -1.0;
  v.success = v.margin > kMarginEps;
  if (v.success) {
    v.reason = GraspReason::closure_ok;
    return v;
  }
  if (v.margin < 0.0) v.margin = -1.0;
  if (v.margin > 0.0) v.margin = 0.0;
  v.reason = GraspReason::insufficient_force;
  for (const Contact& c : contacts) {
    const Vec2 t{-c.normal.y, c.normal.x};
    if (std::abs(dot(c.closing, t)) > object.mu * dot(c.closing, c.normal) + 1e-12) {
      v.reason = GraspReason::slip;
      break;
    }
  }
  return v;
}

GraspTrial grasp_trial(const GripperSpec& gripper, double fold_deg, const LockState& lock,
                       const ObjectSpec& object, const GraspParams& params) {
  GraspTrial trial;
  trial.mode = mode_of(fold_deg, lock);
  trial.contacts = contact_candidates(gripper, fold_deg, object);
  if (trial.contacts.contacts.size() < 2) {
    trial.verdict = {false, GraspReason::unreachable, -1.0};
    return trial;
  }
  trial.verdict = force_closure(trial.contacts.contacts, object, params);
  return trial;
}

}  // namespace auxsim
