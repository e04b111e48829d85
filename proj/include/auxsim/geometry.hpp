#pragma once

// Kinematics of the four-unit rotating body and of periodic rotating-unit
// lattices. All angles at this interface are degrees, lengths millimetres.
//
// Two angles describe the body:
//   fold     signed, in [-theta_max, +theta_max]; 0 is the symmetric middle
//            state, the sign selects one of the two folded states.
//   opening  the hinge gap angle, in [0, 360 - 2*alpha]. opening = 0 and
//            opening = theta_max are the two contact limits.
// They are related by opening = (theta_max + fold) / 2.

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace auxsim {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct ClosureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kClosureToleranceMm = 1e-9;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Wraps to [0, 360).
double normalize_deg(double deg);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);
double distance(Vec2 a, Vec2 b);
Vec2 rotate(Vec2 a, double deg);
Vec2 unit_vector(double deg);
// Bearing of a in degrees, [0, 360).
double bearing_deg(Vec2 a);

// Planar rigid transform: local point p maps to position + R(orientation) p.
struct Pose2 {
  Vec2 position;
  double orientation_deg = 0.0;

  Vec2 apply(Vec2 local) const { return position + rotate(local, orientation_deg); }
};

using Polygon = std::vector<Vec2>;

double signed_area(std::span<const Vec2> poly);
bool is_simple_polygon(std::span<const Vec2> poly);
bool is_convex_polygon(std::span<const Vec2> poly);

// True iff two convex polygons overlap with positive area. Touching edges or
// vertices (penetration below tol) do not count.
bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b, double tol = 1e-9);

// One rigid rotating unit. The outline is counter-clockwise in the unit frame;
// hinge_prev connects to the previous unit of the loop, hinge_next to the next.
struct UnitGeometry {
  double alpha_deg = 108.0;
  double l_mm = 25.0;
  Polygon outline;
  std::size_t hinge_prev = 0;
  std::size_t hinge_next = 0;

  // Default outline for alpha in [90, 180): hinge chord of length l along
  // the local x axis centred on the origin, outer edges of length l, and for
  // alpha > 90 a shallow apex on the hole side (+y). alpha = 90 is the square.
  static UnitGeometry make_default(double alpha_deg, double l_mm);

  // Throws DomainError when an invariant fails.
  void validate() const;

  double theta_max() const;
  Vec2 centroid() const;
};

struct AngleRange {
  double low = 0.0;
  double high = 0.0;
};

double unit_separation(double l_mm, double theta_deg);
AngleRange theta_range(double alpha_deg);

double opening_from_fold(const UnitGeometry& geometry, double fold_deg);
double fold_from_opening(const UnitGeometry& geometry, double opening_deg);

// Poses of the four units of the body. Unit 0 sits at the body origin;
// units 0 and 2 rotate by +fold/4, units 1 and 3 by -fold/4. Hinge k joins
// unit k and unit k+1 (mod 4).
struct BodyPose {
  std::array<Pose2, 4> units;
  double closure_residual_mm = 0.0;

  Polygon world_outline(const UnitGeometry& geometry, std::size_t unit) const;
  Vec2 hinge(const UnitGeometry& geometry, std::size_t k) const;
  // Centre of the hinge loop.
  Vec2 center(const UnitGeometry& geometry) const;
};

// Range- and closure-checked forward kinematics.
BodyPose body_fk(const UnitGeometry& geometry, double fold_deg);

// Same placement without the range check; used for contact probing outside
// the admissible range.
BodyPose place_body(const UnitGeometry& geometry, double fold_deg);

// Half the distance between the free ends of the two outer edges bounding the
// gap at hinge 1. Equals l*sin(opening/2) when those edges have length l.
double measured_separation(const UnitGeometry& geometry, const BodyPose& pose);

// Reflects a body pose across the body-frame y axis, the symmetry axis of
// unit 0 in the neutral state (maps units 1 <-> 3).
BodyPose mirror_body(const UnitGeometry& geometry, const BodyPose& pose);

bool self_contact(const UnitGeometry& geometry, double opening_deg);

struct LatticeSpec {
  UnitGeometry geometry;
  int rows = 2;
  int cols = 2;

  void validate() const;
};

// Periodic lattice of 4-unit cells.
struct LatticeCell {
  std::array<Vec2, 4> unit_centroids;
  Vec2 first_vector;
  Vec2 second_vector;
};

LatticeCell lattice_cell(const UnitGeometry& geometry, double opening_deg);

// Unit-centroid extents along the two cell diagonals (1,1)/sqrt2, (-1,1)/sqrt2.
struct LatticeDimensions {
  double first = 0.0;
  double second = 0.0;
};

LatticeDimensions lattice_dimensions(const LatticeSpec& lattice, double opening_deg);

// -(eps_second / eps_first) by central difference around opening_deg.
double poisson_ratio(const LatticeSpec& lattice, double opening_deg, double dopening_deg);

}  // namespace auxsim
