#include "auxsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace auxsim {

namespace {

constexpr double kAreaEps = 1e-12;

std::string fmt_deg(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Proper segment intersection, excluding shared endpoints.
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > kAreaEps && d2 < -kAreaEps) || (d1 < -kAreaEps && d2 > kAreaEps)) &&
         ((d3 > kAreaEps && d4 < -kAreaEps) || (d3 < -kAreaEps && d4 > kAreaEps));
}

// Smallest overlap of the two projections over the edge normals of poly.
double min_axis_overlap(std::span<const Vec2> poly, std::span<const Vec2> a,
                        std::span<const Vec2> b) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = poly[(i + 1) % n] - poly[i];
    const double len = norm(e);
    if (len < kAreaEps) continue;
    const Vec2 axis{-e.y / len, e.x / len};
    double amin = std::numeric_limits<double>::infinity();
    double amax = -amin;
    double bmin = amin;
    double bmax = -amin;
    for (const Vec2& p : a) {
      amin = std::min(amin, dot(p, axis));
      amax = std::max(amax, dot(p, axis));
    }
    for (const Vec2& p : b) {
      bmin = std::min(bmin, dot(p, axis));
      bmax = std::max(bmax, dot(p, axis));
    }
    best = std::min(best, std::min(amax, bmax) - std::max(amin, bmin));
  }
  return best;
}

double unit_rotation(std::size_t unit, double fold_deg) {
  return (unit % 2 == 0 ? 1.0 : -1.0) * fold_deg / 4.0;
}

}  // namespace

double normalize_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

Vec2 rotate(Vec2 a, double deg) {
  const double r = deg_to_rad(deg);
  const double c = std::cos(r);
  const double s = std::sin(r);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

Vec2 unit_vector(double deg) {
  const double r = deg_to_rad(deg);
  return {std::cos(r), std::sin(r)};
}

double bearing_deg(Vec2 a) { return normalize_deg(rad_to_deg(std::atan2(a.y, a.x))); }

double signed_area(std::span<const Vec2> poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) acc += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * acc;
}

bool is_simple_polygon(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(poly[i], poly[(i + 1) % n]) < kAreaEps) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return std::abs(signed_area(poly)) > kAreaEps;
}

bool is_convex_polygon(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  const double orientation = signed_area(poly) > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = poly[(i + 1) % n] - poly[i];
    const Vec2 e1 = poly[(i + 2) % n] - poly[(i + 1) % n];
    if (orientation * cross(e0, e1) < -kAreaEps) return false;
  }
  return true;
}

bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b, double tol) {
  const double overlap = std::min(min_axis_overlap(a, a, b), min_axis_overlap(b, a, b));
  return overlap > tol;
}

UnitGeometry UnitGeometry::make_default(double alpha_deg, double l_mm) {
  if (!(alpha_deg >= 90.0 && alpha_deg < 180.0)) {
    throw DomainError("default outline needs alpha in [90, 180), got " + fmt_deg(alpha_deg));
  }
  if (!(l_mm > 0.0)) throw DomainError("unit width must be positive");

  // The chord between the hinges sits u inside each hinge wedge, which lets
  // the closed loop of four units sweep the whole 360 - 2*alpha opening.
  const double u = (alpha_deg - 90.0) / 2.0;
  const double half = l_mm / 2.0;
  const Vec2 p{-half, 0.0};
  const Vec2 q{half, 0.0};
  const Vec2 z = p + l_mm * unit_vector(u - alpha_deg);
  const Vec2 y{-z.x, z.y};

  UnitGeometry g;
  g.alpha_deg = alpha_deg;
  g.l_mm = l_mm;
  g.outline = {p, z, y, q};
  if (u > 0.0) g.outline.push_back({0.0, half * std::tan(deg_to_rad(u))});
  g.hinge_prev = 0;
  g.hinge_next = 3;
  return g;
}

void UnitGeometry::validate() const {
  if (!(alpha_deg > 0.0 && alpha_deg < 180.0)) {
    throw DomainError("alpha must lie in (0, 180), got " + fmt_deg(alpha_deg));
  }
  if (!(l_mm > 0.0)) throw DomainError("unit width must be positive");
  if (!is_simple_polygon(outline)) throw DomainError("unit outline is not a simple polygon");
  if (hinge_prev >= outline.size() || hinge_next >= outline.size()) {
    throw DomainError("hinge vertex index outside the outline");
  }
  if (hinge_prev == hinge_next || distance(outline[hinge_prev], outline[hinge_next]) < kAreaEps) {
    throw DomainError("hinge vertices must be distinct");
  }
}

double UnitGeometry::theta_max() const { return theta_range(alpha_deg).high; }

Vec2 UnitGeometry::centroid() const {
  const double area = signed_area(outline);
  Vec2 c;
  const std::size_t n = outline.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = outline[i];
    const Vec2 b = outline[(i + 1) % n];
    const double w = cross(a, b);
    c = c + w * (a + b);
  }
  return (1.0 / (6.0 * area)) * c;
}

double unit_separation(double l_mm, double theta_deg) {
  if (!(l_mm > 0.0)) throw DomainError("unit_separation: l must be positive");
  if (!(theta_deg >= 0.0 && theta_deg <= 360.0)) {
    throw DomainError("unit_separation: theta outside [0, 360]: " + fmt_deg(theta_deg));
  }
  return l_mm * std::sin(deg_to_rad(theta_deg / 2.0));
}

AngleRange theta_range(double alpha_deg) {
  if (!(alpha_deg > 0.0 && alpha_deg < 180.0)) {
    throw DomainError("theta_range: alpha outside (0, 180): " + fmt_deg(alpha_deg));
  }
  return {0.0, 360.0 - 2.0 * alpha_deg};
}

double opening_from_fold(const UnitGeometry& geometry, double fold_deg) {
  return (geometry.theta_max() + fold_deg) / 2.0;
}

double fold_from_opening(const UnitGeometry& geometry, double opening_deg) {
  return 2.0 * opening_deg - geometry.theta_max();
}

Polygon BodyPose::world_outline(const UnitGeometry& geometry, std::size_t unit) const {
  Polygon out;
  out.reserve(geometry.outline.size());
  for (const Vec2& p : geometry.outline) out.push_back(units[unit].apply(p));
  return out;
}

Vec2 BodyPose::hinge(const UnitGeometry& geometry, std::size_t k) const {
  return units[k % 4].apply(geometry.outline[geometry.hinge_next]);
}

Vec2 BodyPose::center(const UnitGeometry& geometry) const {
  Vec2 c;
  for (std::size_t k = 0; k < 4; ++k) c = c + hinge(geometry, k);
  return 0.25 * c;
}

BodyPose place_body(const UnitGeometry& geometry, double fold_deg) {
  BodyPose pose;
  pose.units[0] = {{0.0, 0.0}, unit_rotation(0, fold_deg)};
  const Vec2 prev_local = geometry.outline[geometry.hinge_prev];
  for (std::size_t i = 1; i < 4; ++i) {
    const Vec2 joint = pose.hinge(geometry, i - 1);
    const double orientation = 90.0 * static_cast<double>(i) + unit_rotation(i, fold_deg);
    pose.units[i] = {joint - rotate(prev_local, orientation), orientation};
  }
  pose.closure_residual_mm = distance(pose.hinge(geometry, 3), pose.units[0].apply(prev_local));
  return pose;
}

BodyPose body_fk(const UnitGeometry& geometry, double fold_deg) {
  const double tmax = geometry.theta_max();
  if (!(std::abs(fold_deg) <= tmax)) {
    throw RangeError("body_fk: fold " + fmt_deg(fold_deg) + " outside [-" + fmt_deg(tmax) + ", " +
                     fmt_deg(tmax) + "]");
  }
  BodyPose pose = place_body(geometry, fold_deg);
  if (!(pose.closure_residual_mm < kClosureToleranceMm)) {
    throw ClosureError("body_fk: loop closure residual " + fmt_deg(pose.closure_residual_mm) +
                       " mm");
  }
  return pose;
}

double measured_separation(const UnitGeometry& geometry, const BodyPose& pose) {
  // At hinge 1 the outer edge of unit 1 ends at the vertex before hinge_next,
  // the outer edge of unit 2 at the vertex after hinge_prev.
  const std::size_t n = geometry.outline.size();
  const Vec2 end1 = pose.units[1].apply(geometry.outline[(geometry.hinge_next + n - 1) % n]);
  const Vec2 end2 = pose.units[2].apply(geometry.outline[(geometry.hinge_prev + 1) % n]);
  return 0.5 * distance(end1, end2);
}

BodyPose mirror_body(const UnitGeometry& /*geometry*/, const BodyPose& pose) {
  static constexpr std::array<std::size_t, 4> image{0, 3, 2, 1};
  BodyPose out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Pose2& src = pose.units[i];
    // A symmetric outline reflected about its own axis maps onto itself with
    // the hinge roles exchanged, so the image is again a proper pose.
    out.units[image[i]] = {{-src.position.x, src.position.y}, normalize_deg(-src.orientation_deg)};
  }
  out.closure_residual_mm = pose.closure_residual_mm;
  return out;
}

bool self_contact(const UnitGeometry& geometry, double opening_deg) {
  const BodyPose pose = place_body(geometry, fold_from_opening(geometry, opening_deg));
  std::array<Polygon, 4> outlines;
  for (std::size_t i = 0; i < 4; ++i) outlines[i] = pose.world_outline(geometry, i);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (convex_overlap(outlines[i], outlines[j])) return true;
    }
  }
  return false;
}

void LatticeSpec::validate() const {
  geometry.validate();
  if (rows < 2 || cols < 2) throw DomainError("lattice needs rows >= 2 and cols >= 2");
}

LatticeCell lattice_cell(const UnitGeometry& geometry, double opening_deg) {
  const BodyPose pose = place_body(geometry, fold_from_opening(geometry, opening_deg));
  const Vec2 local_centroid = geometry.centroid();
  LatticeCell cell;
  for (std::size_t i = 0; i < 4; ++i) cell.unit_centroids[i] = pose.units[i].apply(local_centroid);
  cell.first_vector = 2.0 * (cell.unit_centroids[1] - cell.unit_centroids[0]);
  cell.second_vector = 2.0 * (cell.unit_centroids[3] - cell.unit_centroids[0]);
  return cell;
}

LatticeDimensions lattice_dimensions(const LatticeSpec& lattice, double opening_deg) {
  const LatticeCell cell = lattice_cell(lattice.geometry, opening_deg);
  const double r = 1.0 / std::sqrt(2.0);
  const std::array<Vec2, 2> axes{Vec2{r, r}, Vec2{-r, r}};
  std::array<double, 2> extent{};
  for (std::size_t a = 0; a < 2; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vec2& c : cell.unit_centroids) {
      lo = std::min(lo, dot(c, axes[a]));
      hi = std::max(hi, dot(c, axes[a]));
    }
    // Projections are linear in the cell indices, so the extremes of the
    // full lattice are reached at the corner cells.
    extent[a] = (hi - lo) + (lattice.cols - 1) * std::abs(dot(cell.first_vector, axes[a])) +
                (lattice.rows - 1) * std::abs(dot(cell.second_vector, axes[a]));
  }
  return {extent[0], extent[1]};
}

double poisson_ratio(const LatticeSpec& lattice, double opening_deg, double dopening_deg) {
  lattice.validate();
  if (!(dopening_deg > 0.0)) throw DomainError("poisson_ratio: step must be positive");
  const double tmax = lattice.geometry.theta_max();
  const double lo = opening_deg - dopening_deg;
  const double hi = opening_deg + dopening_deg;
  if (!(lo > 0.0 && hi < tmax)) {
    throw RangeError("poisson_ratio: stencil [" + fmt_deg(lo) + ", " + fmt_deg(hi) +
                     "] leaves the open range (0, " + fmt_deg(tmax) + ")");
  }
  const LatticeDimensions mid = lattice_dimensions(lattice, opening_deg);
  const LatticeDimensions minus = lattice_dimensions(lattice, lo);
  const LatticeDimensions plus = lattice_dimensions(lattice, hi);
  const double eps_first = (plus.first - minus.first) / mid.first;
  const double eps_second = (plus.second - minus.second) / mid.second;
  const double curv_first = (plus.first - 2.0 * mid.first + minus.first) / mid.first;
  const double curv_second = (plus.second - 2.0 * mid.second + minus.second) / mid.second;
  // At a stationary configuration (fully open squares) both strains are
  // second order in the step; the ratio is then the ratio of curvatures.
  if (std::abs(eps_first) < std::abs(curv_first)) {
    if (std::abs(curv_first) < 1e-300) throw DomainError("poisson_ratio: degenerate lattice");
    return -(curv_second / curv_first);
  }
  return -(eps_second / eps_first);
}

}  // namespace auxsim
