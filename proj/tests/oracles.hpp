#pragma once

// Independent reference computations shared by the unit and acceptance
// suites. Nothing here calls the library's geometry beyond reading the unit
// outline.

#include "auxsim/geometry.hpp"

#include <algorithm>
#include <complex>
#include <utility>
#include <vector>

namespace auxsim::oracle {

using cplx = std::complex<double>;

// Independent placement with complex arithmetic: unit i is rotated by
// 90*i +/- fold/4 and translated so its previous hinge meets the previous
// unit's next hinge.
struct OracleBody {
  std::vector<std::vector<cplx>> units;
};

inline OracleBody oracle_body(const UnitGeometry& g, double fold) {
  std::vector<cplx> local;
  for (const Vec2& p : g.outline) local.emplace_back(p.x, p.y);
  OracleBody out;
  cplx offset{0.0, 0.0};
  for (int i = 0; i < 4; ++i) {
    const double ang = (90.0 * i + ((i % 2) ? -fold / 4.0 : fold / 4.0)) * kPi / 180.0;
    const cplx rot = std::polar(1.0, ang);
    if (i > 0) {
      const cplx joint = out.units[i - 1][g.hinge_next];
      offset = joint - rot * local[g.hinge_prev];
    }
    std::vector<cplx> placed;
    for (const cplx& p : local) placed.push_back(offset + rot * p);
    out.units.push_back(placed);
  }
  return out;
}

inline cplx oracle_centroid(const std::vector<cplx>& poly) {
  double area = 0.0;
  cplx c{0.0, 0.0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const cplx a = poly[i];
    const cplx b = poly[(i + 1) % poly.size()];
    const double w = a.real() * b.imag() - a.imag() * b.real();
    area += w;
    c += w * (a + b);
  }
  return c / (3.0 * area);
}

// Brute force: place every unit of a rows x cols lattice explicitly, take
// the min/max of the centroids along the two cell diagonals.
inline std::pair<double, double> oracle_lattice_dims(const UnitGeometry& g, double opening, int rows,
                                              int cols) {
  const OracleBody b = oracle_body(g, 2.0 * opening - (360.0 - 2.0 * g.alpha_deg));
  std::vector<cplx> cen;
  for (const auto& u : b.units) cen.push_back(oracle_centroid(u));
  const cplx l1 = 2.0 * (cen[1] - cen[0]);
  const cplx l2 = 2.0 * (cen[3] - cen[0]);
  const cplx e1 = std::polar(1.0, kPi / 4.0);
  const cplx e2 = std::polar(1.0, 3.0 * kPi / 4.0);
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      for (const cplx& p0 : cen) {
        const cplx p = p0 + static_cast<double>(r) * l2 + static_cast<double>(c) * l1;
        const double a = (p * std::conj(e1)).real();
        const double b2 = (p * std::conj(e2)).real();
        lo1 = std::min(lo1, a);
        hi1 = std::max(hi1, a);
        lo2 = std::min(lo2, b2);
        hi2 = std::max(hi2, b2);
      }
    }
  }
  return {hi1 - lo1, hi2 - lo2};
}

inline double oracle_poisson(const UnitGeometry& g, double opening, double d, int rows, int cols) {
  const auto m = oracle_lattice_dims(g, opening - d, rows, cols);
  const auto c = oracle_lattice_dims(g, opening, rows, cols);
  const auto p = oracle_lattice_dims(g, opening + d, rows, cols);
  const double e1 = (p.first - m.first) / c.first;
  const double e2 = (p.second - m.second) / c.second;
  return -(e2 / e1);
}

// Area of the intersection of two convex polygons by Sutherland-Hodgman
// clipping. Orientation of either input does not matter.
inline double oracle_overlap_area(std::vector<cplx> subject, std::vector<cplx> clip) {
  auto area = [](const std::vector<cplx>& p) {
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const cplx u = p[i], v = p[(i + 1) % p.size()];
      a += u.real() * v.imag() - u.imag() * v.real();
    }
    return 0.5 * a;
  };
  if (area(clip) < 0) std::reverse(clip.begin(), clip.end());
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const cplx a = clip[e], b = clip[(e + 1) % clip.size()];
    auto side = [&](cplx p) { return ((b - a) * std::conj(p - a)).imag() * -1.0; };
    std::vector<cplx> out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const cplx p = subject[i], q = subject[(i + 1) % subject.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) out.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    subject = std::move(out);
  }
  return subject.size() < 3 ? 0.0 : std::abs(area(subject));
}

// Units overlap with positive area at this hinge opening.
inline bool oracle_self_contact(const UnitGeometry& g, double opening, double min_area = 1e-9) {
  const OracleBody b = oracle_body(g, 2.0 * opening - (360.0 - 2.0 * g.alpha_deg));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (oracle_overlap_area(b.units[i], b.units[j]) > min_area) return true;
    }
  }
  return false;
}

}  // namespace auxsim::oracle
