#pragma once

#include "hopfharm/common.hpp"

namespace hopfharm {

inline constexpr double kBoundaryTol = 1e-9;
inline constexpr double kConvexityTol = 1e-12;

// Simple closed polygon, positively oriented, vertices listed once
// (no repeated first/last vertex).
struct JordanDomain {
  std::vector<Point2> boundary;
  std::string name;
};

enum class PointLocation { inside, boundary, outside };

inline double signed_area(const std::vector<Point2>& poly) {
  require(poly.size() >= 3, "polygon needs at least 3 vertices");
  KahanSum s;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) s.add(cross(poly[i], poly[(i + 1) % n]));
  return 0.5 * s.value();
}

inline double signed_area(const JordanDomain& d) { return signed_area(d.boundary); }

inline double polygon_diameter(const std::vector<Point2>& poly) {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (auto& p : poly) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

inline double polygon_perimeter(const std::vector<Point2>& poly) {
  KahanSum s;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) s.add(std::abs(poly[(i + 1) % n] - poly[i]));
  return s.value();
}

// Distance from p to segment [a,b]; also reports the parameter t of the
// closest point a + t(b-a).
inline double point_segment_distance(Point2 p, Point2 a, Point2 b, double* t_out = nullptr) {
  cplx ab = b - a;
  double len2 = std::norm(ab);
  double t = len2 > 0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return std::abs(p - (a + t * ab));
}

struct BoundaryProjection {
  double distance;
  double arclength;   // cumulative arclength of the closest point
  Point2 point;       // closest point on the polygon boundary
  int segment;        // index i of segment [v_i, v_{i+1}]
};

inline BoundaryProjection project_to_boundary(const std::vector<Point2>& poly, Point2 p) {
  size_t n = poly.size();
  BoundaryProjection best{std::numeric_limits<double>::infinity(), 0.0, poly[0], 0};
  double s_acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    Point2 a = poly[i], b = poly[(i + 1) % n];
    double t;
    double d = point_segment_distance(p, a, b, &t);
    double seg_len = std::abs(b - a);
    if (d < best.distance) best = {d, s_acc + t * seg_len, a + t * (b - a), int(i)};
    s_acc += seg_len;
  }
  return best;
}

inline BoundaryProjection project_to_boundary(const JordanDomain& d, Point2 p) {
  return project_to_boundary(d.boundary, p);
}

// Winding-number point location. Points within tol of an edge classify as
// boundary; otherwise nonzero winding means inside.
inline PointLocation locate_point(const std::vector<Point2>& poly, Point2 p,
                                  double tol = kBoundaryTol) {
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= tol)
      return PointLocation::boundary;
  }
  int winding = 0;
  for (size_t i = 0; i < n; ++i) {
    Point2 a = poly[i], b = poly[(i + 1) % n];
    if (a.imag() <= p.imag()) {
      if (b.imag() > p.imag() && cross(b - a, p - a) > 0) ++winding;
    } else {
      if (b.imag() <= p.imag() && cross(b - a, p - a) < 0) --winding;
    }
  }
  return winding != 0 ? PointLocation::inside : PointLocation::outside;
}

inline PointLocation locate_point(const JordanDomain& d, Point2 p, double tol = kBoundaryTol) {
  return locate_point(d.boundary, p, tol);
}

inline bool contains_point(const JordanDomain& d, Point2 p, double tol = kBoundaryTol) {
  return locate_point(d, p, tol) != PointLocation::outside;
}

inline bool strictly_inside(const JordanDomain& d, Point2 p, double tol = kBoundaryTol) {
  return locate_point(d, p, tol) == PointLocation::inside;
}

// Convexity via consecutive edge cross products; collinear vertices pass.
// tol is absolute on the cross products, scaled by the caller if needed.
inline bool is_convex(const std::vector<Point2>& poly, double tol = kConvexityTol) {
  size_t n = poly.size();
  if (n < 3) return false;
  double scale = sqr(polygon_diameter(poly));
  for (size_t i = 0; i < n; ++i) {
    Point2 a = poly[i], b = poly[(i + 1) % n], c = poly[(i + 2) % n];
    if (cross(b - a, c - b) < -tol * scale) return false;
  }
  return true;
}

inline bool is_convex(const JordanDomain& d, double tol = kConvexityTol) {
  return is_convex(d.boundary, tol);
}

namespace detail {

inline bool segments_properly_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  double d1 = cross(b - a, c - a);
  double d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c);
  double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

}  // namespace detail

// Structural validation: finite coordinates, no duplicate consecutive
// vertices, positive area, no proper self-intersection between
// non-adjacent edges. Quadratic scan; inputs here stay below a few
// thousand vertices.
inline void validate_jordan(const JordanDomain& d) {
  const auto& p = d.boundary;
  require(p.size() >= 3, "domain '" + d.name + "': needs at least 3 boundary vertices");
  size_t n = p.size();
  double diam = polygon_diameter(p);
  require(std::isfinite(diam) && diam > 0, "domain '" + d.name + "': degenerate boundary");
  for (size_t i = 0; i < n; ++i) {
    require(std::isfinite(p[i].real()) && std::isfinite(p[i].imag()),
            "domain '" + d.name + "': non-finite vertex");
    require(std::abs(p[(i + 1) % n] - p[i]) > 1e-14 * diam,
            "domain '" + d.name + "': repeated consecutive vertex");
  }
  require(signed_area(p) > 0, "domain '" + d.name + "': boundary must be positively oriented");
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      require(!detail::segments_properly_intersect(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]),
              "domain '" + d.name + "': self-intersecting boundary");
    }
  }
}

inline JordanDomain reversed(const JordanDomain& d) {
  JordanDomain r = d;
  std::reverse(r.boundary.begin(), r.boundary.end());
  return r;
}

inline JordanDomain regular_polygon(Point2 center, double radius, int n,
                                    const std::string& name = "disk", double phase = 0.0) {
  JordanDomain d;
  d.name = name;
  d.boundary.reserve(n);
  for (int k = 0; k < n; ++k) {
    double t = phase + 2.0 * kPi * k / n;
    d.boundary.push_back(center + radius * cplx(std::cos(t), std::sin(t)));
  }
  return d;
}

// Sutherland-Hodgman clip of an arbitrary polygon against one convex
// polygon. Adequate when the true intersection is connected, which holds
// for the local probes this library performs.
inline std::vector<Point2> clip_polygon_convex(std::vector<Point2> subject,
                                               const std::vector<Point2>& convex_clip) {
  size_t m = convex_clip.size();
  for (size_t i = 0; i < m && !subject.empty(); ++i) {
    Point2 a = convex_clip[i], b = convex_clip[(i + 1) % m];
    cplx edge = b - a;
    std::vector<Point2> out;
    size_t n = subject.size();
    for (size_t j = 0; j < n; ++j) {
      Point2 p = subject[j], q = subject[(j + 1) % n];
      double sp = cross(edge, p - a);
      double sq = cross(edge, q - a);
      bool in_p = sp >= 0, in_q = sq >= 0;
      if (in_p) out.push_back(p);
      if (in_p != in_q) {
        double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

// Drops near-duplicate and collinear-sliver vertices so convexity tests on
// clipped polygons are not dominated by clipping noise.
inline std::vector<Point2> simplify_polygon(const std::vector<Point2>& poly, double tol) {
  std::vector<Point2> out;
  for (auto& p : poly) {
    if (out.empty() || std::abs(p - out.back()) > tol) out.push_back(p);
  }
  while (out.size() > 1 && std::abs(out.front() - out.back()) <= tol) out.pop_back();
  return out;
}

// Local convexity probe: intersect a small disk centered at a boundary
// point with the closed domain and test convexity of the result. The disk
// is discretized as a 128-gon.
inline bool somewhere_convex_probe(const JordanDomain& d, Point2 y0, double eps) {
  require(eps > 0, "probe radius must be positive");
  auto proj = project_to_boundary(d, y0);
  double diam = polygon_diameter(d.boundary);
  require(proj.distance <= 1e-6 * diam + kBoundaryTol,
          "probe center must lie on the domain boundary");
  auto disk = regular_polygon(y0, eps, 128).boundary;
  auto clipped = clip_polygon_convex(d.boundary, disk);
  clipped = simplify_polygon(clipped, 1e-12 * diam + 1e-15);
  if (clipped.size() < 3) return false;
  // Clipping noise scales with eps, not with the domain diameter.
  double scale = sqr(4.0 * eps);
  size_t n = clipped.size();
  for (size_t i = 0; i < n; ++i) {
    Point2 a = clipped[i], b = clipped[(i + 1) % n], c = clipped[(i + 2) % n];
    if (cross(b - a, c - b) < -1e-9 * scale) return false;
  }
  return true;
}

}  // namespace hopfharm
