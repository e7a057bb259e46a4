#pragma once

#include <functional>

#include "hopfharm/boundary.hpp"

namespace hopfharm {

// Closed-form map with exact Wirtinger derivatives supplied as callbacks.
struct ClosedFormMap {
  std::function<cplx(Point2)> eval;
  std::function<cplx(Point2)> d_z;
  std::function<cplx(Point2)> d_zbar;
  JordanDomain domain;
  std::string name;
  std::string branch_note;
};

// Central-difference Wirtinger derivatives, for validating the callbacks.
inline std::pair<cplx, cplx> numeric_wirtinger(const std::function<cplx(Point2)>& f, Point2 z,
                                               double h = 1e-6) {
  cplx fx = (f(z + cplx{h, 0}) - f(z - cplx{h, 0})) / (2 * h);
  cplx fy = (f(z + cplx{0, h}) - f(z - cplx{0, h})) / (2 * h);
  return {0.5 * (fx - cplx{0, 1} * fy), 0.5 * (fx + cplx{0, 1} * fy)};
}

// Square root with the branch cut along the positive real axis:
// arg in [0, 2pi), so sqrt(conj(z)) = -conj(sqrt(z)) off the cut.
inline cplx sqrt_cut_positive_axis(cplx z) {
  double rho = std::abs(z);
  double th = std::arg(z);
  if (th < 0) th += 2 * kPi;
  return std::sqrt(rho) * cplx{std::cos(th / 2), std::sin(th / 2)};
}

// Lipschitz map of the closed unit disk squeezing the radial segment
// [0,1] to the origin; its Hopf product is the polynomial -(4+9z)/4.
inline ClosedFormMap butterfly_map(int boundary_samples = 256) {
  ClosedFormMap m;
  m.eval = [](Point2 z) {
    cplx w = sqrt_cut_positive_axis(z);
    cplx w3 = w * w * w;
    return cplx{2.0 * w3.imag(), 2.0 * z.imag()};
  };
  m.d_z = [](Point2 z) { return 1.0 - 1.5 * cplx{0, 1} * sqrt_cut_positive_axis(z); };
  m.d_zbar = [](Point2 z) {
    return -1.0 + 1.5 * cplx{0, 1} * std::conj(sqrt_cut_positive_axis(z));
  };
  m.domain = regular_polygon({0, 0}, 1.0, boundary_samples, "butterfly-source");
  m.name = "butterfly";
  m.branch_note = "derivatives jump across the segment [0,1]; the map itself is continuous";
  return m;
}

// Piecewise map of a horizontal box: identity-modulus rotation for x<=0,
// e^{iy} cosh x for x>=0. C^{1,1} across the seam, Hopf product -1/4.
inline ClosedFormMap strip_map(double ell = 1.0, double T = 1.2) {
  require(ell > 0 && T > 0, "strip map: box extents must be positive");
  ClosedFormMap m;
  m.eval = [](Point2 z) {
    cplx e{std::cos(z.imag()), std::sin(z.imag())};
    return z.real() >= 0 ? e * std::cosh(z.real()) : e;
  };
  m.d_z = [](Point2 z) {
    cplx e{std::cos(z.imag()), std::sin(z.imag())};
    return z.real() >= 0 ? 0.5 * e * std::exp(z.real()) : 0.5 * e;
  };
  m.d_zbar = [](Point2 z) {
    cplx e{std::cos(z.imag()), std::sin(z.imag())};
    return z.real() >= 0 ? -0.5 * e * std::exp(-z.real()) : -0.5 * e;
  };
  m.domain.name = "strip-box";
  m.domain.boundary = {{-ell, -kPi / 2}, {T, -kPi / 2}, {T, kPi / 2}, {-ell, kPi / 2}};
  m.name = "strip";
  m.branch_note = "second derivatives jump across the seam x=0";
  return m;
}

// Control map with a genuinely non-holomorphic Hopf product.
inline ClosedFormMap control_map(int boundary_samples = 256) {
  ClosedFormMap m;
  m.eval = [](Point2 z) { return z + 0.3 * z * std::conj(z) * std::conj(z); };
  m.d_z = [](Point2 z) { return 1.0 + 0.3 * std::conj(z) * std::conj(z); };
  m.d_zbar = [](Point2 z) { return 0.6 * z * std::conj(z); };
  m.domain = regular_polygon({0, 0}, 1.0, boundary_samples, "control-source");
  m.name = "control";
  m.branch_note = "smooth; Hopf product is deliberately non-holomorphic";
  return m;
}

// Moebius automorphism of the unit disk moving 0 to -a.
inline ClosedFormMap mobius_disk_map(cplx a, int boundary_samples = 256) {
  require(std::abs(a) < 1, "mobius map: |a| must be below 1");
  ClosedFormMap m;
  m.eval = [a](Point2 z) { return (z - a) / (1.0 - std::conj(a) * z); };
  m.d_z = [a](Point2 z) {
    cplx den = 1.0 - std::conj(a) * z;
    return (1.0 - std::norm(a)) / (den * den);
  };
  m.d_zbar = [](Point2) { return cplx{0, 0}; };
  m.domain = regular_polygon({0, 0}, 1.0, boundary_samples, "mobius-source");
  m.name = "mobius";
  m.branch_note = "conformal";
  return m;
}

// Radial diffeomorphism of the unit disk, z(1+c|z|^2)/(1+c).
inline ClosedFormMap radial_stretch_map(double c, int boundary_samples = 256) {
  require(c > -0.5 && c != 0, "radial stretch: parameter out of range");
  ClosedFormMap m;
  m.eval = [c](Point2 z) { return z * (1.0 + c * std::norm(z)) / (1.0 + c); };
  m.d_z = [c](Point2 z) { return (1.0 + 2.0 * c * std::norm(z)) / (1.0 + c); };
  m.d_zbar = [c](Point2 z) { return c * z * z / (1.0 + c); };
  m.domain = regular_polygon({0, 0}, 1.0, boundary_samples, "radial-source");
  m.name = "radial-stretch";
  m.branch_note = "smooth diffeomorphism of the disk";
  return m;
}

// Real-linear map w -> w + mu*conj(w); orientation preserving for |mu|<1.
inline ClosedFormMap antilinear_blend_map(cplx mu, const JordanDomain& domain) {
  require(std::abs(mu) < 1, "antilinear blend: |mu| must be below 1");
  ClosedFormMap m;
  m.eval = [mu](Point2 w) { return w + mu * std::conj(w); };
  m.d_z = [mu](Point2) { return cplx{1, 0}; };
  m.d_zbar = [mu](Point2) { return mu; };
  m.domain = domain;
  m.name = "antilinear-blend";
  m.branch_note = "real-linear";
  return m;
}

// Composition outer(inner(z)) with chain-rule derivatives. The composed
// domain is inner.domain.
inline ClosedFormMap compose(const ClosedFormMap& outer, const ClosedFormMap& inner) {
  ClosedFormMap m;
  m.eval = [o = outer.eval, i = inner.eval](Point2 z) { return o(i(z)); };
  m.d_z = [odz = outer.d_z, odzb = outer.d_zbar, i = inner.eval, idz = inner.d_z,
           idzb = inner.d_zbar](Point2 z) {
    cplx w = i(z);
    return odz(w) * idz(z) + odzb(w) * std::conj(idzb(z));
  };
  m.d_zbar = [odz = outer.d_z, odzb = outer.d_zbar, i = inner.eval, idz = inner.d_z,
              idzb = inner.d_zbar](Point2 z) {
    cplx w = i(z);
    return odz(w) * idzb(z) + odzb(w) * std::conj(idz(z));
  };
  m.domain = inner.domain;
  m.name = outer.name + " o " + inner.name;
  m.branch_note = inner.branch_note + " composed into " + outer.branch_note;
  return m;
}

// ---------------------------------------------------------------------
// Faithful sampling of maps with derivative seams. The butterfly folds
// [0,1] to a point with a sqrt-type blowup at the origin; the strip
// glues two formulas along x = 0. Triangulations that resolve those
// lines recover the map's convergence order; unconstrained meshes stall
// near the seams.
// ---------------------------------------------------------------------
struct SamplingRecipe {
  JordanDomain domain;
  std::vector<std::vector<Point2>> constraints;
};

// Cut polyline along [0,1] graded quadratically toward the branch point
// at the origin, so local triangle size tracks the curvature blowup.
inline std::vector<Point2> butterfly_fold_polyline(double edge) {
  require(edge > 0, "fold polyline: edge must be positive");
  int K = std::max(8, int(std::ceil(2.0 / edge)));
  std::vector<Point2> pts;
  pts.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    double t = double(k) / K;
    pts.push_back({t * t, 0.0});
  }
  return pts;
}

// Strip box with the seam endpoints present as polygon vertices, so the
// seam constraint meets the boundary at existing chain points.
inline JordanDomain strip_seam_domain(double ell = 1.0, double T = 1.2) {
  require(ell > 0 && T > 0, "strip seam domain: box extents must be positive");
  JordanDomain d;
  d.name = "strip-box";
  d.boundary = {{-ell, -kPi / 2}, {0.0, -kPi / 2}, {T, -kPi / 2},
                {T, kPi / 2},     {0.0, kPi / 2},  {-ell, kPi / 2}};
  return d;
}

inline SamplingRecipe sampling_recipe(const ClosedFormMap& m, double edge) {
  if (m.name == "butterfly") return {m.domain, {butterfly_fold_polyline(edge)}};
  if (m.name == "strip") {
    double ell = 0, T = 0;
    for (const auto& p : m.domain.boundary) {
      ell = std::max(ell, -p.real());
      T = std::max(T, p.real());
    }
    return {strip_seam_domain(ell, T), {{{0.0, -kPi / 2}, {0.0, kPi / 2}}}};
  }
  return {m.domain, {}};
}

// ---------------------------------------------------------------------
// Four-lobe clover: source is the union of four unit disks centered at
// 1, i, -1, -i; the boundary data maps each circular arc affinely onto an
// elliptical arc, pinching toward the four reflex corners as eps drops.
// ---------------------------------------------------------------------
struct CloverData {
  double eps;
  JordanDomain X;
  JordanDomain Y;
  BoundaryMap g;
};

inline Point2 clover_boundary_value(double eps, int arc, Point2 p) {
  double x = p.real(), y = p.imag();
  switch (arc) {
    case 0: return {(2 - eps) * x + 2 * eps - 2, eps * y};
    case 1: return {eps * x, (2 - eps) * y + 2 * eps - 2};
    case 2: return {(2 - eps) * x - 2 * eps + 2, eps * y};
    default: return {eps * x, (2 - eps) * y - 2 * eps + 2};
  }
}

inline CloverData clover(double eps, int samples_per_arc = 96) {
  require(eps > 0 && eps <= 1, "clover: eps must lie in (0,1]");
  require(samples_per_arc >= 8, "clover: need at least 8 samples per arc");
  CloverData data;
  data.eps = eps;
  const Point2 centers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double starts[4] = {-kPi / 2, 0, kPi / 2, kPi};
  const Point2 corners[4] = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  std::vector<cplx> values;
  for (int arc = 0; arc < 4; ++arc) {
    for (int k = 0; k < samples_per_arc; ++k) {
      Point2 p;
      if (k == 0) {
        p = corners[arc];
      } else {
        double t = starts[arc] + kPi * k / samples_per_arc;
        p = centers[arc] + cplx{std::cos(t), std::sin(t)};
      }
      data.X.boundary.push_back(p);
      values.push_back(clover_boundary_value(eps, arc, p));
    }
  }
  data.X.name = "clover-source";
  data.Y.name = "clover-target";
  data.Y.boundary = values;
  data.g = boundary_map_from_polygon(data.X.boundary, values);
  validate_jordan(data.X);
  validate_jordan(data.Y);
  return data;
}

// The four reflex corners of the clover target.
inline std::vector<Point2> clover_target_corners(double eps) {
  return {{eps, -eps}, {eps, eps}, {-eps, eps}, {-eps, -eps}};
}

// ---------------------------------------------------------------------
// Heart-shaped target assembled from two overlapping convex lobes, both
// circular segments, symmetric under (x,y) -> (-x,y). The boundary data g
// maps the unit circle onto the heart boundary proportionally to
// arclength on each half, and satisfies g(-x,y) = -conj(g(x,y)) exactly.
// ---------------------------------------------------------------------
struct HeartData {
  JordanDomain X;   // unit disk polygon, exactly mirror-symmetric
  JordanDomain Y;   // heart-shaped union
  JordanDomain Y1;  // left lobe (convex)
  JordanDomain Y2;  // right lobe (convex)
  BoundaryMap g;
};

namespace detail {

inline Point2 mirror_x(Point2 p) { return {-p.real(), p.imag()}; }

// Point at a given arclength along an open polyline.
inline Point2 polyline_point(const std::vector<Point2>& path, const std::vector<double>& cum,
                             double s) {
  if (s <= 0) return path.front();
  if (s >= cum.back()) return path.back();
  size_t i = std::upper_bound(cum.begin(), cum.end(), s) - cum.begin();
  double left = cum[i - 1];
  double u = (s - left) / (cum[i] - cum[i - 1]);
  return path[i - 1] + u * (path[i] - path[i - 1]);
}

}  // namespace detail

inline HeartData heart_setup(int samples = 256) {
  require(samples >= 64, "heart: need at least 64 samples");
  const double a = 0.45;
  const double b = std::sqrt(1.0 - a * a);
  const Point2 c1{-a, 0}, c2{a, 0};
  const Point2 P{0, -b}, Q{0, b};
  const double th_B = -20.0 * kPi / 180.0;       // chord anchor on the right lobe
  const Point2 B2 = c2 + cplx{std::cos(th_B), std::sin(th_B)};
  const Point2 A1 = detail::mirror_x(B2);
  const double th_P2 = std::atan2(-b, -a);       // P seen from c2
  const double th_Q2 = std::atan2(b, -a);        // Q seen from c2

  HeartData H;

  // Right half of the heart boundary, from P through B2 and up to Q.
  int n_half = std::max(24, samples / 4);
  std::vector<Point2> right_path{P, B2};
  for (int k = 1; k < n_half; ++k) {
    double t = th_B + (th_Q2 - th_B) * k / n_half;
    right_path.push_back(c2 + cplx{std::cos(t), std::sin(t)});
  }
  right_path.push_back(Q);

  H.Y.name = "heart";
  H.Y.boundary = right_path;
  for (size_t i = right_path.size() - 2; i >= 1; --i)
    H.Y.boundary.push_back(detail::mirror_x(right_path[i]));
  validate_jordan(H.Y);

  // Right lobe: the major circular segment of the disk at c2 cut by the
  // chord from P to B2. Left lobe is its exact mirror image.
  int n_lobe = std::max(48, samples / 2);
  H.Y2.name = "heart-lobe-right";
  H.Y2.boundary = {P, B2};
  double span2 = (th_P2 + 2 * kPi) - th_B;  // CCW from B2 all the way to P
  for (int k = 1; k < n_lobe; ++k) {
    double t = th_B + span2 * k / n_lobe;
    Point2 p = c2 + cplx{std::cos(t), std::sin(t)};
    if (std::abs(t - th_Q2) < 1e-12) p = Q;
    H.Y2.boundary.push_back(p);
  }
  validate_jordan(H.Y2);
  require(is_convex(H.Y2), "heart: right lobe must be convex");

  H.Y1.name = "heart-lobe-left";
  H.Y1.boundary.reserve(H.Y2.boundary.size());
  for (size_t i = H.Y2.boundary.size(); i-- > 0;)
    H.Y1.boundary.push_back(detail::mirror_x(H.Y2.boundary[i]));
  validate_jordan(H.Y1);
  require(is_convex(H.Y1), "heart: left lobe must be convex");

  // Mirror-symmetric unit disk polygon: bottom (0,-1) and top (0,1) exact,
  // the left half the exact mirror of the right half.
  int m = std::max(16, samples / 4);
  std::vector<Point2> disk(4 * m);
  disk[0] = {0, -1};
  disk[2 * m] = {0, 1};
  for (int j = 1; j < 2 * m; ++j) {
    double t = -kPi / 2 + kPi * j / (2 * m);
    disk[j] = {std::cos(t), std::sin(t)};
  }
  for (int j = 1; j < 2 * m; ++j) disk[2 * m + j] = detail::mirror_x(disk[2 * m - j]);
  H.X.name = "disk";
  H.X.boundary = disk;

  // Boundary data: right semicircle onto right_path by arclength
  // proportion, left semicircle forced to the exact mirror values.
  std::vector<double> cum(right_path.size(), 0.0);
  for (size_t i = 1; i < right_path.size(); ++i)
    cum[i] = cum[i - 1] + std::abs(right_path[i] - right_path[i - 1]);
  std::vector<double> disk_cum(2 * m + 1, 0.0);
  for (int j = 1; j <= 2 * m; ++j) disk_cum[j] = disk_cum[j - 1] + std::abs(disk[j] - disk[j - 1]);

  std::vector<cplx> values(4 * m);
  values[0] = P;
  values[2 * m] = Q;
  for (int j = 1; j < 2 * m; ++j)
    values[j] = detail::polyline_point(right_path, cum, cum.back() * disk_cum[j] / disk_cum[2 * m]);
  for (int j = 1; j < 2 * m; ++j) values[2 * m + j] = -std::conj(values[2 * m - j]);

  H.g = boundary_map_from_polygon(disk, values);
  validate_jordan(H.X);
  return H;
}

// ---------------------------------------------------------------------
// Boundary maps for the double-integral scan.
// ---------------------------------------------------------------------

// Identity circle map sampled at n knots.
inline BoundaryMap identity_circle_map(int n = 4096) {
  BoundaryMap g;
  g.total_length = 2 * kPi;
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * kPi * k / n;
    g.s.push_back(th);
    g.w.push_back({std::cos(th), std::sin(th)});
  }
  return g;
}

// Circle map with lacunary angular wiggles. The phase series
// sum amp/k * cos(2^k theta) has unbounded weighted Fourier mass, so the
// double-integral scan keeps growing with N instead of stabilizing.
inline BoundaryMap lacunary_circle_map(int levels = 13, double amp = 0.7, int knots = 16384) {
  BoundaryMap g;
  g.total_length = 2 * kPi;
  for (int k = 0; k < knots; ++k) {
    double th = 2.0 * kPi * k / knots;
    double phase = th;
    for (int j = 1; j <= levels; ++j)
      phase += amp / j * std::cos(std::ldexp(1.0, j) * th);
    g.s.push_back(th);
    g.w.push_back({std::cos(phase), std::sin(phase)});
  }
  return g;
}

// ---------------------------------------------------------------------
// Random convex targets: rotated ellipses traced by a random monotone
// circle reparameterization. Vertices lie on a convex curve in increasing
// parameter order, so the target polygon is convex.
// ---------------------------------------------------------------------
struct RandomTarget {
  JordanDomain X;  // unit disk polygon
  JordanDomain Y;
  BoundaryMap g;
};

inline RandomTarget random_convex_target(Rng& rng, int n = 256) {
  double A = rng.uniform(0.6, 1.8), B = rng.uniform(0.6, 1.8);
  double chi = rng.uniform(0.0, kPi);
  Point2 center{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
  double bk[3], ck[3];
  double budget = 0.6;
  for (int k = 0; k < 3; ++k) {
    bk[k] = rng.uniform(0.0, budget / 3);
    ck[k] = rng.uniform(0.0, 2 * kPi);
  }
  cplx rot{std::cos(chi), std::sin(chi)};
  RandomTarget t;
  t.X = regular_polygon({0, 0}, 1.0, n, "disk");
  std::vector<cplx> values(n);
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * kPi * k / n;
    double psi = th;
    for (int j = 0; j < 3; ++j) psi += bk[j] / (j + 1) * std::sin((j + 1) * th + ck[j]);
    values[k] = center + rot * cplx{A * std::cos(psi), B * std::sin(psi)};
  }
  t.Y.name = "random-convex-target";
  t.Y.boundary = values;
  validate_jordan(t.Y);
  require(is_convex(t.Y), "random target: convexity lost");
  t.g = boundary_map_from_polygon(t.X.boundary, values);
  return t;
}

struct GalleryEntry {
  std::string name;
  std::string description;
};

inline std::vector<GalleryEntry> gallery_manifest() {
  return {
      {"butterfly", "disk squeezing the segment [0,1] to a reflex target corner"},
      {"strip", "box map collapsing the left half onto the inner circular arc"},
      {"control", "non-solution map z + 0.3 conj(z)|z|^2 whose residual refuses to decay"},
      {"clover:eps", "four-disk source with pinched elliptical target, e.g. clover:0.25"},
      {"heart", "mirror-symmetric two-lobe target with boundary data for the alternating flow"},
      {"identity", "identity boundary map of the unit circle"},
      {"lacunary", "circle map with lacunary phase series and divergent Douglas integral"},
      {"random-convex", "seeded random convex target with perturbed boundary parametrization"},
  };
}

}  // namespace hopfharm
