#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>

#include "hopfharm/gallery.hpp"
#include "hopfharm/mesh.hpp"

namespace hopfharm {

// Piecewise-constant Hopf product phi = h_z * conj(h_zbar) per triangle.
struct HopfField {
  std::shared_ptr<const TriangleMesh> mesh;
  std::vector<cplx> phi;        // per triangle
  std::vector<Point2> centroid; // per triangle
  std::vector<double> area;     // per triangle
};

inline HopfField hopf_product(const MeshMap& f) {
  const TriangleMesh& m = *f.mesh;
  auto ders = wirtinger(f);
  HopfField out;
  out.mesh = f.mesh;
  out.phi.reserve(m.triangles.size());
  out.centroid.reserve(m.triangles.size());
  out.area.reserve(m.triangles.size());
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    out.phi.push_back(ders[t].h_z * std::conj(ders[t].h_zbar));
    const auto& tri = m.triangles[t];
    out.centroid.push_back((m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]) / 3.0);
    out.area.push_back(ders[t].area);
  }
  return out;
}

// Deviation of a per-triangle complex field from local holomorphy.
// At each interior vertex the field is fit by least squares over all
// centroids within a patch of radius R by
//   a + b*u + d2*u^2 + d3*u^3 + e*conj(u),  u = (c - v)/R,
// and |e|/R estimates |d(phi)/d(zbar)| at v. The patch radius grows like
// sqrt(edge * diameter): piecewise-constant sampling carries O(edge)
// noise of triangle-shape-dependent sign, and averaging ~R^2/edge^2
// samples before differencing keeps the estimate O(edge) for a truly
// holomorphic field, while a non-holomorphic field keeps its pointwise
// |d(phi)/d(zbar)| level. The holomorphic quadratic and cubic basis
// terms stop smooth curvature from leaking into e on asymmetric patches.
// The global figure is the area-weighted mean of the vertex values.
struct HolomorphyResidual {
  std::vector<double> per_vertex;  // NaN where undefined (boundary, sparse)
  double global = 0.0;
};

inline HolomorphyResidual holomorphy_residual(const HopfField& field) {
  const TriangleMesh& m = *field.mesh;
  const size_t nt = m.triangles.size();
  auto on_boundary = boundary_vertex_set(m);

  double total_area = 0;
  for (double a : field.area) total_area += a;
  double mean_area = total_area / std::max<size_t>(1, nt);
  double edge = std::sqrt(mean_area * 4.0 / std::sqrt(3.0));
  Point2 lo = m.vertices[0], hi = m.vertices[0];
  for (const auto& p : m.vertices) {
    lo = {std::min(lo.real(), p.real()), std::min(lo.imag(), p.imag())};
    hi = {std::max(hi.real(), p.real()), std::max(hi.imag(), p.imag())};
  }
  double diam = std::abs(hi - lo);
  double radius = std::clamp(0.75 * std::sqrt(edge * diam), 2.5 * edge, diam / 3.0);

  // Uniform grid over centroids for radius queries.
  double cell = radius;
  int nx = std::max(1, int((hi.real() - lo.real()) / cell) + 1);
  int ny = std::max(1, int((hi.imag() - lo.imag()) / cell) + 1);
  auto cell_of = [&](Point2 p) {
    int ix = std::clamp(int((p.real() - lo.real()) / cell), 0, nx - 1);
    int iy = std::clamp(int((p.imag() - lo.imag()) / cell), 0, ny - 1);
    return iy * nx + ix;
  };
  std::vector<std::vector<int>> grid(size_t(nx) * ny);
  for (size_t t = 0; t < nt; ++t) grid[cell_of(field.centroid[t])].push_back(int(t));

  std::vector<double> vertex_mass(m.vertices.size(), 0.0);
  for (size_t t = 0; t < nt; ++t)
    for (int v : m.triangles[t]) vertex_mass[v] += field.area[t];

  HolomorphyResidual res;
  res.per_vertex.assign(m.vertices.size(), std::numeric_limits<double>::quiet_NaN());
  KahanSum weighted, weights;
  using Mat5 = Eigen::Matrix<cplx, 5, 5>;
  using Vec5 = Eigen::Matrix<cplx, 5, 1>;
  for (size_t v = 0; v < m.vertices.size(); ++v) {
    if (on_boundary.count(int(v))) continue;
    Point2 z = m.vertices[v];
    Mat5 A = Mat5::Zero();
    Vec5 rhs = Vec5::Zero();
    int samples = 0;
    int cx = std::clamp(int((z.real() - lo.real()) / cell), 0, nx - 1);
    int cy = std::clamp(int((z.imag() - lo.imag()) / cell), 0, ny - 1);
    for (int iy = std::max(0, cy - 1); iy <= std::min(ny - 1, cy + 1); ++iy)
      for (int ix = std::max(0, cx - 1); ix <= std::min(nx - 1, cx + 1); ++ix)
        for (int t : grid[size_t(iy) * nx + ix]) {
          cplx u = (field.centroid[t] - z) / radius;
          if (std::abs(u) > 1.0) continue;
          double w = field.area[t];
          Vec5 row;
          row << 1.0, u, u * u, u * u * u, std::conj(u);
          A += w * row.conjugate() * row.transpose();
          rhs += w * row.conjugate() * field.phi[t];
          ++samples;
        }
    if (samples < 12) continue;
    Vec5 sol = A.ldlt().solve(rhs);
    if (!sol.allFinite()) continue;
    double cc = std::abs(sol[4]) / radius;
    res.per_vertex[v] = cc;
    weighted.add(cc * vertex_mass[v]);
    weights.add(vertex_mass[v]);
  }
  res.global = weights.value() > 0 ? weighted.value() / weights.value() : 0.0;
  return res;
}

// Directional stretches along/across the Hopf-product direction field:
// horizontal |h_z|+|h_zbar|, vertical ||h_z|-|h_zbar||. Their product is
// |J| and the difference of squares is 4|phi|.
struct StretchField {
  std::vector<double> horizontal;  // per triangle
  std::vector<double> vertical;
};

inline StretchField stretch(const MeshMap& f) {
  StretchField s;
  auto ders = wirtinger(f);
  s.horizontal.reserve(ders.size());
  s.vertical.reserve(ders.size());
  for (auto& d : ders) {
    double az = std::abs(d.h_z), azb = std::abs(d.h_zbar);
    s.horizontal.push_back(az + azb);
    s.vertical.push_back(std::abs(az - azb));
  }
  return s;
}

// ---------------------------------------------------------------------
// Energy comparison: for h = H o f with H a finite-energy map of X and
// f: G -> X a sense-preserving diffeomorphism,
//   E_X[H] - E_G[h] = 4*I1 + 4*I2  with
//   I1 = int_G ( |f_z - s*f_zbar|^2 / (|f_z|^2-|f_zbar|^2) - 1 ) * |h_z*h_zbar|
//   I2 = int_G ( |h_z| - |h_zbar| )^2 * |f_zbar|^2 / (|f_z|^2-|f_zbar|^2)
// where s is the unimodular phase of the Hopf product of h (0 when the
// product vanishes). Both sides are evaluated by a midpoint rule on
// throwaway triangulations, so agreement degrades gracefully with mesh
// size rather than being exact.
// ---------------------------------------------------------------------
struct EnergyIdentityReport {
  double lhs = 0;        // E_X[H] - E_G[h]
  double rhs = 0;        // 4*I1 + 4*I2
  double gap = 0;        // |lhs - rhs|
  double relative = 0;   // gap / max(1, |lhs|, |rhs|)
  double energy_H = 0;
  double energy_h = 0;
};

namespace detail {

// Midpoint-rule integral of a pointwise density over a prebuilt mesh.
template <typename F>
double centroid_integral(const TriangleMesh& m, F&& density) {
  KahanSum acc;
  for (const auto& tri : m.triangles) {
    Point2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    double area = 0.5 * cross(b - a, c - a);
    acc.add(density((a + b + c) / 3.0) * area);
  }
  return acc.value();
}

}  // namespace detail

inline EnergyIdentityReport energy_identity_gap(const ClosedFormMap& h, const ClosedFormMap& H,
                                                const ClosedFormMap& f, int quadrature_n = 256) {
  const JordanDomain& G = h.domain;
  const JordanDomain& X = H.domain;
  TriangleMesh mesh_G = triangulate(G, polygon_diameter(G.boundary) / quadrature_n);
  TriangleMesh mesh_X = triangulate(X, polygon_diameter(X.boundary) / quadrature_n);

  EnergyIdentityReport rep;
  rep.energy_H = detail::centroid_integral(mesh_X, [&](Point2 w) {
    return 2.0 * (std::norm(H.d_z(w)) + std::norm(H.d_zbar(w)));
  });
  rep.energy_h = detail::centroid_integral(mesh_G, [&](Point2 z) {
    return 2.0 * (std::norm(h.d_z(z)) + std::norm(h.d_zbar(z)));
  });
  rep.lhs = rep.energy_H - rep.energy_h;

  rep.rhs = 4.0 * detail::centroid_integral(mesh_G, [&](Point2 z) {
    cplx hz = h.d_z(z), hzb = h.d_zbar(z);
    cplx fz = f.d_z(z), fzb = f.d_zbar(z);
    double denom = std::norm(fz) - std::norm(fzb);
    require(denom > 0, "energy identity: f must be sense-preserving");
    cplx phi = hz * std::conj(hzb);
    cplx s = std::abs(phi) >= 1e-14 ? phi / std::abs(phi) : cplx{0, 0};
    double term1 = (std::norm(fz - s * fzb) / denom - 1.0) * std::abs(phi);
    double dv = std::abs(hz) - std::abs(hzb);
    double term2 = dv * dv * std::norm(fzb) / denom;
    return term1 + term2;
  });

  rep.gap = std::abs(rep.lhs - rep.rhs);
  rep.relative = rep.gap / std::max({1.0, std::abs(rep.lhs), std::abs(rep.rhs)});
  return rep;
}

// Pointwise check of the stretch identities for a closed-form map:
// dH*dV = |J| and dH^2 - dV^2 = 4|phi| hold identically, so this
// returns the maximum violation over sample points (roundoff scale).
inline double stretch_identity_violation(const ClosedFormMap& m, const std::vector<Point2>& pts) {
  double worst = 0;
  for (Point2 z : pts) {
    cplx hz = m.d_z(z), hzb = m.d_zbar(z);
    double az = std::abs(hz), azb = std::abs(hzb);
    double dh = az + azb, dv = std::abs(az - azb);
    double jac = std::abs(std::norm(hz) - std::norm(hzb));
    double phi4 = 4.0 * std::abs(hz * std::conj(hzb));
    double scale = std::max(1.0, dh * dh);
    worst = std::max(worst, std::abs(dh * dv - jac) / scale);
    worst = std::max(worst, std::abs(dh * dh - dv * dv - phi4) / scale);
  }
  return worst;
}

}  // namespace hopfharm
