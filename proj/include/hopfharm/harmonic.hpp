#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hopfharm/boundary.hpp"
#include "hopfharm/mesh.hpp"

namespace hopfharm {

struct SolveReport {
  double residual_norm = 0;  // relative to the boundary load
  int iterations = 0;
  double energy = 0;
};

namespace detail {

struct CotanEntry {
  int i, j;
  double w;
};

// Cotangent stiffness contributions for one triangle; the assembled matrix
// is the standard piecewise-linear Laplacian (positive semi-definite).
inline void cotan_triangle(Point2 a, Point2 b, Point2 c, int ia, int ib, int ic,
                           std::vector<CotanEntry>& out) {
  auto corner = [&](Point2 p, Point2 q, Point2 r, int iq, int ir) {
    // cot of the angle at p, acting on edge (q, r)
    double cr = cross(q - p, r - p);
    require(cr > 0, "cotan assembly: non-positive triangle");
    double cot = dot(q - p, r - p) / cr;
    out.push_back({iq, ir, -0.5 * cot});
    out.push_back({ir, iq, -0.5 * cot});
    out.push_back({iq, iq, 0.5 * cot});
    out.push_back({ir, ir, 0.5 * cot});
  };
  corner(a, b, c, ib, ic);
  corner(b, c, a, ic, ia);
  corner(c, a, b, ia, ib);
}

// Solves the discrete Laplace equation on the given triangles with fixed
// values at every vertex not listed as unknown.
inline SolveReport solve_laplace(const TriangleMesh& m, const std::vector<int>& triangle_ids,
                                 const std::vector<int>& unknowns, std::vector<cplx>& values) {
  SolveReport rep;
  if (unknowns.empty()) return rep;
  std::vector<int> idx(m.vertices.size(), -1);
  for (size_t k = 0; k < unknowns.size(); ++k) idx[unknowns[k]] = int(k);

  std::vector<CotanEntry> entries;
  entries.reserve(triangle_ids.size() * 12);
  for (int t : triangle_ids) {
    auto& tri = m.triangles[t];
    cotan_triangle(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]], tri[0], tri[1],
                   tri[2], entries);
  }

  int n = int(unknowns.size());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(entries.size());
  for (auto& e : entries) {
    int i = idx[e.i], j = idx[e.j];
    if (i < 0) continue;
    if (j >= 0) {
      trip.emplace_back(i, j, e.w);
    } else {
      rhs(i, 0) -= e.w * values[e.j].real();
      rhs(i, 1) -= e.w * values[e.j].imag();
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  require(solver.info() == Eigen::Success, "laplace solve: factorization failed");
  Eigen::MatrixXd x = solver.solve(rhs);
  require(solver.info() == Eigen::Success, "laplace solve: back-substitution failed");

  double res = (A * x - rhs).norm();
  double scale = std::max(rhs.norm(), 1e-300);
  rep.residual_norm = res / scale;
  rep.iterations = 1;
  for (int k = 0; k < n; ++k) values[unknowns[k]] = {x(k, 0), x(k, 1)};
  return rep;
}

}  // namespace detail

// Harmonic extension of boundary data given per boundary_loop entry.
// The discrete solution satisfies the interior equations to the direct
// solver's accuracy (residual reported relative to the boundary load).
inline MeshMap solve_dirichlet(std::shared_ptr<const TriangleMesh> mesh,
                               const std::vector<cplx>& boundary_values,
                               SolveReport* report = nullptr) {
  const TriangleMesh& m = *mesh;
  require(boundary_values.size() == m.boundary_loop.size(),
          "solve_dirichlet: boundary value count mismatch");
  MeshMap f;
  f.mesh = mesh;
  f.values.assign(m.vertices.size(), cplx{0, 0});
  std::vector<char> fixed(m.vertices.size(), 0);
  for (size_t k = 0; k < m.boundary_loop.size(); ++k) {
    f.values[m.boundary_loop[k]] = boundary_values[k];
    fixed[m.boundary_loop[k]] = 1;
  }
  std::vector<int> unknowns;
  for (size_t v = 0; v < m.vertices.size(); ++v)
    if (!fixed[v]) unknowns.push_back(int(v));
  std::vector<int> all_tris(m.triangles.size());
  for (size_t t = 0; t < m.triangles.size(); ++t) all_tris[t] = int(t);
  SolveReport rep = detail::solve_laplace(m, all_tris, unknowns, f.values);
  rep.energy = dirichlet_energy(f);
  if (report) *report = rep;
  return f;
}

// Replaces the map on a submesh by the harmonic extension of its own
// boundary trace. Energy cannot increase: the replacement minimizes the
// energy over the replaced degrees of freedom. Empty interior: no change.
inline MeshMap harmonic_replacement(const MeshMap& f, const Submesh& sub,
                                    SolveReport* report = nullptr) {
  MeshMap out = f;
  if (sub.interior_vertices.empty()) {
    if (report) *report = SolveReport{};
    return out;
  }
  SolveReport rep =
      detail::solve_laplace(*f.mesh, sub.triangle_ids, sub.interior_vertices, out.values);
  rep.energy = dirichlet_energy(out);
  if (report) *report = rep;
  return out;
}

// Poisson-kernel harmonic extension from the unit circle, trapezoid rule
// with N nodes. Evaluation requires |z| <= 1 - boundary_tol.
inline std::vector<cplx> poisson_extension(const BoundaryMap& g, const std::vector<Point2>& at,
                                           int N = 2048, double boundary_tol = 1e-3) {
  require(N >= 8, "poisson extension: N too small");
  std::vector<cplx> gv(N);
  for (int k = 0; k < N; ++k) gv[k] = g.eval(g.total_length * k / N);
  std::vector<cplx> out;
  out.reserve(at.size());
  for (auto z : at) {
    require(std::abs(z) <= 1.0 - boundary_tol, "poisson extension: point too close to the circle");
    double one_minus = 1.0 - std::norm(z);
    KahanSum re, im;
    for (int k = 0; k < N; ++k) {
      double th = 2.0 * kPi * k / N;
      cplx xi{std::cos(th), std::sin(th)};
      double kernel = one_minus / std::norm(xi - z);
      re.add(kernel * gv[k].real());
      im.add(kernel * gv[k].imag());
    }
    out.push_back(cplx{re.value(), im.value()} / double(N));
  }
  return out;
}

// Harmonic extension of g over a fresh triangulation of X, with an escape
// check against the closed target Y.
struct RkcResult {
  MeshMap map;
  SolveReport solve;
  double min_jacobian = 0;
  int negative_jacobian_count = 0;
  std::vector<int> escape_vertices;  // interior vertices mapped outside closure(Y)
  double escape_depth = 0;           // max distance from closure(Y) among escapes
};

inline std::vector<cplx> boundary_values_from_map(const TriangleMesh& m, const JordanDomain& X,
                                                  const BoundaryMap& g) {
  std::vector<cplx> bv;
  bv.reserve(m.boundary_loop.size());
  for (int v : m.boundary_loop) {
    auto proj = project_to_boundary(X, m.vertices[v]);
    bv.push_back(g.eval(proj.arclength));
  }
  return bv;
}

inline RkcResult rkc_extend_and_check(const JordanDomain& X, const JordanDomain& Y,
                                      const BoundaryMap& g, double target_edge) {
  validate_jordan(Y);
  RkcResult r;
  auto mesh = std::make_shared<TriangleMesh>(triangulate(X, target_edge));
  r.map = solve_dirichlet(mesh, boundary_values_from_map(*mesh, X, g), &r.solve);
  auto stats = jacobian_stats(r.map);
  r.min_jacobian = stats.min_jacobian;
  r.negative_jacobian_count = stats.count_negative;
  auto on_boundary = boundary_vertex_set(*mesh);
  for (size_t v = 0; v < mesh->vertices.size(); ++v) {
    if (on_boundary.count(int(v))) continue;
    if (locate_point(Y, r.map.values[v]) == PointLocation::outside) {
      r.escape_vertices.push_back(int(v));
      r.escape_depth = std::max(r.escape_depth, project_to_boundary(Y, r.map.values[v]).distance);
    }
  }
  return r;
}

}  // namespace hopfharm
