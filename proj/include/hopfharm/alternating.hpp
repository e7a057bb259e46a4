#pragma once

#include <functional>
#include <set>

#include "hopfharm/gallery.hpp"
#include "hopfharm/harmonic.hpp"
#include "hopfharm/hopf.hpp"

namespace hopfharm {

// Alternating harmonic replacement over two overlapping convex pieces of a
// target domain. Each round solves the Laplace problem on the preimage of
// one piece with the current map's trace as boundary data; energy never
// increases, boundary values never change.
struct AlternatingConfig {
  JordanDomain Y;        // full target, for the initial clamp
  JordanDomain Y1, Y2;   // convex pieces, Y1 used on odd rounds
  int max_iters = 40;
  double energy_tol = 1e-10;  // converged when the energy drop falls below
  double sup_tol = 1e-8;      // ... and the sup vertex move does too
};

enum class AlternatingStatus { converged, max_iters, stalled };

inline const char* to_string(AlternatingStatus s) {
  switch (s) {
    case AlternatingStatus::converged: return "converged";
    case AlternatingStatus::stalled: return "stalled";
    default: return "max_iters";
  }
}

struct AlternatingStep {
  int k = 0;  // 0 is the clamped initial extension
  double energy = 0;
  double sup_delta = 0;          // max vertex move in this round
  int replaced_interior = 0;     // interior unknowns of the round's submesh
  double hopf_residual = 0;      // global holomorphy residual after the round
};

struct AlternatingResult {
  MeshMap map;
  std::vector<AlternatingStep> trace;
  AlternatingStatus status = AlternatingStatus::max_iters;
  int iterations = 0;
};

using AlternatingObserver = std::function<void(int, const MeshMap&)>;

inline AlternatingResult run_alternating(MeshMap initial, const AlternatingConfig& cfg,
                                         const AlternatingObserver& observer = {}) {
  validate_jordan(cfg.Y);
  validate_jordan(cfg.Y1);
  validate_jordan(cfg.Y2);
  require(cfg.max_iters >= 1, "alternating: max_iters must be positive");
  require(initial.mesh && initial.values.size() == initial.mesh->vertices.size(),
          "alternating: initial map incomplete");

  AlternatingResult res;
  res.map = std::move(initial);

  // Clamp interior escapes onto the target boundary; boundary vertices
  // keep their data exactly.
  auto on_boundary = boundary_vertex_set(*res.map.mesh);
  double clamp_sup = 0;
  for (size_t v = 0; v < res.map.values.size(); ++v) {
    if (on_boundary.count(int(v))) continue;
    if (locate_point(cfg.Y, res.map.values[v]) == PointLocation::outside) {
      auto proj = project_to_boundary(cfg.Y, res.map.values[v]);
      clamp_sup = std::max(clamp_sup, proj.distance);
      res.map.values[v] = proj.point;
    }
  }
  AlternatingStep step0;
  step0.k = 0;
  step0.energy = dirichlet_energy(res.map);
  step0.sup_delta = clamp_sup;
  step0.hopf_residual = holomorphy_residual(hopf_product(res.map)).global;
  res.trace.push_back(step0);
  if (observer) observer(0, res.map);

  int consecutive_empty = 0;
  int small_streak = 0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const JordanDomain& piece = (k % 2 == 1) ? cfg.Y1 : cfg.Y2;
    Submesh sub = submesh_by_image(res.map, piece);
    SolveReport rep;
    MeshMap next = harmonic_replacement(res.map, sub, &rep);

    AlternatingStep st;
    st.k = k;
    st.replaced_interior = int(sub.interior_vertices.size());
    st.sup_delta = 0;
    for (size_t v = 0; v < next.values.size(); ++v)
      st.sup_delta = std::max(st.sup_delta, std::abs(next.values[v] - res.map.values[v]));
    st.energy = sub.interior_vertices.empty() ? res.trace.back().energy : rep.energy;
    res.map = std::move(next);
    st.hopf_residual = holomorphy_residual(hopf_product(res.map)).global;
    double drop = res.trace.back().energy - st.energy;
    res.trace.push_back(st);
    res.iterations = k;
    if (observer) observer(k, res.map);

    consecutive_empty = sub.interior_vertices.empty() ? consecutive_empty + 1 : 0;
    if (consecutive_empty >= 2) {
      res.status = AlternatingStatus::stalled;
      return res;
    }
    small_streak = (st.sup_delta < cfg.sup_tol && drop < cfg.energy_tol) ? small_streak + 1 : 0;
    // One small round can just mean the round's piece was already
    // harmonic; demand a small round on each piece in a row.
    if (small_streak >= 2) {
      res.status = AlternatingStatus::converged;
      return res;
    }
  }
  res.status = AlternatingStatus::max_iters;
  return res;
}

// Harmonic start: the initial map is the harmonic extension of the data.
inline AlternatingResult run_alternating(std::shared_ptr<const TriangleMesh> mesh,
                                         const std::vector<cplx>& boundary_values,
                                         const AlternatingConfig& cfg,
                                         const AlternatingObserver& observer = {}) {
  return run_alternating(solve_dirichlet(std::move(mesh), boundary_values), cfg, observer);
}

// Convenience driver: mesh X, pull boundary data from g, run the rounds.
inline AlternatingResult run_alternating(const JordanDomain& X, const BoundaryMap& g,
                                         const AlternatingConfig& cfg, double target_edge,
                                         const AlternatingObserver& observer = {}) {
  auto mesh = std::make_shared<TriangleMesh>(triangulate(X, target_edge));
  return run_alternating(mesh, boundary_values_from_map(*mesh, X, g), cfg, observer);
}

// Boundary data on a mirror-symmetric mesh forced to the odd symmetry
// w(-x, y) = -conj(w(x, y)) exactly: the x>0 representative wins, axis
// vertices are projected onto the imaginary axis.
inline std::vector<cplx> symmetrized_boundary_values(const SymmetricMesh& sm,
                                                     const BoundaryMap& g) {
  std::vector<cplx> bv = boundary_values_from_map(sm.mesh, sm.disk, g);
  const auto& loop = sm.mesh.boundary_loop;
  std::vector<int> pos_in_loop(sm.mesh.vertices.size(), -1);
  for (size_t i = 0; i < loop.size(); ++i) pos_in_loop[loop[i]] = int(i);
  for (size_t i = 0; i < loop.size(); ++i) {
    int v = loop[i];
    int mv = sm.mirror[v];
    if (mv == v) {
      bv[i] = cplx{0.0, bv[i].imag()};
    } else if (sm.mesh.vertices[v].real() > 0) {
      int j = pos_in_loop[mv];
      require(j >= 0, "symmetrized boundary: mirror vertex not on boundary");
      bv[j] = -std::conj(bv[i]);
    }
  }
  return bv;
}

// Radial interpolation z -> |z| * g(z/|z|) of the boundary data over the
// symmetric disk mesh. When the target is star-shaped about the origin this
// is a homeomorphism onto the closed target, and it is far from harmonic,
// which makes it the natural starting map for the replacement rounds.
// Values carry exact odd symmetry; boundary vertices take the symmetrized
// boundary data verbatim, so the trace matches symmetrized_boundary_values.
inline MeshMap star_initial_map(const SymmetricMesh& sm, const BoundaryMap& g) {
  auto mesh = std::make_shared<TriangleMesh>(sm.mesh);
  std::vector<cplx> bv = symmetrized_boundary_values(sm, g);
  MeshMap f;
  f.mesh = mesh;
  f.values.assign(mesh->vertices.size(), cplx{0.0, 0.0});
  std::vector<char> fixed(mesh->vertices.size(), 0);
  const auto& loop = mesh->boundary_loop;
  for (size_t i = 0; i < loop.size(); ++i) {
    f.values[loop[i]] = bv[i];
    fixed[loop[i]] = 1;
  }
  for (size_t v = 0; v < mesh->vertices.size(); ++v) {
    if (fixed[v]) continue;
    Point2 z = mesh->vertices[v];
    double r = std::abs(z);
    if (r < 1e-12) continue;  // the origin maps to the origin
    auto proj = project_to_boundary(sm.disk, z / r);
    f.values[v] = r * g.eval(proj.arclength);
  }
  for (size_t v = 0; v < mesh->vertices.size(); ++v) {
    int mv = sm.mirror[v];
    if (int(v) == mv)
      f.values[v] = cplx{0.0, f.values[v].imag()};
    else if (mesh->vertices[v].real() > 0)
      f.values[mv] = -std::conj(f.values[v]);
  }
  return f;
}

// Largest violation of the odd symmetry over all vertices of the map.
inline double odd_symmetry_violation(const SymmetricMesh& sm, const MeshMap& f) {
  require(f.values.size() == sm.mesh.vertices.size(), "symmetry check: size mismatch");
  double worst = 0;
  for (size_t v = 0; v < f.values.size(); ++v)
    worst = std::max(worst, std::abs(f.values[sm.mirror[v]] + std::conj(f.values[v])));
  return worst;
}

// ---------------------------------------------------------------------
// Squeezing detection: connected clusters of mesh vertices whose images
// pile up at a reflex corner of the target.
// ---------------------------------------------------------------------
struct SqueezeComponent {
  Point2 corner;
  int vertex_count = 0;
  double preimage_diameter = 0;
  double image_diameter = 0;
};

inline std::vector<Point2> reflex_corners(const JordanDomain& poly) {
  std::vector<Point2> out;
  size_t n = poly.boundary.size();
  for (size_t i = 0; i < n; ++i) {
    Point2 prev = poly.boundary[(i + n - 1) % n];
    Point2 cur = poly.boundary[i];
    Point2 next = poly.boundary[(i + 1) % n];
    Point2 e1 = cur - prev, e2 = next - cur;
    if (cross(e1, e2) < -1e-6 * std::abs(e1) * std::abs(e2)) out.push_back(cur);
  }
  return out;
}

inline std::vector<SqueezeComponent> detect_squeezing(const MeshMap& f, const JordanDomain& Y,
                                                      double corner_tol) {
  const TriangleMesh& m = *f.mesh;
  std::vector<Point2> corners = reflex_corners(Y);
  std::vector<SqueezeComponent> out;
  if (corners.empty()) return out;

  std::vector<std::vector<int>> adj(m.vertices.size());
  for (auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      adj[t[k]].push_back(t[(k + 1) % 3]);
      adj[t[(k + 1) % 3]].push_back(t[k]);
    }

  for (Point2 c : corners) {
    std::vector<char> near(m.vertices.size(), 0);
    for (size_t v = 0; v < m.vertices.size(); ++v)
      near[v] = std::abs(f.values[v] - c) <= corner_tol ? 1 : 0;
    std::vector<char> seen(m.vertices.size(), 0);
    for (size_t v0 = 0; v0 < m.vertices.size(); ++v0) {
      if (!near[v0] || seen[v0]) continue;
      std::vector<int> comp, stack{int(v0)};
      seen[v0] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (int w : adj[v])
          if (near[w] && !seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
      SqueezeComponent sc;
      sc.corner = c;
      sc.vertex_count = int(comp.size());
      for (size_t i = 0; i < comp.size(); ++i)
        for (size_t j = i + 1; j < comp.size(); ++j) {
          sc.preimage_diameter = std::max(
              sc.preimage_diameter, std::abs(m.vertices[comp[i]] - m.vertices[comp[j]]));
          sc.image_diameter =
              std::max(sc.image_diameter, std::abs(f.values[comp[i]] - f.values[comp[j]]));
        }
      out.push_back(sc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------
// Discrete monotonicity: no orientation-reversed triangles; collapsed
// (near-zero Jacobian) regions are fine as long as fibers stay connected.
// ---------------------------------------------------------------------
enum class MonotoneVerdict { clean, collapsed_ok, reversed };

inline const char* to_string(MonotoneVerdict v) {
  switch (v) {
    case MonotoneVerdict::clean: return "clean";
    case MonotoneVerdict::collapsed_ok: return "collapsed_ok";
    default: return "reversed";
  }
}

struct MonotonicityReport {
  int reversed_count = 0;
  int near_zero_count = 0;
  double near_zero_area_fraction = 0;
  MonotoneVerdict verdict = MonotoneVerdict::clean;
};

inline MonotonicityReport check_discrete_monotonicity(const MeshMap& f,
                                                      double collapse_fraction = 1e-3) {
  auto ders = wirtinger(f);
  KahanSum abs_j, total;
  for (auto& d : ders) {
    abs_j.add(std::abs(d.jacobian) * d.area);
    total.add(d.area);
  }
  double mean_abs_j = abs_j.value() / std::max(total.value(), 1e-300);
  double tol = 1e-9 * std::max(mean_abs_j, 1e-30);
  MonotonicityReport rep;
  KahanSum near_zero_area;
  for (auto& d : ders) {
    if (d.jacobian < -tol)
      ++rep.reversed_count;
    else if (d.jacobian <= 1e-3 * mean_abs_j) {
      ++rep.near_zero_count;
      near_zero_area.add(d.area);
    }
  }
  rep.near_zero_area_fraction = near_zero_area.value() / std::max(total.value(), 1e-300);
  if (rep.reversed_count > 0)
    rep.verdict = MonotoneVerdict::reversed;
  else if (rep.near_zero_area_fraction > collapse_fraction)
    rep.verdict = MonotoneVerdict::collapsed_ok;
  return rep;
}

// Number of edge-connected components of the discrete fiber over y: the
// triangles whose image contains y (collapsed triangles count when their
// image segment passes within tol). Monotone maps have connected fibers.
inline int fiber_component_count(const MeshMap& f, Point2 y, double tol = 1e-9) {
  const TriangleMesh& m = *f.mesh;
  std::vector<int> hit;
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    auto& tri = m.triangles[t];
    cplx a = f.values[tri[0]], b = f.values[tri[1]], c = f.values[tri[2]];
    double area2 = cross(b - a, c - a);
    double scale = std::max({std::abs(b - a), std::abs(c - a), std::abs(c - b), tol});
    if (std::abs(area2) > 1e-12 * scale * scale) {
      double l0 = cross(b - y, c - y) / area2;
      double l1 = cross(c - y, a - y) / area2;
      double l2 = cross(a - y, b - y) / area2;
      if (std::min({l0, l1, l2}) >= -1e-9) hit.push_back(int(t));
    } else {
      if (point_segment_distance(y, a, b) <= tol || point_segment_distance(y, a, c) <= tol ||
          point_segment_distance(y, b, c) <= tol)
        hit.push_back(int(t));
    }
  }
  if (hit.empty()) return 0;
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (int t : hit) {
    auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int u = tri[k], v = tri[(k + 1) % 3];
      edge_tris[{std::min(u, v), std::max(u, v)}].push_back(t);
    }
  }
  std::map<int, std::vector<int>> adj;
  for (auto& [e, ts] : edge_tris)
    for (size_t i = 0; i < ts.size(); ++i)
      for (size_t j = i + 1; j < ts.size(); ++j) {
        adj[ts[i]].push_back(ts[j]);
        adj[ts[j]].push_back(ts[i]);
      }
  std::set<int> seen;
  int components = 0;
  for (int t0 : hit) {
    if (seen.count(t0)) continue;
    ++components;
    std::vector<int> stack{t0};
    seen.insert(t0);
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int w : adj[t])
        if (!seen.count(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
  }
  return components;
}

// ---------------------------------------------------------------------
// Escape transition of the pinched four-lobe family: harmonic extension
// escapes the target for small eps and stays inside near eps = 1. The
// bisection brackets the switch of escape_depth > depth_tol.
// ---------------------------------------------------------------------
struct CriticalEpsilon {
  double lo = 0;  // escapes here
  double hi = 0;  // stays inside here
  int solves = 0;
};

inline CriticalEpsilon estimate_critical_epsilon(double target_edge, double bracket_width = 0.05,
                                                 double depth_tol = 0.01) {
  auto escapes = [&](double eps) {
    CloverData cd = clover(eps);
    RkcResult r = rkc_extend_and_check(cd.X, cd.Y, cd.g, target_edge);
    return r.escape_depth > depth_tol;
  };
  CriticalEpsilon ce;
  ce.lo = 0.02;
  ce.hi = 1.0;
  require(escapes(ce.lo), "critical eps: expected escape at the small end");
  require(!escapes(ce.hi), "critical eps: expected containment at eps=1");
  ce.solves = 2;
  while (ce.hi - ce.lo > bracket_width) {
    double mid = 0.5 * (ce.lo + ce.hi);
    ++ce.solves;
    if (escapes(mid))
      ce.lo = mid;
    else
      ce.hi = mid;
  }
  return ce;
}

}  // namespace hopfharm
