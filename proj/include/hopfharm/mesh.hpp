#pragma once

#include <array>
#include <deque>
#include <map>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "hopfharm/geometry.hpp"

namespace hopfharm {

// Conforming triangulation of a Jordan domain. Triangles are positively
// oriented vertex triples; boundary_loop lists boundary vertex indices in
// positive order around the domain.
struct TriangleMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_loop;

  bool is_boundary_vertex(int v) const {
    for (int b : boundary_loop)
      if (b == v) return true;
    return false;
  }
};

// Complex-valued piecewise-affine map on a mesh, one value per vertex.
struct MeshMap {
  std::shared_ptr<const TriangleMesh> mesh;
  std::vector<cplx> values;
};

struct TriangleDerivatives {
  cplx h_z;
  cplx h_zbar;
  double jacobian;  // |h_z|^2 - |h_zbar|^2
  double area;      // positive triangle area in the source mesh
};

inline double triangle_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

inline std::unordered_set<int> boundary_vertex_set(const TriangleMesh& m) {
  return std::unordered_set<int>(m.boundary_loop.begin(), m.boundary_loop.end());
}

// Exact Wirtinger derivatives of the affine interpolant on one triangle:
// solve h_z*u + h_zbar*conj(u) = p over the two edge vectors.
inline TriangleDerivatives wirtinger_triangle(Point2 z1, Point2 z2, Point2 z3, cplx w1, cplx w2,
                                              cplx w3) {
  cplx u = z2 - z1, v = z3 - z1;
  cplx p = w2 - w1, q = w3 - w1;
  cplx det = u * std::conj(v) - v * std::conj(u);
  double area = triangle_area(z1, z2, z3);
  require(area > 0, "wirtinger: triangle with non-positive area");
  cplx h_z = (p * std::conj(v) - q * std::conj(u)) / det;
  cplx h_zbar = (u * q - v * p) / det;
  return {h_z, h_zbar, std::norm(h_z) - std::norm(h_zbar), area};
}

inline std::vector<TriangleDerivatives> wirtinger(const MeshMap& f) {
  const TriangleMesh& m = *f.mesh;
  require(f.values.size() == m.vertices.size(), "wirtinger: value count mismatch");
  std::vector<TriangleDerivatives> out;
  out.reserve(m.triangles.size());
  for (auto& t : m.triangles) {
    out.push_back(wirtinger_triangle(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]],
                                     f.values[t[0]], f.values[t[1]], f.values[t[2]]));
  }
  return out;
}

// Dirichlet energy of the piecewise-affine map, 2*(|h_z|^2+|h_zbar|^2)
// integrated triangle by triangle.
inline double dirichlet_energy(const MeshMap& f) {
  KahanSum s;
  for (auto& d : wirtinger(f)) s.add(2.0 * (std::norm(d.h_z) + std::norm(d.h_zbar)) * d.area);
  return s.value();
}

// Signed area swept by the image map: sum of area * jacobian. The energy
// bound E >= 2*|this| holds term by term.
inline double image_area_integral(const MeshMap& f) {
  KahanSum s;
  for (auto& d : wirtinger(f)) s.add(d.jacobian * d.area);
  return s.value();
}

struct JacobianStats {
  double min_jacobian;
  int count_negative;
  int count_near_zero;
  double area_weighted_min;  // min over triangles carrying >= 0.1% of mean area
};

inline JacobianStats jacobian_stats(const MeshMap& f, double near_zero_tol = 1e-10) {
  auto ders = wirtinger(f);
  require(!ders.empty(), "jacobian_stats: empty mesh");
  double mean_area = 0;
  for (auto& d : ders) mean_area += d.area;
  mean_area /= double(ders.size());
  JacobianStats st{std::numeric_limits<double>::infinity(), 0, 0,
                   std::numeric_limits<double>::infinity()};
  for (auto& d : ders) {
    st.min_jacobian = std::min(st.min_jacobian, d.jacobian);
    if (d.jacobian < 0) ++st.count_negative;
    if (std::abs(d.jacobian) <= near_zero_tol) ++st.count_near_zero;
    if (d.area >= 1e-3 * mean_area) st.area_weighted_min = std::min(st.area_weighted_min, d.jacobian);
  }
  return st;
}

// Submesh selected by where the map sends triangles.
struct Submesh {
  std::vector<int> triangle_ids;
  std::vector<int> interior_vertices;  // fully surrounded by selected triangles
  std::vector<int> boundary_vertices;  // remaining vertices of selected triangles
};

// Selects triangles whose three vertex images lie in the closure of
// `region`; values exactly on the region boundary count, so replacement
// rounds can pull clamped values back into the interior. A vertex is
// interior to the submesh when every triangle incident to it in the full
// mesh is selected and the vertex is not on the mesh boundary.
inline Submesh submesh_by_image(const MeshMap& f, const JordanDomain& region) {
  const TriangleMesh& m = *f.mesh;
  require(f.values.size() == m.vertices.size(), "submesh_by_image: value count mismatch");
  std::vector<int> incident_count(m.vertices.size(), 0);
  std::vector<int> selected_count(m.vertices.size(), 0);
  std::vector<char> image_inside(m.vertices.size(), 0);
  for (size_t v = 0; v < m.vertices.size(); ++v)
    image_inside[v] = contains_point(region, f.values[v]) ? 1 : 0;

  Submesh sub;
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) ++incident_count[tri[k]];
    if (image_inside[tri[0]] && image_inside[tri[1]] && image_inside[tri[2]]) {
      sub.triangle_ids.push_back(int(t));
      for (int k = 0; k < 3; ++k) ++selected_count[tri[k]];
    }
  }
  auto on_boundary = boundary_vertex_set(m);
  std::vector<char> used(m.vertices.size(), 0);
  for (int t : sub.triangle_ids)
    for (int k = 0; k < 3; ++k) used[m.triangles[t][k]] = 1;
  for (size_t v = 0; v < m.vertices.size(); ++v) {
    if (!used[v]) continue;
    if (selected_count[v] == incident_count[v] && !on_boundary.count(int(v)))
      sub.interior_vertices.push_back(int(v));
    else
      sub.boundary_vertices.push_back(int(v));
  }
  return sub;
}

// ---------------------------------------------------------------------
// Point location and interpolation on a mesh, bucket-grid accelerated.
// ---------------------------------------------------------------------
class MeshLocator {
 public:
  explicit MeshLocator(std::shared_ptr<const TriangleMesh> mesh, int grid = 64)
      : mesh_(std::move(mesh)), grid_(grid) {
    const auto& vs = mesh_->vertices;
    lo_ = hi_ = vs.at(0);
    for (auto& p : vs) {
      lo_ = {std::min(lo_.real(), p.real()), std::min(lo_.imag(), p.imag())};
      hi_ = {std::max(hi_.real(), p.real()), std::max(hi_.imag(), p.imag())};
    }
    cplx span = hi_ - lo_;
    inv_dx_ = grid_ / std::max(span.real(), 1e-300);
    inv_dy_ = grid_ / std::max(span.imag(), 1e-300);
    cells_.resize(size_t(grid_) * grid_);
    for (size_t t = 0; t < mesh_->triangles.size(); ++t) {
      auto& tri = mesh_->triangles[t];
      Point2 a = vs[tri[0]], b = vs[tri[1]], c = vs[tri[2]];
      int x0 = cell_x(std::min({a.real(), b.real(), c.real()}));
      int x1 = cell_x(std::max({a.real(), b.real(), c.real()}));
      int y0 = cell_y(std::min({a.imag(), b.imag(), c.imag()}));
      int y1 = cell_y(std::max({a.imag(), b.imag(), c.imag()}));
      for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y) cells_[size_t(y) * grid_ + x].push_back(int(t));
    }
  }

  // Returns triangle id and barycentric coordinates, or -1 if p lies
  // outside the mesh (beyond tol).
  int locate(Point2 p, std::array<double, 3>& bary, double tol = 1e-9) const {
    const auto& vs = mesh_->vertices;
    int best = -1;
    double best_violation = std::numeric_limits<double>::infinity();
    int cx = cell_x(p.real()), cy = cell_y(p.imag());
    for (int t : cells_[size_t(cy) * grid_ + cx]) {
      auto& tri = mesh_->triangles[t];
      Point2 a = vs[tri[0]], b = vs[tri[1]], c = vs[tri[2]];
      double area2 = cross(b - a, c - a);
      double l0 = cross(b - p, c - p) / area2;
      double l1 = cross(c - p, a - p) / area2;
      double l2 = cross(a - p, b - p) / area2;
      double violation = -std::min({l0, l1, l2});
      if (violation < best_violation) {
        best_violation = violation;
        best = t;
        bary = {l0, l1, l2};
      }
      if (violation <= 0) return t;
    }
    double diam = std::abs(hi_ - lo_);
    if (best >= 0 && best_violation <= tol / std::max(diam, 1e-300)) return best;
    return -1;
  }

  bool contains(Point2 p, double tol = 1e-9) const {
    std::array<double, 3> bary;
    return locate(p, bary, tol) >= 0;
  }

 private:
  int cell_x(double x) const { return std::clamp(int((x - lo_.real()) * inv_dx_), 0, grid_ - 1); }
  int cell_y(double y) const { return std::clamp(int((y - lo_.imag()) * inv_dy_), 0, grid_ - 1); }
  std::shared_ptr<const TriangleMesh> mesh_;
  int grid_;
  Point2 lo_, hi_;
  double inv_dx_, inv_dy_;
  std::vector<std::vector<int>> cells_;
};

inline cplx interpolate(const MeshMap& f, const MeshLocator& loc, Point2 p) {
  std::array<double, 3> b;
  int t = loc.locate(p, b);
  require(t >= 0, "interpolate: point outside mesh");
  auto& tri = f.mesh->triangles[t];
  return b[0] * f.values[tri[0]] + b[1] * f.values[tri[1]] + b[2] * f.values[tri[2]];
}

// Recomputes boundary_loop from the triangle set: boundary edges are the
// directed edges whose reverse never appears; they must chain into one cycle.
inline void rebuild_boundary_loop(TriangleMesh& m) {
  std::unordered_set<uint64_t> directed;
  auto key = [](int u, int v) { return (uint64_t(uint32_t(u)) << 32) | uint32_t(v); };
  for (auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) directed.insert(key(t[k], t[(k + 1) % 3]));
  std::map<int, int> succ;
  for (auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      int u = t[k], v = t[(k + 1) % 3];
      if (!directed.count(key(v, u))) {
        require(!succ.count(u), "boundary loop: branching boundary");
        succ[u] = v;
      }
    }
  require(!succ.empty(), "boundary loop: no boundary edges");
  m.boundary_loop.clear();
  int start = succ.begin()->first;
  int cur = start;
  do {
    m.boundary_loop.push_back(cur);
    auto it = succ.find(cur);
    require(it != succ.end(), "boundary loop: broken chain");
    cur = it->second;
    require(m.boundary_loop.size() <= succ.size(), "boundary loop: not a single cycle");
  } while (cur != start);
  require(m.boundary_loop.size() == succ.size(), "boundary loop: disconnected boundary");
}

}  // namespace hopfharm

#include "hopfharm/detail/delaunay.hpp"

namespace hopfharm {

// Conforming Delaunay refinement triangulation: boundary chords split to
// at most target_edge, minimum angle 20 degrees, longest edge at most
// target_edge. Optional interior constraint polylines become mesh edges.
inline TriangleMesh triangulate(const JordanDomain& d, double target_edge,
                                const std::vector<std::vector<Point2>>& constraints = {}) {
  validate_jordan(d);
  require(target_edge > 0, "triangulate: target_edge must be positive");
  detail::Refiner r(d, target_edge, constraints);
  return r.run();
}

struct SymmetricMesh {
  TriangleMesh mesh;
  std::vector<int> mirror;  // involution: vertex id of the x-negated twin
  JordanDomain disk;        // the full-disk polygon the mesh triangulates
};

// Unit-disk mesh that is exactly invariant under (x,y) -> (-x,y): the right
// half-disk is meshed, then mirrored by IEEE negation and glued along x=0.
inline SymmetricMesh symmetric_disk_mesh(double target_edge, int half_arc_segments = 0) {
  require(target_edge > 0, "symmetric_disk_mesh: target_edge must be positive");
  int m = half_arc_segments > 0 ? half_arc_segments
                                : std::max(16, int(std::ceil(kPi / target_edge)));
  std::vector<Point2> right_arc(m + 1);
  right_arc[0] = {0.0, -1.0};
  right_arc[m] = {0.0, 1.0};
  for (int j = 1; j < m; ++j) {
    double t = -kPi / 2 + kPi * j / m;
    right_arc[j] = {std::cos(t), std::sin(t)};
  }
  JordanDomain half;
  half.name = "half-disk";
  half.boundary = right_arc;  // closing edge (0,1)->(0,-1) is the diameter
  TriangleMesh hm = triangulate(half, target_edge);

  // Circumcenter insertions may land numerically on the axis; snap them.
  for (auto& p : hm.vertices)
    if (p.real() != 0.0 && std::abs(p.real()) < 1e-13) p = {0.0, p.imag()};

  SymmetricMesh out;
  std::vector<int> right_id(hm.vertices.size());
  out.mesh.vertices = hm.vertices;
  out.mirror.resize(hm.vertices.size());
  for (size_t v = 0; v < hm.vertices.size(); ++v) {
    right_id[v] = int(v);
    if (hm.vertices[v].real() == 0.0) {
      out.mirror[v] = int(v);
    } else {
      out.mirror[v] = int(out.mesh.vertices.size());
      out.mesh.vertices.push_back({-hm.vertices[v].real(), hm.vertices[v].imag()});
      out.mirror.push_back(int(v));
    }
  }
  out.mesh.triangles = hm.triangles;
  for (auto& t : hm.triangles) {
    std::array<int, 3> mt{out.mirror[t[0]], out.mirror[t[2]], out.mirror[t[1]]};
    out.mesh.triangles.push_back(mt);
  }
  rebuild_boundary_loop(out.mesh);

  out.disk.name = "disk";
  out.disk.boundary = right_arc;
  for (int j = m - 1; j >= 1; --j)
    out.disk.boundary.push_back({-right_arc[j].real(), right_arc[j].imag()});
  return out;
}

}  // namespace hopfharm
