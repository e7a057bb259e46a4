#pragma once

// Incremental Bowyer-Watson triangulation with Ruppert-style refinement:
// encroached constraint segments are split at midpoints, skinny or
// oversized triangles are fixed by circumcenter insertion. All inputs this
// library meshes have corner angles of 60 degrees or more, which is the
// regime where the 20-degree quality loop terminates.

// Included by mesh.hpp after the TriangleMesh definition; not standalone.

#include <deque>
#include <map>
#include <unordered_set>

#include "hopfharm/geometry.hpp"

namespace hopfharm {
namespace detail {

inline uint64_t edge_key(int u, int v) { return (uint64_t(uint32_t(u)) << 32) | uint32_t(v); }

struct BWTri {
  std::array<int, 3> v;
  Point2 cc;
  double r2;
  bool alive;
};

class Bowyer {
 public:
  std::vector<Point2> pts;  // indices 0..2 are the super-triangle
  std::vector<BWTri> tris;

  void init(const std::vector<Point2>& input) {
    require(!input.empty(), "triangulation needs input points");
    Point2 lo = input[0], hi = input[0];
    for (auto& p : input) {
      lo = {std::min(lo.real(), p.real()), std::min(lo.imag(), p.imag())};
      hi = {std::max(hi.real(), p.real()), std::max(hi.imag(), p.imag())};
    }
    Point2 c = 0.5 * (lo + hi);
    double R = 0.5 * std::abs(hi - lo) + 1e-12;
    pts.clear();
    tris.clear();
    edge_owner_.clear();
    for (int k = 0; k < 3; ++k) {
      double a = kPi / 2 + 2.0 * kPi * k / 3.0;
      pts.push_back(c + 60.0 * R * cplx(std::cos(a), std::sin(a)));
    }
    push_tri(0, 1, 2);
  }

  bool is_super(int v) const { return v < 3; }
  bool touches_super(const BWTri& t) const { return t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3; }

  // Range of triangles appended by the last successful insert.
  size_t new_begin = 0, new_end = 0;

  // Inserts p, returns its vertex id, or -1 when the cavity retriangulation
  // would create a degenerate triangle (the caller may skip such points).
  // `hint` is a triangle id to start the locate walk from.
  int insert(Point2 p, bool structural, int hint = -1) {
    int seed = locate(p, hint);
    if (seed < 0) return -1;
    for (int attempt = 0; attempt < 2; ++attempt) {
      // Cavity: triangles whose circumcircle admits p, edge-connected to
      // the seed. The retry also absorbs triangles containing p in closure,
      // which settles rim degeneracies when p sits on a circumcircle.
      std::vector<int> bad{seed};
      std::unordered_set<int> in_cavity{seed};
      std::vector<int> stack{seed};
      while (!stack.empty()) {
        int ti = stack.back();
        stack.pop_back();
        for (int k = 0; k < 3; ++k) {
          int nb = neighbor(ti, k);
          if (nb < 0 || in_cavity.count(nb)) continue;
          if (in_circle(tris[nb], p) ||
              (attempt == 1 && min_barycentric(tris[nb], p) >= -1e-12)) {
            in_cavity.insert(nb);
            bad.push_back(nb);
            stack.push_back(nb);
          }
        }
      }

      // Cavity boundary: directed edges whose mate lies outside the cavity.
      struct Rim {
        int u, v;
      };
      std::vector<Rim> rim;
      bool degenerate = false;
      for (int ti : bad) {
        auto& t = tris[ti];
        for (int k = 0; k < 3 && !degenerate; ++k) {
          int nb = neighbor(ti, k);
          if (nb >= 0 && in_cavity.count(nb)) continue;
          int u = t.v[k], v = t.v[(k + 1) % 3];
          if (cross(pts[v] - pts[u], p - pts[u]) <= 0)
            degenerate = true;
          else
            rim.push_back({u, v});
        }
        if (degenerate) break;
      }
      if (degenerate) {
        if (attempt == 0) continue;
        require(!structural, "triangulation: cannot insert structural point");
        return -1;
      }
      int vid = int(pts.size());
      pts.push_back(p);
      for (int ti : bad) kill_tri(ti);
      new_begin = tris.size();
      for (auto& e : rim) push_tri(e.u, e.v, vid);
      new_end = tris.size();
      return vid;
    }
    return -1;
  }

 private:
  // Directed edge (u,v) -> the alive triangle listing that edge.
  std::unordered_map<uint64_t, int> edge_owner_;
  int last_alive_ = 0;

  bool in_circle(const BWTri& t, Point2 p) const {
    double dx = p.real() - t.cc.real(), dy = p.imag() - t.cc.imag();
    return dx * dx + dy * dy <= t.r2 * (1.0 + 1e-11);
  }

  // Alive triangle across the k-th directed edge of triangle ti.
  int neighbor(int ti, int k) const {
    const auto& t = tris[ti];
    auto it = edge_owner_.find(edge_key(t.v[(k + 1) % 3], t.v[k]));
    return it == edge_owner_.end() ? -1 : it->second;
  }

  // Straight walk from a hint toward p; the triangulation always covers the
  // super-triangle, so the walk terminates at a closure-containing triangle.
  int locate(Point2 p, int hint) const {
    int cur = (hint >= 0 && hint < int(tris.size()) && tris[hint].alive) ? hint : last_alive_;
    if (!tris[cur].alive) cur = -1;
    if (cur >= 0) {
      for (int steps = 0; steps < 20000; ++steps) {
        const BWTri& t = tris[cur];
        Point2 a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
        double area2 = cross(b - a, c - a);
        double l[3] = {cross(b - p, c - p) / area2, cross(c - p, a - p) / area2,
                       cross(a - p, b - p) / area2};
        int worst = 0;
        if (l[1] < l[worst]) worst = 1;
        if (l[2] < l[worst]) worst = 2;
        if (l[worst] >= -1e-12) return cur;
        // l[worst] < 0: p lies beyond the edge opposite vertex `worst`,
        // which is the directed edge starting at vertex worst+1.
        int nb = neighbor(cur, (worst + 1) % 3);
        if (nb < 0) break;
        cur = nb;
      }
    }
    // Fallback scan, for dead hints or numerically stuck walks.
    int best = -1;
    double best_quality = -1e-9;
    for (size_t i = 0; i < tris.size(); ++i) {
      if (!tris[i].alive) continue;
      double q = min_barycentric(tris[i], p);
      if (q > best_quality) {
        best_quality = q;
        best = int(i);
      }
    }
    return best;
  }

  double min_barycentric(const BWTri& t, Point2 p) const {
    Point2 a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
    double area2 = cross(b - a, c - a);
    return std::min({cross(b - p, c - p), cross(c - p, a - p), cross(a - p, b - p)}) / area2;
  }

  void kill_tri(int ti) {
    auto& t = tris[ti];
    t.alive = false;
    for (int k = 0; k < 3; ++k) {
      auto it = edge_owner_.find(edge_key(t.v[k], t.v[(k + 1) % 3]));
      if (it != edge_owner_.end() && it->second == ti) edge_owner_.erase(it);
    }
  }

  void push_tri(int a, int b, int c) {
    BWTri t{{a, b, c}, {0, 0}, 0, true};
    long double bx = pts[b].real() - pts[a].real(), by = pts[b].imag() - pts[a].imag();
    long double cx = pts[c].real() - pts[a].real(), cy = pts[c].imag() - pts[a].imag();
    long double d = 2.0L * (bx * cy - by * cx);
    require(d != 0.0L, "triangulation: degenerate triangle");
    long double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    long double ux = (cy * b2 - by * c2) / d;
    long double uy = (bx * c2 - cx * b2) / d;
    t.cc = {pts[a].real() + double(ux), pts[a].imag() + double(uy)};
    t.r2 = double(ux * ux + uy * uy);
    int id = int(tris.size());
    tris.push_back(t);
    edge_owner_[edge_key(a, b)] = id;
    edge_owner_[edge_key(b, c)] = id;
    edge_owner_[edge_key(c, a)] = id;
    last_alive_ = id;
  }
};

class Refiner {
 public:
  Refiner(const JordanDomain& d, double target_edge,
          const std::vector<std::vector<Point2>>& constraints)
      : dom_(d), target_(target_edge) {
    diam_ = polygon_diameter(d.boundary);
    build_chain(constraints);
  }

  TriangleMesh run();

 private:
  const JordanDomain& dom_;
  double target_;
  double diam_;
  Bowyer bw_;
  struct Seg {
    int a, b;
    bool alive;
  };
  std::vector<Seg> segs_;
  std::vector<Point2> chain_points_;
  std::vector<std::pair<int, int>> chain_segs_;  // indices into chain_points_
  std::deque<int> tri_queue_;
  std::deque<int> seg_queue_;
  size_t insert_budget_ = 300000;

  int add_chain_point(Point2 p) {
    for (size_t i = 0; i < chain_points_.size(); ++i)
      if (std::abs(chain_points_[i] - p) <= 1e-12 * diam_) return int(i);
    chain_points_.push_back(p);
    return int(chain_points_.size()) - 1;
  }

  void add_chain_polyline(const std::vector<Point2>& pts, bool closed) {
    size_t n = pts.size();
    size_t edges = closed ? n : n - 1;
    std::vector<int> ids(n);
    for (size_t i = 0; i < n; ++i) ids[i] = add_chain_point(pts[i]);
    for (size_t i = 0; i < edges; ++i) {
      Point2 a = pts[i], b = pts[(i + 1) % n];
      int pieces = std::max(1, int(std::ceil(std::abs(b - a) / target_ - 1e-12)));
      int prev = ids[i];
      for (int k = 1; k < pieces; ++k) {
        int mid = add_chain_point(a + (b - a) * (double(k) / pieces));
        chain_segs_.push_back({prev, mid});
        prev = mid;
      }
      chain_segs_.push_back({prev, ids[(i + 1) % n]});
    }
  }

  void build_chain(const std::vector<std::vector<Point2>>& constraints) {
    add_chain_polyline(dom_.boundary, true);
    for (auto& c : constraints) {
      require(c.size() >= 2, "constraint polyline needs at least 2 points");
      add_chain_polyline(c, false);
    }
  }

  bool centroid_inside(const BWTri& t) const {
    Point2 c = (bw_.pts[t.v[0]] + bw_.pts[t.v[1]] + bw_.pts[t.v[2]]) / 3.0;
    return locate_point(dom_.boundary, c) == PointLocation::inside;
  }

  bool is_bad(int ti) const {
    const BWTri& t = bw_.tris[ti];
    if (!t.alive || bw_.touches_super(t)) return false;
    Point2 a = bw_.pts[t.v[0]], b = bw_.pts[t.v[1]], c = bw_.pts[t.v[2]];
    double la = std::abs(c - b), lb = std::abs(a - c), lc = std::abs(b - a);
    double longest = std::max({la, lb, lc});
    bool oversize = longest > target_ * (1.0 + 1e-9);
    double area2 = std::abs(cross(b - a, c - a));
    // min angle via sin(A) = area2 / (lb*lc) at the corner opposite la
    double sin_min = std::min({area2 / (lb * lc), area2 / (la * lc), area2 / (la * lb)});
    bool skinny = sin_min < std::sin(20.0 * kPi / 180.0) * (1.0 - 1e-9);
    if (!oversize && !skinny) return false;
    return centroid_inside(t);
  }

  void push_if_bad(int ti) {
    if (is_bad(ti)) tri_queue_.push_back(ti);
  }

  bool seg_encroached_by(const Seg& s, Point2 p) const {
    Point2 m = 0.5 * (bw_.pts[s.a] + bw_.pts[s.b]);
    double r2 = std::norm(bw_.pts[s.a] - m);
    return std::norm(p - m) < r2 * (1.0 - 1e-12);
  }

  bool seg_encroached_by_any_vertex(int si) const {
    const Seg& s = segs_[si];
    for (size_t v = 3; v < bw_.pts.size(); ++v) {
      if (int(v) == s.a || int(v) == s.b) continue;
      if (seg_encroached_by(s, bw_.pts[v])) return true;
    }
    return false;
  }

  int seg_strictly_encroached_by(Point2 p) const {
    for (size_t i = 0; i < segs_.size(); ++i) {
      if (!segs_[i].alive) continue;
      if (seg_encroached_by(segs_[i], p)) return int(i);
    }
    return -1;
  }

  int nearest_alive_seg(Point2 p) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < segs_.size(); ++i) {
      if (!segs_[i].alive) continue;
      double d = point_segment_distance(p, bw_.pts[segs_[i].a], bw_.pts[segs_[i].b]);
      if (d < best_d) {
        best_d = d;
        best = int(i);
      }
    }
    return best;
  }

  int guarded_insert(Point2 p, bool structural, int hint = -1) {
    require(bw_.pts.size() < insert_budget_, "triangulation: refinement budget exceeded");
    int vid = bw_.insert(p, structural, hint);
    if (vid < 0) return vid;
    for (size_t t = bw_.new_begin; t < bw_.new_end; ++t) push_if_bad(int(t));
    for (size_t i = 0; i < segs_.size(); ++i)
      if (segs_[i].alive && vid != segs_[i].a && vid != segs_[i].b &&
          seg_encroached_by(segs_[i], p))
        seg_queue_.push_back(int(i));
    return vid;
  }

  void split_seg(int si) {
    Seg s = segs_[si];
    segs_[si].alive = false;
    Point2 mid = 0.5 * (bw_.pts[s.a] + bw_.pts[s.b]);
    int vid = guarded_insert(mid, true);
    require(vid >= 0, "triangulation: segment split failed");
    segs_.push_back({s.a, vid, true});
    seg_queue_.push_back(int(segs_.size()) - 1);
    segs_.push_back({vid, s.b, true});
    seg_queue_.push_back(int(segs_.size()) - 1);
  }

  void pump_segments() {
    size_t guard = 0;
    while (!seg_queue_.empty()) {
      require(++guard < 1000000, "triangulation: segment queue did not settle");
      int si = seg_queue_.front();
      seg_queue_.pop_front();
      if (!segs_[si].alive) continue;
      if (seg_encroached_by_any_vertex(si)) split_seg(si);
    }
  }
};

inline TriangleMesh Refiner::run() {
  std::vector<Point2> all = chain_points_;
  bw_.init(all);
  std::vector<int> vid(chain_points_.size());
  for (size_t i = 0; i < chain_points_.size(); ++i) {
    vid[i] = bw_.insert(chain_points_[i], true);
    require(vid[i] >= 0, "triangulation: boundary point rejected");
  }
  for (auto& [a, b] : chain_segs_) segs_.push_back({vid[a], vid[b], true});

  for (size_t i = 0; i < segs_.size(); ++i) seg_queue_.push_back(int(i));
  pump_segments();

  for (size_t i = 0; i < bw_.tris.size(); ++i) push_if_bad(int(i));
  size_t guard = 0;
  while (!tri_queue_.empty()) {
    require(++guard < 2000000, "triangulation: quality queue did not settle");
    int ti = tri_queue_.front();
    tri_queue_.pop_front();
    if (!is_bad(ti)) continue;
    Point2 cc = bw_.tris[ti].cc;
    int enc = seg_strictly_encroached_by(cc);
    if (enc < 0 && locate_point(dom_.boundary, cc) != PointLocation::inside)
      enc = nearest_alive_seg(cc);
    if (enc >= 0) {
      split_seg(enc);
      pump_segments();
      push_if_bad(ti);
      continue;
    }
    guarded_insert(cc, false, ti);
    pump_segments();
  }

  // Extraction: alive interior triangles, compacted vertex ids.
  TriangleMesh out;
  std::vector<int> remap(bw_.pts.size(), -1);
  auto mapped = [&](int v) {
    if (remap[v] < 0) {
      remap[v] = int(out.vertices.size());
      out.vertices.push_back(bw_.pts[v]);
    }
    return remap[v];
  };
  for (auto& t : bw_.tris) {
    if (!t.alive || bw_.touches_super(t) || !centroid_inside(t)) continue;
    out.triangles.push_back({mapped(t.v[0]), mapped(t.v[1]), mapped(t.v[2])});
  }
  require(!out.triangles.empty(), "triangulation: no interior triangles");

  std::unordered_set<uint64_t> edge_set;
  for (auto& t : out.triangles)
    for (int k = 0; k < 3; ++k) {
      int u = t[k], v = t[(k + 1) % 3];
      edge_set.insert(edge_key(std::min(u, v), std::max(u, v)));
    }
  for (auto& s : segs_) {
    if (!s.alive) continue;
    int u = remap[s.a], v = remap[s.b];
    require(u >= 0 && v >= 0 && edge_set.count(edge_key(std::min(u, v), std::max(u, v))),
            "triangulation: constraint edge lost");
  }

  KahanSum area_sum;
  for (auto& t : out.triangles) {
    double a2 = cross(out.vertices[t[1]] - out.vertices[t[0]], out.vertices[t[2]] - out.vertices[t[0]]);
    require(a2 > 0, "triangulation: inverted triangle in output");
    area_sum.add(0.5 * a2);
  }
  double poly_area = signed_area(dom_.boundary);
  require(std::abs(area_sum.value() - poly_area) <= 1e-9 * poly_area,
          "triangulation: covered area mismatch");

  rebuild_boundary_loop(out);
  return out;
}

}  // namespace detail
}  // namespace hopfharm
