#include <catch2/catch_amalgamated.hpp>

#include "hopfharm/alternating.hpp"

using namespace hopfharm;

namespace {
struct HeartRun {
  HeartData heart;
  SymmetricMesh sm;
  AlternatingResult res;
};

const HeartRun& heart_run() {
  static HeartRun run = [] {
    HeartRun r;
    r.heart = heart_setup();
    r.sm = symmetric_disk_mesh(0.08);
    AlternatingConfig cfg;
    cfg.Y = r.heart.Y;
    cfg.Y1 = r.heart.Y1;
    cfg.Y2 = r.heart.Y2;
    cfg.max_iters = 30;
    cfg.sup_tol = 0;
    cfg.energy_tol = 0;
    r.res = run_alternating(star_initial_map(r.sm, r.heart.g), cfg);
    return r;
  }();
  return run;
}
}  // namespace

TEST_CASE("heart pieces decompose the target as expected") {
  const HeartData& h = heart_run().heart;
  REQUIRE(is_convex(h.Y1));
  REQUIRE(is_convex(h.Y2));
  REQUIRE_FALSE(is_convex(h.Y));
  // the dimple where the two arcs cross is the unique reflex corner
  auto reflex = reflex_corners(h.Y);
  REQUIRE(reflex.size() == 1);
  REQUIRE(reflex[0].real() == 0.0);
  REQUIRE(reflex[0].imag() > 0.0);
}

TEST_CASE("symmetrized boundary values carry exact odd symmetry") {
  const HeartRun& r = heart_run();
  std::vector<cplx> bv = symmetrized_boundary_values(r.sm, r.heart.g);
  const auto& loop = r.sm.mesh.boundary_loop;
  std::vector<int> pos(r.sm.mesh.vertices.size(), -1);
  for (size_t i = 0; i < loop.size(); ++i) pos[loop[i]] = int(i);
  for (size_t i = 0; i < loop.size(); ++i) {
    int mv = r.sm.mirror[loop[i]];
    REQUIRE(pos[mv] >= 0);
    REQUIRE(bv[pos[mv]] == -std::conj(bv[i]));  // bitwise
  }
}

TEST_CASE("star initial map is an odd-symmetric homeomorphism onto the closed heart") {
  const HeartRun& r = heart_run();
  MeshMap h0 = star_initial_map(r.sm, r.heart.g);
  REQUIRE(odd_symmetry_violation(r.sm, h0) == 0.0);
  auto bset = boundary_vertex_set(r.sm.mesh);
  for (size_t v = 0; v < h0.values.size(); ++v) {
    if (bset.count(int(v))) continue;
    REQUIRE(locate_point(r.heart.Y, h0.values[v]) != PointLocation::outside);
  }
  MonotonicityReport mono = check_discrete_monotonicity(h0);
  REQUIRE(mono.verdict != MonotoneVerdict::reversed);
}

TEST_CASE("alternating rounds never increase energy and never move the trace") {
  const HeartRun& r = heart_run();
  for (size_t i = 1; i < r.res.trace.size(); ++i)
    REQUIRE(r.res.trace[i].energy <= r.res.trace[i - 1].energy + 1e-9);
  std::vector<cplx> bv = symmetrized_boundary_values(r.sm, r.heart.g);
  const auto& loop = r.sm.mesh.boundary_loop;
  for (size_t i = 0; i < loop.size(); ++i)
    REQUIRE(r.res.map.values[loop[i]] == bv[i]);  // bitwise
}

TEST_CASE("alternating limit restores symmetry and lowers the residual") {
  const HeartRun& r = heart_run();
  REQUIRE(odd_symmetry_violation(r.sm, r.res.map) < 1e-8);
  REQUIRE(r.res.trace.back().hopf_residual < 0.5 * r.res.trace.front().hopf_residual);
  REQUIRE(r.res.status == AlternatingStatus::max_iters);  // convergence is not certified
}

TEST_CASE("harmonic extension is already a fixed point of replacement") {
  const HeartRun& r = heart_run();
  auto mesh = std::make_shared<TriangleMesh>(r.sm.mesh);
  std::vector<cplx> bv = symmetrized_boundary_values(r.sm, r.heart.g);
  AlternatingConfig cfg;
  cfg.Y = r.heart.Y;
  cfg.Y1 = r.heart.Y1;
  cfg.Y2 = r.heart.Y2;
  cfg.max_iters = 4;
  AlternatingResult res = run_alternating(mesh, bv, cfg);
  REQUIRE(res.status == AlternatingStatus::converged);
  for (size_t i = 1; i < res.trace.size(); ++i) REQUIRE(res.trace[i].sup_delta < 1e-9);
}

TEST_CASE("single convex cell converges immediately to the harmonic map") {
  JordanDomain disk = regular_polygon({0, 0}, 1.0, 128, "disk");
  JordanDomain target = regular_polygon({0, 0}, 0.8, 128, "target");
  std::vector<cplx> vals;
  for (const auto& p : target.boundary) vals.push_back(p);
  BoundaryMap g = boundary_map_from_polygon(disk.boundary, vals);
  AlternatingConfig cfg;
  cfg.Y = target;
  cfg.Y1 = target;
  cfg.Y2 = target;
  cfg.max_iters = 10;
  AlternatingResult res = run_alternating(disk, g, cfg, 0.1);
  REQUIRE(res.status == AlternatingStatus::converged);
  REQUIRE(res.iterations <= 3);
}

TEST_CASE("squeezing is detected at the reflex corner after the flow") {
  const HeartRun& r = heart_run();
  Point2 dimple = reflex_corners(r.heart.Y)[0];
  auto comps = detect_squeezing(r.res.map, r.heart.Y, 0.05);
  REQUIRE_FALSE(comps.empty());
  bool at_dimple = false;
  for (const auto& c : comps)
    if (std::abs(c.corner - dimple) < 1e-12 && c.vertex_count >= 1) at_dimple = true;
  REQUIRE(at_dimple);
}

TEST_CASE("monotonicity verdicts distinguish clean, collapsed, and reversed maps") {
  JordanDomain sq;
  sq.boundary = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto mesh = std::make_shared<TriangleMesh>(triangulate(sq, 0.15));
  MeshMap ident;
  ident.mesh = mesh;
  for (const auto& z : mesh->vertices) ident.values.push_back(z);
  REQUIRE(check_discrete_monotonicity(ident).verdict == MonotoneVerdict::clean);

  MeshMap flipped = ident;
  for (auto& w : flipped.values) w = std::conj(w);
  REQUIRE(check_discrete_monotonicity(flipped).verdict == MonotoneVerdict::reversed);
}

TEST_CASE("fiber components count preimages of a point") {
  JordanDomain sq;
  sq.boundary = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto mesh = std::make_shared<TriangleMesh>(triangulate(sq, 0.15));
  MeshMap ident;
  ident.mesh = mesh;
  for (const auto& z : mesh->vertices) ident.values.push_back(z);
  REQUIRE(fiber_component_count(ident, {0.5, 0.5}) == 1);
  REQUIRE(fiber_component_count(ident, {5.0, 5.0}) == 0);
}
