#include <catch2/catch_amalgamated.hpp>

#include "hopfharm/mesh.hpp"

using namespace hopfharm;

namespace {
JordanDomain unit_square() {
  JordanDomain d;
  d.name = "square";
  d.boundary = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return d;
}

double triangle_area(const TriangleMesh& m, size_t t) {
  Point2 a = m.vertices[m.triangles[t][0]];
  Point2 b = m.vertices[m.triangles[t][1]];
  Point2 c = m.vertices[m.triangles[t][2]];
  return 0.5 * cross(b - a, c - a);
}

double min_angle_deg(const TriangleMesh& m) {
  double worst = 180;
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      Point2 a = m.vertices[m.triangles[t][k]];
      Point2 b = m.vertices[m.triangles[t][(k + 1) % 3]];
      Point2 c = m.vertices[m.triangles[t][(k + 2) % 3]];
      cplx u = b - a, v = c - a;
      double ang = std::acos(std::clamp(dot(u, v) / (std::abs(u) * std::abs(v)), -1.0, 1.0));
      worst = std::min(worst, ang * 180.0 / kPi);
    }
  }
  return worst;
}

MeshMap affine_map(std::shared_ptr<const TriangleMesh> mesh, cplx a, cplx b, cplx c) {
  MeshMap f;
  f.mesh = mesh;
  for (const auto& z : mesh->vertices) f.values.push_back(a * z + b * std::conj(z) + c);
  return f;
}
}  // namespace

TEST_CASE("triangulation covers the polygon exactly and respects quality") {
  JordanDomain sq = unit_square();
  TriangleMesh m = triangulate(sq, 0.1);
  KahanSum area;
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    double a = triangle_area(m, t);
    REQUIRE(a > 0);  // consistent orientation
    area.add(a);
  }
  REQUIRE(area.value() == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(min_angle_deg(m) >= 20.0);
  REQUIRE(m.boundary_loop.size() >= 4);
}

TEST_CASE("triangulation keeps a constraint polyline as mesh edges") {
  JordanDomain disk = regular_polygon({0, 0}, 1.0, 128, "disk");
  TriangleMesh m = triangulate(disk, 0.08, {{{0.0, 0.0}, {1.0, 0.0}}});
  // no triangle edge may cross the segment y = 0, 0 < x < 1
  for (const auto& tri : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      Point2 p = m.vertices[tri[k]], q = m.vertices[tri[(k + 1) % 3]];
      if (p.imag() * q.imag() < -1e-18) {
        double t = p.imag() / (p.imag() - q.imag());
        double x = p.real() + t * (q.real() - p.real());
        INFO("edge crosses the cut at x = " << x);
        REQUIRE_FALSE((x > 1e-9 && x < 1.0 - 1e-9));
      }
    }
  }
}

TEST_CASE("wirtinger derivatives are exact on affine maps") {
  auto mesh = std::make_shared<TriangleMesh>(triangulate(unit_square(), 0.15));
  cplx a{2, 1}, b{1, -3}, c{5, 0};
  MeshMap f = affine_map(mesh, a, b, c);
  auto ders = wirtinger(f);
  REQUIRE(ders.size() == mesh->triangles.size());
  for (const auto& d : ders) {
    REQUIRE(std::abs(d.h_z - a) < 1e-13);
    REQUIRE(std::abs(d.h_zbar - b) < 1e-13);
  }
}

TEST_CASE("dirichlet energy and image area are exact on affine maps") {
  auto mesh = std::make_shared<TriangleMesh>(triangulate(unit_square(), 0.15));
  cplx a{2, 1}, b{1, -3};
  MeshMap f = affine_map(mesh, a, b, {0, 0});
  // E = 2 * (|a|^2 + |b|^2) * area, J = |a|^2 - |b|^2 constant
  REQUIRE(dirichlet_energy(f) == Catch::Approx(2 * (std::norm(a) + std::norm(b))).epsilon(1e-12));
  REQUIRE(image_area_integral(f) == Catch::Approx(std::norm(a) - std::norm(b)).epsilon(1e-12));
  JacobianStats js = jacobian_stats(f);
  REQUIRE(js.min_jacobian == Catch::Approx(std::norm(a) - std::norm(b)));
  REQUIRE(js.count_negative == int(mesh->triangles.size()));
}

TEST_CASE("energy is bounded below by twice the absolute image area") {
  auto mesh = std::make_shared<TriangleMesh>(triangulate(unit_square(), 0.2));
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    MeshMap f;
    f.mesh = mesh;
    for (const auto& z : mesh->vertices)
      f.values.push_back(z + 0.3 * cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)});
    REQUIRE(dirichlet_energy(f) >= 2.0 * std::abs(image_area_integral(f)) - 1e-9);
  }
}

TEST_CASE("submesh_by_image uses closure semantics and protects mesh boundary") {
  auto mesh = std::make_shared<TriangleMesh>(triangulate(unit_square(), 0.1));
  MeshMap f = affine_map(mesh, {1, 0}, {0, 0}, {0, 0});  // identity
  JordanDomain right;
  right.boundary = {{0.5, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.5, 1.0}};
  Submesh sub = submesh_by_image(f, right);
  REQUIRE_FALSE(sub.triangle_ids.empty());
  auto bset = boundary_vertex_set(*mesh);
  for (int v : sub.interior_vertices) {
    REQUIRE(bset.count(v) == 0);
    REQUIRE(contains_point(right, f.values[v]));
  }
  // values exactly on the region edge still select their vertex
  MeshMap g = f;
  for (auto& w : g.values) w = {0.5, w.imag()};
  Submesh sub2 = submesh_by_image(g, right);
  REQUIRE(sub2.triangle_ids.size() == mesh->triangles.size());
}

TEST_CASE("mesh locator reconstructs points and interpolates the identity") {
  auto mesh = std::make_shared<TriangleMesh>(triangulate(unit_square(), 0.12));
  MeshLocator loc(mesh);
  MeshMap f = affine_map(mesh, {1, 0}, {0, 0}, {0, 0});
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Point2 p{rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)};
    cplx w = interpolate(f, loc, p);
    REQUIRE(std::abs(w - p) < 1e-12);
  }
}

TEST_CASE("symmetric disk mesh is exactly mirror symmetric") {
  SymmetricMesh sm = symmetric_disk_mesh(0.1);
  REQUIRE(sm.mirror.size() == sm.mesh.vertices.size());
  for (size_t v = 0; v < sm.mesh.vertices.size(); ++v) {
    Point2 p = sm.mesh.vertices[v];
    Point2 q = sm.mesh.vertices[sm.mirror[v]];
    REQUIRE(q.real() == -p.real());  // bitwise, IEEE negation
    REQUIRE(q.imag() == p.imag());
    REQUIRE(sm.mirror[sm.mirror[v]] == int(v));
  }
  // poles are exact
  bool north = false, south = false;
  for (const auto& p : sm.disk.boundary) {
    if (p == Point2{0.0, 1.0}) north = true;
    if (p == Point2{0.0, -1.0}) south = true;
  }
  REQUIRE(north);
  REQUIRE(south);
  REQUIRE(signed_area(sm.disk) == Catch::Approx(kPi).epsilon(1e-2));
}

TEST_CASE("is_boundary_vertex agrees with the boundary loop") {
  TriangleMesh m = triangulate(unit_square(), 0.2);
  auto bset = boundary_vertex_set(m);
  for (size_t v = 0; v < m.vertices.size(); ++v)
    REQUIRE(m.is_boundary_vertex(int(v)) == (bset.count(int(v)) > 0));
}
