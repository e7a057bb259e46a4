#include <catch2/catch_amalgamated.hpp>

#include "hopfharm/geometry.hpp"

using namespace hopfharm;

namespace {
JordanDomain unit_square() {
  JordanDomain d;
  d.name = "square";
  d.boundary = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return d;
}

JordanDomain ell_shape() {
  JordanDomain d;
  d.name = "ell";
  d.boundary = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  return d;
}
}  // namespace

TEST_CASE("signed area of a regular n-gon matches (n/2) sin(2pi/n)") {
  for (int n : {8, 64, 256}) {
    JordanDomain d = regular_polygon({0, 0}, 1.0, n, "disk");
    double exact = 0.5 * n * std::sin(2.0 * kPi / n);
    REQUIRE(signed_area(d) == Catch::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("signed area is negative on reversed orientation") {
  JordanDomain d = unit_square();
  REQUIRE(signed_area(d) == Catch::Approx(1.0));
  std::reverse(d.boundary.begin(), d.boundary.end());
  REQUIRE(signed_area(d) == Catch::Approx(-1.0));
}

TEST_CASE("validate_jordan rejects degenerate and self-intersecting input") {
  JordanDomain bad;
  bad.boundary = {{0, 0}, {1, 0}};
  REQUIRE_THROWS(validate_jordan(bad));
  JordanDomain bowtie;
  bowtie.boundary = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  REQUIRE_THROWS(validate_jordan(bowtie));
  REQUIRE_NOTHROW(validate_jordan(unit_square()));
  REQUIRE_NOTHROW(validate_jordan(ell_shape()));
}

TEST_CASE("point_segment_distance handles interior foot and endpoints") {
  double t = -1;
  REQUIRE(point_segment_distance({0.5, 1.0}, {0, 0}, {1, 0}, &t) == Catch::Approx(1.0));
  REQUIRE(t == Catch::Approx(0.5));
  REQUIRE(point_segment_distance({-3, 4}, {0, 0}, {1, 0}, &t) == Catch::Approx(5.0));
  REQUIRE(t == Catch::Approx(0.0));
  REQUIRE(point_segment_distance({2, 0}, {0, 0}, {1, 0}, &t) == Catch::Approx(1.0));
  REQUIRE(t == Catch::Approx(1.0));
}

TEST_CASE("project_to_boundary reports distance, foot, and arclength") {
  JordanDomain sq = unit_square();
  auto pr = project_to_boundary(sq, {0.5, -2.0});
  REQUIRE(pr.distance == Catch::Approx(2.0));
  REQUIRE(pr.point.real() == Catch::Approx(0.5));
  REQUIRE(pr.point.imag() == Catch::Approx(0.0));
  REQUIRE(pr.arclength == Catch::Approx(0.5));

  // interior point projects to the nearest wall
  pr = project_to_boundary(sq, {0.9, 0.5});
  REQUIRE(pr.distance == Catch::Approx(0.1));
  REQUIRE(pr.point.real() == Catch::Approx(1.0));
}

TEST_CASE("locate_point classifies inside, boundary, and outside") {
  JordanDomain sq = unit_square();
  REQUIRE(locate_point(sq, {0.5, 0.5}) == PointLocation::inside);
  REQUIRE(locate_point(sq, {1.5, 0.5}) == PointLocation::outside);
  REQUIRE(locate_point(sq, {1.0, 0.5}) == PointLocation::boundary);
  REQUIRE(locate_point(sq, {1.0 + 1e-12, 0.5}) == PointLocation::boundary);
  REQUIRE(contains_point(sq, {1.0, 0.5}));
  REQUIRE(strictly_inside(sq, {0.5, 0.5}));
  REQUIRE_FALSE(strictly_inside(sq, {1.0, 0.5}));
}

TEST_CASE("locate_point works on a concave polygon") {
  JordanDomain ell = ell_shape();
  REQUIRE(locate_point(ell, {0.5, 1.5}) == PointLocation::inside);
  REQUIRE(locate_point(ell, {1.5, 1.5}) == PointLocation::outside);
  REQUIRE(locate_point(ell, {1.5, 0.5}) == PointLocation::inside);
}

TEST_CASE("is_convex distinguishes square from ell") {
  REQUIRE(is_convex(unit_square()));
  REQUIRE_FALSE(is_convex(ell_shape()));
  REQUIRE(is_convex(regular_polygon({0, 0}, 2.0, 128, "disk")));
}

TEST_CASE("clip_polygon_convex halves the square") {
  JordanDomain sq = unit_square();
  std::vector<Point2> right_slab = {{0.5, -1}, {2, -1}, {2, 2}, {0.5, 2}};
  auto clipped = clip_polygon_convex(sq.boundary, right_slab);
  REQUIRE(std::abs(signed_area(clipped)) == Catch::Approx(0.5));
}

TEST_CASE("somewhere convex probe accepts smooth boundary points and rejects reflex ones") {
  JordanDomain disk = regular_polygon({0, 0}, 1.0, 256, "disk");
  REQUIRE(somewhere_convex_probe(disk, {1.0, 0.0}, 0.2));
  // reentrant corner of the ell: the local intersection is not convex
  REQUIRE_FALSE(somewhere_convex_probe(ell_shape(), {1.0, 1.0}, 0.2));
}

TEST_CASE("polygon perimeter of a fine n-gon approaches the circle") {
  JordanDomain disk = regular_polygon({0, 0}, 1.0, 512, "disk");
  REQUIRE(polygon_perimeter(disk.boundary) == Catch::Approx(2 * kPi).epsilon(1e-4));
  // diameter is the bounding-box diagonal, a cheap mesh-size scale
  REQUIRE(polygon_diameter(disk.boundary) == Catch::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-4));
}
