#include <doctest.h>

#include <cmath>

#include "diamatch/error.hpp"
#include "diamatch/geometry.hpp"
#include "diamatch/random.hpp"

using namespace diamatch;

namespace {

/// Exact orientation for coordinates that are integer multiples of 2^-53 in
/// [0, 2): scaled to integers the determinant fits in 128 bits.
int orient_oracle(Point2 a, Point2 b, Point2 c) {
  auto s = [](double v) { return static_cast<__int128>(std::ldexp(v, 53)); };
  const __int128 det = (s(b.x) - s(a.x)) * (s(c.y) - s(a.y)) - (s(b.y) - s(a.y)) * (s(c.x) - s(a.x));
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

}  // namespace

TEST_CASE("diametral disk is centered at the midpoint with half the length as radius") {
  const auto d = diametral_disk({0, 0}, {6, 8});
  CHECK(d.disk.center == Point2{3, 4});
  CHECK(d.disk.radius == 5.0);
  CHECK_FALSE(d.degenerate);
  CHECK(diametral_disk({1, 1}, {1, 1}).degenerate);
}

TEST_CASE("signed projection along a directed line") {
  CHECK(signed_projection({0, 0}, {2, 0}, {5, 7}) == 5.0);
  CHECK(signed_projection({0, 0}, {2, 0}, {-3, 1}) == -3.0);
  CHECK(signed_projection({1, 1}, {2, 2}, {1, 3}) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(signed_projection({1, 1}, {1, 1}, {0, 0}), GeometryError);
}

TEST_CASE("circle-circle intersection") {
  const Tolerance tol;
  SUBCASE("two points lie on both circles") {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
      const Disk a{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.2, 1.5)};
      const Disk b{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.2, 1.5)};
      for (Point2 p : circle_circle_intersection(a, b, tol)) {
        CHECK(std::fabs(distance(p, a.center) - a.radius) < 1e-12);
        CHECK(std::fabs(distance(p, b.center) - b.radius) < 1e-12);
      }
    }
  }
  SUBCASE("tangent circles give a single point") {
    const auto pts = circle_circle_intersection({{0, 0}, 1}, {{2, 0}, 1}, tol);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == doctest::Approx(1.0));
    CHECK(std::fabs(pts[0].y) < 1e-12);
  }
  SUBCASE("separate or nested circles do not meet") {
    CHECK(circle_circle_intersection({{0, 0}, 1}, {{3, 0}, 1}, tol).empty());
    CHECK(circle_circle_intersection({{0, 0}, 5}, {{1, 0}, 1}, tol).empty());
    CHECK(circle_circle_intersection({{0, 0}, 2}, {{0, 0}, 1}, tol).empty());
  }
  SUBCASE("identical circles are rejected") {
    CHECK_THROWS_AS(circle_circle_intersection({{1, 2}, 3}, {{1, 2}, 3}, tol), GeometryError);
  }
  SUBCASE("crossing at known points") {
    const auto pts = circle_circle_intersection({{0, 0}, 5}, {{8, 0}, 5}, tol);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == doctest::Approx(4.0));
    CHECK(std::fabs(pts[0].y) == doctest::Approx(3.0));
    CHECK(pts[0].y == doctest::Approx(-pts[1].y));
  }
}

TEST_CASE("circle inversion") {
  const Point2 c{1, -2};
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Point2 p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double k = rng.uniform(0.5, 4.0);
    const Point2 img = invert_point(c, k, p);
    CHECK(distance(img, c) * distance(p, c) == doctest::Approx(k));
    CHECK(cross(p - c, img - c) == doctest::Approx(0.0).epsilon(1e-9));
    const Point2 back = invert_point(c, k, img);
    CHECK(distance(back, p) < 1e-9 * (1 + norm(p)));
  }
  // Points on the circle of inversion are fixed.
  CHECK(distance(invert_point({0, 0}, 4.0, {2, 0}), Point2{2, 0}) < 1e-15);
  CHECK_THROWS_AS(invert_point(c, 1.0, c), GeometryError);
  CHECK_THROWS_AS(invert_point(c, 0.0, {0, 0}), ValidationError);
}

TEST_CASE("side of line") {
  const Tolerance tol;
  CHECK(side_of_line({0, 0}, {1, 0}, {0.5, 1}, tol) == Side::kLeft);
  CHECK(side_of_line({0, 0}, {1, 0}, {0.5, -1}, tol) == Side::kRight);
  CHECK(side_of_line({0, 0}, {1, 0}, {7, 0}, tol) == Side::kOn);
  CHECK(side_of_line({0, 0}, {1, 0}, {7, 1e-12}, tol) == Side::kOn);
}

TEST_CASE("exact orientation agrees with an integer oracle near degeneracy") {
  // Classic near-collinear grid around the line y = x.
  const Point2 b{12.0 / 16, 12.0 / 16}, c{24.0 / 16, 24.0 / 16};
  int mismatches = 0, zeros = 0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const Point2 a{0.5 + i * 0x1.0p-53, 0.5 + j * 0x1.0p-53};
      const int got = orient2d_sign(a, b, c);
      if (got != orient_oracle(a, b, c)) ++mismatches;
      if (got == 0) ++zeros;
    }
  }
  CHECK(mismatches == 0);
  CHECK(zeros > 0);
}

TEST_CASE("exact segment intersection") {
  CHECK(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {1, 5}));   // touching
  CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));   // collinear overlap
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
  CHECK_FALSE(segments_intersect({0, 0}, {1, 1}, {0, 1}, {0.4, 0.6}));
}

TEST_CASE("circumcircle and projections") {
  const Disk c = circumcircle({0, 0}, {4, 0}, {0, 3});
  CHECK(c.center.x == doctest::Approx(2.0));
  CHECK(c.center.y == doctest::Approx(1.5));
  CHECK(c.radius == doctest::Approx(2.5));
  CHECK_THROWS_AS(circumcircle({0, 0}, {1, 1}, {2, 2}), GeometryError);

  const Point2 f = orthogonal_projection({0, 0}, {2, 0}, {5, 3});
  CHECK(f == Point2{5, 0});
  CHECK_FALSE(line_intersection({{0, 0}, {1, 1}}, {{1, 0}, {2, 2}}).has_value());
  const auto x = line_intersection({{0, 0}, {1, 0}}, {{3, -1}, {0, 1}});
  REQUIRE(x.has_value());
  CHECK(*x == Point2{3, 0});
}

TEST_CASE("rigid motions preserve distances and invert") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const RigidMotion m = RigidMotion::rotation(rng.uniform(0, 6.3), {rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const Point2 a{rng.uniform(-2, 2), rng.uniform(-2, 2)}, b{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(distance(m.apply(a), m.apply(b)) == doctest::Approx(distance(a, b)));
    CHECK(distance(m.inverse().apply(m.apply(a)), a) < 1e-12);
  }
}

TEST_CASE("half-plane membership") {
  const HalfPlane upper{{{0, 0}, {1, 0}}, 1};
  const Tolerance tol;
  CHECK(upper.contains({3, 2}, tol));
  CHECK(upper.contains({3, 0}, tol));
  CHECK_FALSE(upper.contains({3, -0.1}, tol));
  CHECK(upper.signed_distance({0, 2}) == doctest::Approx(2.0));
}

TEST_CASE("worked geometry examples") {
  const Tolerance tol;
  const auto lens = circle_circle_intersection({{0, 0}, 1}, {{1, 0}, 1}, tol);
  REQUIRE(lens.size() == 2);
  for (Point2 p : lens) {
    CHECK(p.x == doctest::Approx(0.5));
    CHECK(std::fabs(p.y) == doctest::Approx(std::sqrt(3.0) / 2));
  }
  CHECK(invert_point({0, 0}, 1.0, {2, 0}) == Point2{0.5, 0});
  CHECK(invert_point({0, 0}, 1.0, {0.5, 0}) == Point2{2, 0});
  // (3, 1) lies on the circle of inversion (radius 2 about (1, 1)).
  CHECK(invert_point({1, 1}, 4.0, {3, 1}) == Point2{3, 1});
  CHECK(invert_point({1, 1}, 4.0, {5, 1}) == Point2{2, 1});
  CHECK(signed_projection({0, 0}, {0, 2}, {7, -1}) == -1.0);
  CHECK(orthogonal_projection({0, 0}, {0, 1}, {-3, 7}) == Point2{0, 7});
}
