#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "diamatch/kgon.hpp"
#include "test_util.hpp"

using namespace diamatch;
using namespace diamatch::testing;

namespace {

/// Smallest area of a regular k-gon with p, q on its boundary, by brute
/// force: for each orientation, the longest chord parallel to q - p is found
/// by casting rays from sampled boundary points of the unit polygon.
double grid_oracle_area(Point2 p, Point2 q, int k, int orientations, int starts) {
  const Vec2 w = q - p;
  const Vec2 u = w / norm(w);
  const double apothem = std::cos(M_PI / k);
  double best = INFINITY;
  for (int a = 0; a < orientations; ++a) {
    const double theta = 2.0 * M_PI / k * a / orientations;
    std::vector<Point2> v(k);
    std::vector<Vec2> normals(k);
    for (int j = 0; j < k; ++j) {
      v[j] = {std::cos(theta + 2 * M_PI * j / k), std::sin(theta + 2 * M_PI * j / k)};
      const double phi = theta + M_PI / k + 2 * M_PI * j / k;
      normals[j] = {std::cos(phi), std::sin(phi)};
    }
    double chord = 0;
    for (int s = 0; s < starts; ++s) {
      const double pos = double(s) * k / starts;
      const int e = int(pos);
      const Point2 start = v[e] + (pos - e) * (v[(e + 1) % k] - v[e]);
      double t = INFINITY;
      for (const Vec2& n : normals) {
        const double rate = dot(n, u);
        if (rate > 1e-15) t = std::min(t, (apothem - dot(n, start)) / rate);
      }
      if (std::isfinite(t)) chord = std::max(chord, t);
    }
    const double r = norm(w) / chord;
    best = std::min(best, 0.5 * k * r * r * std::sin(2 * M_PI / k));
  }
  return best;
}

RegularKGon hexagon_at(Point2 c, double r = 1.0) { return RegularKGon{6, c, r, 0.0}; }

}  // namespace

TEST_CASE("regular polygon basics") {
  const RegularKGon g{4, {1, 1}, std::sqrt(2.0), M_PI / 4};
  const auto v = g.vertices();
  REQUIRE(v.size() == 4);
  CHECK(v[0].x == doctest::Approx(2.0));
  CHECK(v[0].y == doctest::Approx(2.0));
  CHECK(g.area() == doctest::Approx(4.0));
  CHECK(g.apothem() == doctest::Approx(1.0));
  CHECK(g.boundary_distance({1, 1}) == doctest::Approx(-1.0));
  CHECK(g.boundary_distance({4, 1}) == doctest::Approx(2.0));
  CHECK(g.boundary_distance({3, 3}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(validation_code([] { RegularKGon{2, {}, 1, 0}.validate(); }) == "bad_k");
  CHECK(validation_code([] { RegularKGon{5, {}, 0, 0}.validate(); }) == "bad_kgon");
}

TEST_CASE("diametral polygon passes through both points") {
  const Tolerance tol;
  Rng rng(6);
  for (int t = 0; t < 60; ++t) {
    const int k = 3 + t % 10;
    const Point2 p{rng.uniform(-3, 3), rng.uniform(-3, 3)}, q{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const RegularKGon g = diametral_kgon(p, q, k, tol);
    const double d = distance(p, q);
    CHECK(std::fabs(g.boundary_distance(p)) <= tol.band(d));
    CHECK(std::fabs(g.boundary_distance(q)) <= tol.band(d));
    CHECK(g.boundary_distance(midpoint(p, q)) <= tol.band(d));
    // Closed forms: the longest chord of a regular polygon is its longest diagonal.
    const double expected = k % 2 == 0 ? d / 2 : d / (2 * std::cos(M_PI / (2 * k)));
    CHECK(g.circumradius == doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK(throws_geometry([] { diametral_kgon({1, 1}, {1, 1}, 6); }, GeometryError::Kind::kDegenerateDirection));
  CHECK(validation_code([] { diametral_kgon({0, 0}, {1, 1}, 2); }) == "bad_k");
}

TEST_CASE("many sides approach the diametral disk") {
  const Point2 p{0.3, -1}, q{2.1, 0.4};
  const RegularKGon g = diametral_kgon(p, q, 360);
  const double disk = diametral_disk(p, q).disk.area();
  CHECK(std::fabs(g.area() - disk) <= 0.01 * disk);
}

TEST_CASE("optimizer is no worse than a dense grid") {
  Rng rng(66);
  for (int t = 0; t < 4; ++t) {
    const Point2 p{rng.uniform(-1, 1), rng.uniform(-1, 1)}, q{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const RegularKGon g = diametral_kgon(p, q, 6);
    const double oracle = grid_oracle_area(p, q, 6, 2048, 2048);
    CHECK(g.area() <= oracle * (1 + 1e-4));
  }
}

TEST_CASE("symmetric input gives a symmetric optimum") {
  const Point2 p{0, 0}, q{2, 0};
  for (int k : {4, 6, 10}) {
    const RegularKGon g = diametral_kgon(p, q, k);
    const auto v = g.vertices();
    for (Point2 x : v) {
      const Point2 mirrored{x.x, -x.y};
      double nearest = INFINITY;
      for (Point2 y : v) nearest = std::min(nearest, distance(mirrored, y));
      CHECK(nearest <= 1e-6);
    }
  }
}

TEST_CASE("polygon separation") {
  const Tolerance tol;
  const RegularKGon a = hexagon_at({0, 0});
  const Separation far = kgon_disjoint(a, hexagon_at({20, 0}), tol);
  CHECK(far.disjoint);
  CHECK(far.gap == doctest::Approx(18.0));
  const Separation same = kgon_disjoint(a, a, tol);
  CHECK_FALSE(same.disjoint);
  CHECK(same.gap < 0);
  // Vertex-to-vertex: distance between nearest vertices.
  const Separation corner = kgon_disjoint(a, hexagon_at({3, 0}), tol);
  CHECK(corner.disjoint);
  CHECK(corner.gap == doctest::Approx(1.0));
  CHECK_FALSE(kgon_disjoint(a, hexagon_at({2, 0}), tol).disjoint);

  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const RegularKGon g1{3 + int(rng.below(8)), {rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(0.2, 2), rng.uniform(0, 1)};
    const RegularKGon g2{3 + int(rng.below(8)), {rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(0.2, 2), rng.uniform(0, 1)};
    const Separation s12 = kgon_disjoint(g1, g2, tol), s21 = kgon_disjoint(g2, g1, tol);
    CHECK(s12.disjoint == s21.disjoint);
    CHECK(s12.gap == doctest::Approx(s21.gap));
    if (s12.disjoint) {
      // The gap is a true distance: no vertex of one is closer to the other.
      double nearest = INFINITY;
      for (Point2 v : g1.vertices()) nearest = std::min(nearest, g2.boundary_distance(v));
      for (Point2 v : g2.vertices()) nearest = std::min(nearest, g1.boundary_distance(v));
      CHECK(nearest == doctest::Approx(s12.gap).epsilon(1e-9));
    }
    const RigidMotion m = RigidMotion::rotation(0.7, {4, -2});
    RegularKGon h1 = g1, h2 = g2;
    h1.center = m.apply(g1.center);
    h1.orientation += 0.7;
    h2.center = m.apply(g2.center);
    h2.orientation += 0.7;
    const Separation moved = kgon_disjoint(h1, h2, tol);
    CHECK(moved.disjoint == s12.disjoint);
    CHECK(moved.gap == doctest::Approx(s12.gap).epsilon(1e-9));
  }
}

TEST_CASE("square construction separates both matchings") {
  const Tolerance tol;
  for (int k : {6, 10, 14}) {
    for (double side : {1.0, 2.0, 10.0}) {
      const SquareReport rep = square_counterexample(k, side, tol);
      CHECK(rep.all_disjoint);
      for (const KGonPairing& m : rep.matchings) {
        CHECK(m.separation.disjoint);
        CHECK(m.symmetric_confirmed);
        CHECK(m.separation.gap == doctest::Approx(side * (1 - std::cos(M_PI / k))).epsilon(1e-6));
        CHECK(m.separation.gap > 10 * tol.band(side));
        for (int i = 0; i < 2; ++i) {
          const Point2 r = rep.instance.reds[i], b = rep.instance.blues[m.pairs[i]];
          CHECK(std::fabs(m.kgons[i].boundary_distance(r)) <= tol.band(side));
          CHECK(std::fabs(m.kgons[i].boundary_distance(b)) <= tol.band(side));
        }
      }
    }
  }
  CHECK(validation_code([] { square_counterexample(8, 1.0); }) == "bad_k");
  CHECK(validation_code([] { square_counterexample(2, 1.0); }) == "bad_k");
  CHECK(validation_code([] { square_counterexample(6, 0.0); }) == "bad_side");
}

TEST_CASE("square construction survives small perturbations") {
  const Tolerance tol;
  for (int k : {6, 10}) {
    const double side = 2.0;
    const SquareReport base = square_counterexample(k, side, tol);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      Instance inst = base.instance;
      for (auto* set : {&inst.reds, &inst.blues}) {
        for (Point2& p : *set) {
          p.x += rng.uniform(-1e-3, 1e-3) * side;
          p.y += rng.uniform(-1e-3, 1e-3) * side;
        }
      }
      const SquareReport rep = kgon_pairs_for_instance(inst, k, tol);
      CHECK(rep.all_disjoint);
    }
  }
  Rng rng(1);
  CHECK(validation_code([&] { kgon_pairs_for_instance(random_instance(3, rng), 6); }) == "size_mismatch");
}

TEST_CASE("segment construction") {
  const SegmentReport rep = segment_counterexample();
  CHECK(rep.no_three_collinear);
  CHECK(rep.both_non_crossing);
  CHECK(rep.some_non_crossing);
  for (const SegmentPairing& m : rep.matchings) {
    CHECK_FALSE(m.segments_cross);
    CHECK(m.weight == doctest::Approx(make_matching(rep.instance, m.pairs).weight));
  }
  CHECK(rep.matchings[0].pairs != rep.matchings[1].pairs);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SegmentReport jittered = segment_counterexample(1e-3, seed);
    CHECK(jittered.both_non_crossing);
    CHECK(jittered.no_three_collinear);
  }
}
