#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "diamatch/intersection.hpp"
#include "diamatch/lemma_lab.hpp"
#include "test_util.hpp"

using namespace diamatch;
using namespace diamatch::testing;

namespace {

/// Circle through three points by solving the two bisector equations.
Point2 circumcenter_oracle(Point2 a, Point2 b, Point2 c) {
  const double a11 = 2 * (b.x - a.x), a12 = 2 * (b.y - a.y);
  const double a21 = 2 * (c.x - a.x), a22 = 2 * (c.y - a.y);
  const double r1 = squared_norm(b) - squared_norm(a), r2 = squared_norm(c) - squared_norm(a);
  const double det = a11 * a22 - a12 * a21;
  return {(r1 * a22 - r2 * a12) / det, (a11 * r2 - a21 * r1) / det};
}

/// Mirror image of p across the line through u and v.
Point2 reflect(Point2 p, Point2 u, Point2 v) {
  const Vec2 e = (v - u) / norm(v - u);
  const Point2 foot = u + dot(p - u, e) * e;
  return 2.0 * foot - p;
}

/// Distance from x to the circle with diameter xy.
double circle_gap(Point2 x, Point2 u, Point2 v) {
  return std::fabs(distance(x, midpoint(u, v)) - 0.5 * distance(u, v));
}

struct Triple {
  std::array<Point2, 3> p, q;
};

/// A maximum matching on three random pairs.
Triple max_triple(Rng& rng, double y_line = NAN) {
  Instance inst = random_instance(3, rng);
  if (!std::isnan(y_line)) {
    for (Point2& r : inst.reds) r.y = y_line;
  }
  const Matching m = max_matching(inst);
  Triple t;
  for (int i = 0; i < 3; ++i) {
    t.p[i] = inst.reds[i];
    t.q[i] = inst.blues[m.pairs[i]];
  }
  return t;
}

ShrinkState shrink(const Triple& t, const Tolerance& tol = {}) {
  return shrink_triple(t.p[0], t.q[0], t.p[1], t.q[1], t.p[2], t.q[2], tol);
}

}  // namespace

TEST_CASE("four-point criterion") {
  const Tolerance tol;
  const Lemma1Report r = check_lemma1({-1, 0}, {1, 0}, {2, 3}, {-2, 1}, tol);
  CHECK(r.straight_sum == 28.0);
  CHECK(r.crossed_sum == 12.0);
  CHECK(r.is_max_for_four);
  CHECK(r.projection_ok);
  CHECK(r.x_q1 == doctest::Approx(2.0));
  CHECK(r.x_q2 == doctest::Approx(-2.0));
  CHECK(r.x_q1_power == doctest::Approx(2.0));

  const Lemma1Report swapped = check_lemma1({-1, 0}, {1, 0}, {-2, 1}, {2, 3}, tol);
  CHECK_FALSE(swapped.is_max_for_four);
  CHECK(swapped.implication_holds());

  const Lemma1Report equal = check_lemma1({-1, 0}, {1, 0}, {0.5, 4}, {0.5, -3}, tol);
  CHECK(equal.is_max_for_four);
  CHECK(equal.projection_ok);
  CHECK(equal.straight_sum == equal.crossed_sum);

  CHECK(throws_geometry([] { check_lemma1({1, 1}, {1, 1}, {0, 0}, {2, 2}); },
                        GeometryError::Kind::kDegenerateDirection));

  Rng rng(4);
  int applicable = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point2 p1{rng.uniform(-1, 1), rng.uniform(-1, 1)}, p2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Point2 q1{rng.uniform(-1, 1), rng.uniform(-1, 1)}, q2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Lemma1Report rr = check_lemma1(p1, p2, q1, q2, tol);
    applicable += rr.is_max_for_four;
    CHECK(rr.implication_holds());
  }
  CHECK(applicable > 4000);
}

TEST_CASE("canonical frame") {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const Point2 p1{rng.uniform(-5, 5), rng.uniform(-5, 5)}, p2{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const CanonicalFrame f = CanonicalFrame::from_points(p1, p2);
    const double d = distance(p1, p2);
    CHECK(distance(f.to_frame(p1), Point2{-d / 2, 0}) < 1e-12 * (1 + d));
    CHECK(distance(f.to_frame(p2), Point2{d / 2, 0}) < 1e-12 * (1 + d));
    const Point2 x{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(distance(f.from_frame(f.to_frame(x)), x) < 1e-12 * 10);
  }
}

TEST_CASE("common point of three circles") {
  const Tolerance tol;
  SUBCASE("right-isoceles triangle with a vertical line") {
    const Point2 a{-1, 0}, b{1, 0}, c{0, 1};
    const auto frame = PerpendicularFrame::from_anchors(a, b, c, {0.3, 0}, {0.7, -0.2}, {-0.4, 0.9});
    CHECK(frame.h_ab.direction.x == doctest::Approx(0.0));
    const Lemma3Point o = lemma3_common_point(frame, tol);
    const double scale = frame.scale();
    // Independent oracle: radical center of the three circles.
    const std::array<std::pair<Point2, Point2>, 3> diam{
        {{a, frame.a_prime}, {b, frame.b_prime}, {c, frame.c_prime}}};
    for (const auto& [u, v] : diam) CHECK(circle_gap(o.point, u, v) <= 1e-10 * scale);
    CHECK(o.discrepancy <= 1e-9 * scale);
    CHECK(o.params.lambda > 0);
  }
  SUBCASE("a perpendicular through a vertex") {
    const Point2 a{-1, 0}, b{1, 0}, c{0.2, 1.3};
    const auto frame = PerpendicularFrame::from_anchors(a, b, c, a, {0.1, 0.2}, {-0.3, 0.4});
    const Lemma3Point o = lemma3_common_point(frame, tol);
    CHECK(circle_gap(o.point, a, frame.a_prime) <= 1e-10 * frame.scale());
    CHECK(circle_gap(o.point, b, frame.b_prime) <= 1e-10 * frame.scale());
    CHECK(circle_gap(o.point, c, frame.c_prime) <= 1e-10 * frame.scale());
  }
  SUBCASE("errors") {
    CHECK(throws_geometry([] { PerpendicularFrame::from_anchors({0, 0}, {1, 1}, {2, 2}, {}, {}, {}); },
                          GeometryError::Kind::kDegenerateFrame));
  }
  SUBCASE("random frames: both routes agree and the motion commutes") {
    Rng rng(99);
    double worst = 0;
    for (int i = 0; i < 500; ++i) {
      Point2 a, b, c;
      do {
        a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        b = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      } while (std::fabs(cross(b - a, c - a)) < 0.1);
      const Point2 u{rng.uniform(-1, 1), rng.uniform(-1, 1)}, v{rng.uniform(-1, 1), rng.uniform(-1, 1)},
          w{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const auto frame = PerpendicularFrame::from_anchors(a, b, c, u, v, w);
      const Lemma3Point o = lemma3_common_point(frame, tol);
      worst = std::max(worst, o.discrepancy / frame.scale());
      CHECK(circle_gap(o.point, c, frame.c_prime) <= 1e-10 * frame.scale());

      const RigidMotion m = RigidMotion::rotation(rng.uniform(0, 6.28), {rng.uniform(-3, 3), rng.uniform(-3, 3)});
      const auto moved = PerpendicularFrame::from_anchors(m.apply(a), m.apply(b), m.apply(c), m.apply(u),
                                                          m.apply(v), m.apply(w));
      CHECK(distance(lemma3_common_point(moved, tol).point, m.apply(o.point)) <= 1e-9 * frame.scale());
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("inversion side check") {
  const Tolerance tol;
  auto run = [&](double px, std::uint64_t seed) {
    Rng rng(seed);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      const Point2 a{0, 0}, b{1, 0}, p{px, 0};
      const Point2 center{0.5 * (b.x + p.x), rng.uniform(-2, 2)};
      const Disk c2{center, distance(center, b)};
      Point2 r{rng.uniform(-2, 2), rng.uniform(0.05, 2)};
      if (distance(r, center) <= c2.radius * 1.001) continue;
      const Lemma4Report rep = check_lemma4(a, b, p, r, c2, tol);
      CHECK(rep.holds);
      // Independent O: both circles pass through P, so the other common
      // point is P mirrored in the line of centers.
      const Point2 c1 = circumcenter_oracle(a, p, r);
      const Point2 o = reflect(p, c1, center);
      CHECK(distance(o, rep.o) <= 1e-8);
      CHECK(rep.route_discrepancy <= 1e-8);
      const double side_o = cross(r - a, o - a), side_b = cross(r - a, b - a);
      CHECK((side_o * side_b >= 0 || std::fabs(side_o) < 1e-9));
      ++checked;
    }
    CHECK(checked > 50);
  };
  SUBCASE("P right of A") { run(0.6, 1); }
  SUBCASE("P right of B") { run(1.7, 2); }
  SUBCASE("P left of A") { run(-0.8, 3); }

  const Point2 a{0, 0}, b{1, 0}, p{2, 0};
  const Disk c2{{1.5, 0}, 0.5};
  CHECK(validation_code([&] { check_lemma4(a, b, p, {1.5, 0.2}, c2); }) == "c2_encloses_r");
  CHECK(validation_code([&] { check_lemma4(a, {1, 0.5}, p, {0, 1}, c2); }) == "not_horizontal");
  CHECK(validation_code([&] { check_lemma4(b, a, p, {0, 1}, c2); }) == "b_not_right_of_a");
  CHECK(validation_code([&] { check_lemma4(a, b, {2, 0.1}, {0, 1}, c2); }) == "p_not_on_line");
  CHECK(validation_code([&] { check_lemma4(a, b, p, {0, -1}, c2); }) == "r_not_above");
  CHECK(validation_code([&] { check_lemma4(a, b, a, {0, 1}, Disk{{0.5, 0}, 0.5}); }) == "p_coincides_with_a");
  CHECK(validation_code([&] { check_lemma4(a, b, p, {0, 1}, Disk{{1.5, 0}, 0.4}); }) == "c2_not_through_b");
  CHECK(validation_code([&] { check_lemma4(a, b, p, {0, 1}, Disk{{1, 1}, 1}); }) == "c2_not_through_p");
}

TEST_CASE("half-plane containment") {
  const Tolerance tol;
  Lemma5Config cfg;
  cfg.ell = {{0, 0}, {1, 0}};
  cfg.r = {0, 0};
  cfg.c = {1.5, 0};
  cfg.apex = {0, -0.3};
  cfg.direction = {0, 1};
  cfg.delta = {{{0, 0}, {1, 0}}, 1};
  cfg.x = {0, 0.4};
  cfg.y = {0, 1.6};

  const Lemma5Report ordered = check_lemma5(cfg, tol, 5);
  CHECK(ordered.ordered);
  CHECK(ordered.holds);
  CHECK(ordered.samples == 10000);

  Lemma5Config same = cfg;
  same.x = same.y;
  CHECK(check_lemma5(same, tol, 6).holds);

  Lemma5Config at_apex = cfg;
  at_apex.x = at_apex.apex;
  CHECK(check_lemma5(at_apex, tol, 7).holds);

  Lemma5Config swapped = cfg;
  std::swap(swapped.x, swapped.y);
  const Lemma5Report esc = check_lemma5(swapped, tol, 8);
  CHECK_FALSE(esc.ordered);
  CHECK_FALSE(esc.holds);
  CHECK_FALSE(esc.sampling_holds);
  REQUIRE(esc.escaping_point.has_value());
  // The escaping point lies in D_XC and delta but outside D_YC.
  const Point2 z = *esc.escaping_point;
  CHECK(z.y >= 0);
  CHECK(distance(z, midpoint(swapped.x, swapped.c)) <= 0.5 * distance(swapped.x, swapped.c));
  CHECK(distance(z, midpoint(swapped.y, swapped.c)) > 0.5 * distance(swapped.y, swapped.c));

  auto code = [&](auto mutate) {
    Lemma5Config bad = cfg;
    mutate(bad);
    return validation_code([&] { check_lemma5(bad, tol); });
  };
  CHECK(code([](Lemma5Config& c) { c.direction = {0, 0}; }) == "zero_direction");
  CHECK(code([](Lemma5Config& c) { c.r = {0, 0.5}; }) == "r_not_on_ell");
  CHECK(code([](Lemma5Config& c) { c.c = {1, 1}; }) == "c_not_on_ell");
  CHECK(code([](Lemma5Config& c) { c.direction = {1, 1}; }) == "h_not_perpendicular");
  CHECK(code([](Lemma5Config& c) { c.apex = {0.5, -0.3}; }) == "h_not_through_r");
  CHECK(code([](Lemma5Config& c) { c.delta = {{{0, 1}, {1, 0}}, 1}; }) == "delta_not_bounded_by_ell");
  CHECK(code([](Lemma5Config& c) { c.delta.side = -1; }) == "h_leaves_delta");
  CHECK(code([](Lemma5Config& c) { c.x = {0.2, 0.4}; }) == "x_not_on_h");
  CHECK(code([](Lemma5Config& c) { c.y = {0, -1}; }) == "y_not_on_h");
}

TEST_CASE("shrinking a maximum triple") {
  const Tolerance tol;
  Rng rng(606);
  int full = 0, two_tight = 0;
  for (int t = 0; t < 300; ++t) {
    const Triple tr = max_triple(rng);
    const ShrinkState s = shrink(tr, tol);
    const double band = tol.band(s.scale);
    bool any_full = false;
    for (int i = 0; i < 3; ++i) {
      CHECK(s.eps[i] >= 0);
      CHECK(s.eps[i] <= s.length[i]);
      CHECK(distance(s.shrunk[i], tr.q[i]) == doctest::Approx(s.eps[i]).epsilon(1e-9).scale(s.scale));
      CHECK(s.margin[i] >= -band);
      // Containment of the shrunk disk in the original one.
      const Disk small = diametral_disk(tr.p[i], s.shrunk[i]).disk;
      const Disk big = diametral_disk(tr.p[i], tr.q[i]).disk;
      CHECK(distance(small.center, big.center) + small.radius <= big.radius + band);
      any_full = any_full || s.fully_shrunk(i, tol);
    }
    CHECK((any_full || s.tight_count() >= 2));
    full += any_full;
    two_tight += s.tight_count() >= 2;

    // Coordinate-wise maximality: pushing any unfinished coordinate further
    // breaks one of the conditions.
    for (int i = 0; i < 3; ++i) {
      if (s.fully_shrunk(i, tol)) continue;
      std::array<double, 3> bumped = s.eps;
      bumped[i] = std::min(s.length[i], bumped[i] + 1e-6 * s.scale);
      const ShrinkState b = make_shrink_state(tr.p, tr.q, bumped, tol);
      CHECK(*std::min_element(b.margin.begin(), b.margin.end()) < 0);
    }
  }
  CHECK(full > 0);
  CHECK(two_tight > 0);

  // A non-maximum triple is rejected.
  CHECK(validation_code([] { shrink_triple({0, 0}, {1, 0}, {5, 0}, {6, 0}, {0, 5}, {0, 6}); }) ==
        "hypothesis_violation");
}

TEST_CASE("collinear reds shrink onto one perpendicular") {
  const Tolerance tol;
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const Triple tr = max_triple(rng, 0.5);
    const ShrinkState s = shrink(tr, tol);
    // Each shrunk disk meets the line in [p_i, foot]; the three intervals share a point.
    double a = -INFINITY, b = INFINITY;
    for (int i = 0; i < 3; ++i) {
      a = std::max(a, std::min(tr.p[i].x, s.shrunk[i].x));
      b = std::min(b, std::max(tr.p[i].x, s.shrunk[i].x));
    }
    CHECK(a <= b + tol.band(s.scale));
    const ProofWitness w = witness_from_proof(s, tol);
    CHECK(w.which == ProofCase::kCollinear);
    CHECK(w.point.y == doctest::Approx(0.5));
    CHECK(w.point.x >= a - 1e-9);
    CHECK(w.point.x <= b + 1e-9);
    CHECK(w.slack_original <= tol.band(s.scale));
  }
}

TEST_CASE("proof witness") {
  const Tolerance tol;
  Rng rng(616);
  std::array<int, 4> seen{};
  for (int t = 0; t < 400; ++t) {
    const Triple tr = max_triple(rng);
    const ShrinkState s = shrink(tr, tol);
    const ProofWitness w = witness_from_proof(s, tol);
    const double band = tol.band(s.scale);
    ++seen[int(w.which)];
    std::vector<Disk> originals;
    for (int i = 0; i < 3; ++i) {
      originals.push_back(diametral_disk(tr.p[i], tr.q[i]).disk);
      CHECK(originals.back().slack(w.point) <= band);
      CHECK(diametral_disk(tr.p[i], s.shrunk[i]).disk.slack(w.point) <= band);
    }
    CHECK(common_intersection_witness(originals, tol).feasible);
    if (w.which == ProofCase::kFullyShrunk) {
      const int i = w.labeling[2];
      CHECK(s.fully_shrunk(i, tol));
      CHECK(w.point == tr.p[i]);
    }
  }
  CHECK(seen[int(ProofCase::kFullyShrunk)] > 0);
  CHECK(seen[int(ProofCase::kThreeCircles)] + seen[int(ProofCase::kCommonFoot)] > 0);
  CHECK(to_string(ProofCase::kThreeCircles) == "three_circles");
}

TEST_CASE("shrinking is equivariant under rigid motions") {
  const Tolerance tol;
  Rng rng(88);
  for (int t = 0; t < 50; ++t) {
    const Triple tr = max_triple(rng);
    const RigidMotion m = RigidMotion::rotation(rng.uniform(0, 6.28), {rng.uniform(-4, 4), rng.uniform(-4, 4)});
    Triple moved;
    for (int i = 0; i < 3; ++i) {
      moved.p[i] = m.apply(tr.p[i]);
      moved.q[i] = m.apply(tr.q[i]);
    }
    const ShrinkState a = shrink(tr, tol), b = shrink(moved, tol);
    for (int i = 0; i < 3; ++i) CHECK(b.eps[i] == doctest::Approx(a.eps[i]).epsilon(1e-6).scale(a.scale));
  }
}
