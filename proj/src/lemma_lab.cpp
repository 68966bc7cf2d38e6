#include "diamatch/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "diamatch/error.hpp"
#include "diamatch/matching.hpp"
#include "diamatch/random.hpp"

namespace diamatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bbox_diagonal(std::initializer_list<Point2> pts) {
  double min_x = kInf, min_y = kInf, max_x = -kInf, max_y = -kInf;
  for (Point2 p : pts) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  return std::hypot(max_x - min_x, max_y - min_y);
}

Vec2 unit(Vec2 v) { return v / norm(v); }

double circle_residual(const Disk& circle, Point2 x) {
  return std::fabs(distance(x, circle.center) - circle.radius);
}

double line_distance(const Line2& line, Point2 p) {
  return std::fabs(cross(line.direction, p - line.anchor)) / norm(line.direction);
}

// Index of the shrink condition comparing pairs x and y.
int condition_of(int x, int y) { return (x + 1) % 3 == y ? x : y; }

double shrunk_slack(const ShrinkState& s, Point2 x) {
  double worst = -kInf;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, diametral_disk(s.p[i], s.shrunk[i]).disk.slack(x));
  return worst;
}

double original_slack(const ShrinkState& s, Point2 x) {
  double worst = -kInf;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, diametral_disk(s.p[i], s.q[i]).disk.slack(x));
  return worst;
}

}  // namespace

// --- Four-point criterion -------------------------------------------------

CanonicalFrame CanonicalFrame::from_points(Point2 p1, Point2 p2) {
  if (p1 == p2) {
    throw GeometryError(GeometryError::Kind::kDegenerateDirection,
                        "CanonicalFrame: p1 and p2 coincide");
  }
  const Vec2 d = p2 - p1;
  const double len = norm(d);
  CanonicalFrame frame;
  frame.separation = len;
  frame.forward = {d.x / len, -d.y / len, {}};
  frame.forward.translation = -frame.forward.apply_vector(midpoint(p1, p2));
  frame.backward = frame.forward.inverse();
  return frame;
}

Lemma1Report check_lemma1(Point2 p1, Point2 p2, Point2 q1, Point2 q2, const Tolerance& tol) {
  const CanonicalFrame frame = CanonicalFrame::from_points(p1, p2);
  const double d = frame.separation;
  Lemma1Report r;
  r.straight_sum = squared_distance(p1, q1) + squared_distance(p2, q2);
  r.crossed_sum = squared_distance(p1, q2) + squared_distance(p2, q1);
  const double sum_band = tol.band(std::max(r.straight_sum, r.crossed_sum));
  r.is_max_for_four = r.straight_sum >= r.crossed_sum - sum_band;

  r.x_q1 = frame.to_frame(q1).x;
  r.x_q2 = frame.to_frame(q2).x;
  r.x_q1_power = (squared_distance(p1, q1) - squared_distance(p2, q1)) / (2.0 * d);
  r.x_q2_power = (squared_distance(p1, q2) - squared_distance(p2, q2)) / (2.0 * d);

  // straight - crossed = 2d (x_q1 - x_q2), so the weight band maps to
  // sum_band / 2d on the abscissae.
  const double band = tol.band(bbox_diagonal({p1, p2, q1, q2})) + sum_band / (2.0 * d);
  r.projection_ok = r.x_q2 <= r.x_q1 + band;
  return r;
}

// --- Three perpendicular lines ---------------------------------------------

PerpendicularFrame PerpendicularFrame::from_anchors(Point2 a, Point2 b, Point2 c,
                                                    Point2 anchor_ab, Point2 anchor_bc,
                                                    Point2 anchor_ca) {
  if (orient2d_sign(a, b, c) == 0) {
    throw GeometryError(GeometryError::Kind::kDegenerateFrame,
                        "PerpendicularFrame: A, B, C are collinear");
  }
  PerpendicularFrame f;
  f.a = a;
  f.b = b;
  f.c = c;
  f.h_ab = Line2::perpendicular_to(a, b, anchor_ab);
  f.h_bc = Line2::perpendicular_to(b, c, anchor_bc);
  f.h_ca = Line2::perpendicular_to(c, a, anchor_ca);
  const auto ap = line_intersection(f.h_ab, f.h_ca);
  const auto bp = line_intersection(f.h_ab, f.h_bc);
  const auto cp = line_intersection(f.h_bc, f.h_ca);
  if (!ap || !bp || !cp) {
    throw GeometryError(GeometryError::Kind::kDegenerateFrame,
                        "PerpendicularFrame: parallel perpendiculars");
  }
  f.a_prime = *ap;
  f.b_prime = *bp;
  f.c_prime = *cp;
  return f;
}

double PerpendicularFrame::scale() const {
  return bbox_diagonal({a, b, c, a_prime, b_prime, c_prime});
}

Lemma3Point lemma3_common_point(const PerpendicularFrame& frame, const Tolerance& tol) {
  Lemma3Point out;
  out.scale = frame.scale();

  // Frame with AB on the x-axis and the foot of C at the origin:
  // A = (a, 0), B = (b, 0), C = (0, c).
  const Vec2 u = unit(frame.b - frame.a);
  const Vec2 n = perp(u);
  const Point2 foot = frame.a + dot(frame.c - frame.a, u) * u;
  auto local = [&](Point2 p) { return Point2{dot(p - foot, u), dot(p - foot, n)}; };
  const double a = local(frame.a).x;
  const double b = local(frame.b).x;
  const double c = local(frame.c).y;
  const Point2 ap = local(frame.a_prime);
  const Point2 bp = local(frame.b_prime);
  const Point2 cp = local(frame.c_prime);

  // A' = (alpha, lambda a + beta), B' = (alpha, lambda b + beta),
  // C' = (alpha - lambda c, beta). A negative lambda is the clockwise turn.
  const double alpha = 0.5 * (ap.x + bp.x);
  const double lambda = (ap.y - bp.y) / (a - b);
  const double beta = 0.5 * ((ap.y - lambda * a) + (bp.y - lambda * b));
  out.params = {std::fabs(lambda), alpha, beta,
                lambda >= 0.0 ? Turn::kCounterClockwise : Turn::kClockwise};
  out.similarity_residual = distance(cp, Point2{alpha - lambda * c, beta});

  const double denom = 1.0 + lambda * lambda;
  const Point2 common_local{(alpha - lambda * beta) / denom, (lambda * alpha + beta) / denom};
  out.point = foot + common_local.x * u + common_local.y * n;

  const std::array<Disk, 3> circles{diametral_disk(frame.a, frame.a_prime).disk,
                                    diametral_disk(frame.b, frame.b_prime).disk,
                                    diametral_disk(frame.c, frame.c_prime).disk};
  for (const Disk& circle : circles) {
    out.residual = std::max(out.residual, circle_residual(circle, out.point));
  }

  // Geometric route: intersect two circles, keep the point on the third.
  // Among the three pairings prefer the widest crossing (best conditioned).
  double best_spread = -1.0;
  bool found = false;
  for (int k = 0; k < 3; ++k) {
    const Disk& c1 = circles[k];
    const Disk& c2 = circles[(k + 1) % 3];
    const Disk& c3 = circles[(k + 2) % 3];
    std::vector<Point2> pts;
    try {
      pts = circle_circle_intersection(c1, c2, tol);
    } catch (const GeometryError&) {
      continue;
    }
    if (pts.empty()) continue;
    const double spread = pts.size() == 2 ? distance(pts[0], pts[1]) : 0.0;
    if (spread <= best_spread) continue;
    Point2 pick = pts[0];
    if (pts.size() == 2 && circle_residual(c3, pts[1]) < circle_residual(c3, pts[0])) {
      pick = pts[1];
    }
    best_spread = spread;
    out.geometric = pick;
    found = true;
  }
  if (!found) {
    throw GeometryError(GeometryError::Kind::kDegenerateFrame,
                        "lemma3_common_point: no pair of circles intersects");
  }
  out.discrepancy = distance(out.point, out.geometric);
  return out;
}

// --- Inversion side check --------------------------------------------------

Lemma4Report check_lemma4(Point2 a, Point2 b, Point2 p, Point2 r, const Disk& c2,
                          const Tolerance& tol) {
  const double scale =
      bbox_diagonal({a, b, p, r, c2.center - Vec2{c2.radius, c2.radius},
                     c2.center + Vec2{c2.radius, c2.radius}});
  const double eps = tol.band(scale);
  if (std::fabs(a.y - b.y) > eps) {
    throw ValidationError("not_horizontal", "line(A, B) must be horizontal");
  }
  if (!(b.x > a.x)) throw ValidationError("b_not_right_of_a", "B must lie right of A");
  if (std::fabs(p.y - a.y) > eps) throw ValidationError("p_not_on_line", "P must lie on line(A, B)");
  if (!(r.y > a.y + eps)) throw ValidationError("r_not_above", "R must lie above line(A, B)");
  if (distance(p, a) <= eps) throw ValidationError("p_coincides_with_a", "P must differ from A");
  if (circle_residual(c2, b) > eps) throw ValidationError("c2_not_through_b", "C2 must pass through B");
  if (circle_residual(c2, p) > eps) throw ValidationError("c2_not_through_p", "C2 must pass through P");
  const double r_gap = distance(r, c2.center) - c2.radius;
  if (r_gap < -eps) throw ValidationError("c2_encloses_r", "C2 must not enclose R");

  Lemma4Report rep;
  rep.r_on_c2 = r_gap <= eps;

  const Disk c1 = circumcircle(a, p, r);
  std::vector<Point2> meet = circle_circle_intersection(c1, c2, tol);
  rep.o = p;
  rep.tangent = true;
  if (meet.size() == 2) {
    rep.o = distance(meet[0], p) >= distance(meet[1], p) ? meet[0] : meet[1];
    rep.tangent = false;
  }

  // Inversion at A maps C1 to the line P'R' and C2 (which avoids A) to a
  // circle; O' is the second point of that line on the image circle.
  const double k_sq = scale * scale;
  const Point2 p_img = invert_point(a, k_sq, p);
  const Point2 r_img = invert_point(a, k_sq, r);
  const Vec2 to_center = c2.center - a;
  const double power = squared_norm(to_center) - c2.radius * c2.radius;
  const double s = k_sq / power;
  const Disk c2_img{a + s * to_center, std::fabs(s) * c2.radius};
  const Vec2 dir = r_img - p_img;
  const double t = -2.0 * dot(p_img - c2_img.center, dir) / squared_norm(dir);
  const Point2 o_img = p_img + t * dir;
  rep.o_via_inversion = (rep.tangent || o_img == a) ? p : invert_point(a, k_sq, o_img);
  rep.route_discrepancy = distance(rep.o, rep.o_via_inversion);

  rep.side_o = side_of_line(a, r, rep.o, tol);
  rep.side_b = side_of_line(a, r, b, tol);
  rep.holds = rep.side_o == Side::kOn || rep.side_o == rep.side_b;
  return rep;
}

// --- Half-plane containment ------------------------------------------------

Lemma5Report check_lemma5(const Lemma5Config& cfg, const Tolerance& tol, std::uint64_t seed,
                          int samples) {
  const double scale = bbox_diagonal({cfg.r, cfg.c, cfg.apex, cfg.x, cfg.y});
  const double eps = tol.band(scale);
  if (squared_norm(cfg.ell.direction) == 0.0 || squared_norm(cfg.direction) == 0.0 ||
      squared_norm(cfg.delta.boundary.direction) == 0.0) {
    throw ValidationError("zero_direction", "lines need nonzero directions");
  }
  if (line_distance(cfg.ell, cfg.r) > eps) throw ValidationError("r_not_on_ell", "R must lie on ell");
  if (line_distance(cfg.ell, cfg.c) > eps) throw ValidationError("c_not_on_ell", "C must lie on ell");
  const Vec2 h_dir = unit(cfg.direction);
  const Vec2 ell_dir = unit(cfg.ell.direction);
  if (std::fabs(dot(h_dir, ell_dir)) > tol.band(1.0)) {
    throw ValidationError("h_not_perpendicular", "h must be perpendicular to ell");
  }
  const Line2 h_line{cfg.apex, h_dir};
  if (line_distance(h_line, cfg.r) > eps) {
    throw ValidationError("h_not_through_r", "the supporting line of h must meet ell at R");
  }
  if (line_distance(cfg.ell, cfg.delta.boundary.anchor) > eps ||
      std::fabs(cross(ell_dir, unit(cfg.delta.boundary.direction))) > tol.band(1.0)) {
    throw ValidationError("delta_not_bounded_by_ell", "delta must be bounded by ell");
  }
  const Vec2 inward = cfg.delta.side * perp(unit(cfg.delta.boundary.direction));
  if (!(dot(h_dir, inward) > 0.0)) {
    throw ValidationError("h_leaves_delta", "delta & h must be a half-line");
  }
  for (auto [pt, code] : {std::pair{cfg.x, "x_not_on_h"}, std::pair{cfg.y, "y_not_on_h"}}) {
    if (line_distance(h_line, pt) > eps || dot(pt - cfg.apex, h_dir) < -eps) {
      throw ValidationError(code, std::string(code) + ": point must lie on the half-line h");
    }
  }

  Lemma5Report rep;
  rep.ordered = distance(cfg.x, cfg.apex) <= distance(cfg.y, cfg.apex) + eps;
  const Disk small = diametral_disk(cfg.x, cfg.c).disk;
  const Disk big = diametral_disk(cfg.y, cfg.c).disk;

  // Thales: Z lies in D_YC iff the angle YZC is at least a right angle.
  auto in_big = [&](Point2 z) {
    const double d = distance(z, big.center);
    return dot(cfg.y - z, cfg.c - z) <= eps * (d + big.radius);
  };
  auto in_delta = [&](Point2 z) { return cfg.delta.signed_distance(z) >= 0.0; };

  // Angle criterion on the boundary of D_XC & delta (arc plus chord).
  constexpr int kBoundarySamples = 2048;
  rep.angle_holds = true;
  for (int k = 0; k < kBoundarySamples && rep.angle_holds; ++k) {
    const double th = 2.0 * M_PI * k / kBoundarySamples;
    const Point2 z = small.center + small.radius * Vec2{std::cos(th), std::sin(th)};
    if (in_delta(z) && !in_big(z)) rep.angle_holds = false;
  }
  const Point2 foot = orthogonal_projection(cfg.ell.anchor, cfg.ell.anchor + ell_dir, small.center);
  const double half_sq = small.radius * small.radius - squared_distance(foot, small.center);
  if (half_sq >= 0.0) {
    const double half = std::sqrt(half_sq);
    for (int k = 0; k <= kBoundarySamples && rep.angle_holds; ++k) {
      const double s = -half + 2.0 * half * k / kBoundarySamples;
      if (!in_big(foot + s * ell_dir)) rep.angle_holds = false;
    }
  }

  // Rejection sampling of the region itself.
  Rng rng(seed);
  rep.sampling_holds = true;
  const long max_attempts = 1000L * std::max(samples, 1);
  for (long attempt = 0; attempt < max_attempts && rep.samples < samples; ++attempt) {
    const double rad = small.radius * std::sqrt(rng.uniform01());
    const double th = 2.0 * M_PI * rng.uniform01();
    const Point2 z = small.center + rad * Vec2{std::cos(th), std::sin(th)};
    if (!in_delta(z)) continue;
    ++rep.samples;
    if (!in_big(z)) {
      rep.sampling_holds = false;
      if (!rep.escaping_point) rep.escaping_point = z;
    }
  }
  rep.holds = rep.angle_holds && rep.sampling_holds;
  return rep;
}

// --- Shrinking procedure ---------------------------------------------------

Point2 shrink_point(Point2 p, Point2 q, double eps) {
  const double len = distance(p, q);
  if (len == 0.0) return q;
  if (eps >= len) return p;
  return q + (eps / len) * (p - q);
}

bool ShrinkState::fully_shrunk(int i, const Tolerance& tol) const {
  return eps[i] >= length[i] - tol.band(scale);
}

ShrinkState make_shrink_state(const std::array<Point2, 3>& p, const std::array<Point2, 3>& q,
                              const std::array<double, 3>& eps, const Tolerance& tol) {
  ShrinkState s;
  s.p = p;
  s.q = q;
  s.eps = eps;
  s.scale = bbox_diagonal({p[0], p[1], p[2], q[0], q[1], q[2]});
  for (int i = 0; i < 3; ++i) {
    s.length[i] = distance(p[i], q[i]);
    s.shrunk[i] = shrink_point(p[i], q[i], eps[i]);
  }
  const double band = tol.band(s.scale);
  for (int k = 0; k < 3; ++k) {
    const int j = (k + 1) % 3;
    s.margin[k] = signed_projection(p[k], p[j], s.shrunk[k]) -
                  signed_projection(p[k], p[j], s.shrunk[j]);
    s.tight[k] = std::fabs(s.margin[k]) <= band;
  }
  return s;
}

ShrinkState shrink_triple(Point2 p1, Point2 q1, Point2 p2, Point2 q2, Point2 p3, Point2 q3,
                          const Tolerance& tol) {
  const std::array<Point2, 3> p{p1, p2, p3};
  const std::array<Point2, 3> q{q1, q2, q3};
  const Instance triple{{p1, p2, p3}, {q1, q2, q3}};
  const Matching identity = make_matching(triple, {0, 1, 2});
  for (std::size_t k : {2u, 3u}) {
    if (!is_k_subset_maximum(triple, identity, k, tol).maximal) {
      throw ValidationError("hypothesis_violation",
                            "shrink_triple: the triple is not a maximum matching");
    }
  }

  std::array<Vec2, 3> toward_p{};
  std::array<Vec2, 3> along{};
  std::array<double, 3> eps{0.0, 0.0, 0.0};
  ShrinkState s = make_shrink_state(p, q, eps, tol);
  for (int i = 0; i < 3; ++i) {
    toward_p[i] = (p[i] - q[i]) / s.length[i];
    along[i] = unit(p[(i + 1) % 3] - p[i]);
  }
  const double band = tol.band(s.scale);

  constexpr int kMaxSweeps = 10000;
  int sweep = 0;
  while (sweep < kMaxSweeps) {
    ++sweep;
    double progress = 0.0;
    for (int m = 0; m < 3; ++m) {
      s = make_shrink_state(p, q, eps, tol);
      double upper = s.length[m];
      // Condition m has m as its first pair, condition m-1 as its second.
      for (int k : {m, (m + 2) % 3}) {
        const double slope = (k == m ? 1.0 : -1.0) * dot(toward_p[m], along[k]);
        if (slope < 0.0) upper = std::min(upper, eps[m] + std::max(s.margin[k], 0.0) / -slope);
      }
      const double next = std::max(eps[m], std::min(upper, s.length[m]));
      progress = std::max(progress, next - eps[m]);
      eps[m] = next;
    }
    if (progress <= band) break;
  }
  s = make_shrink_state(p, q, eps, tol);
  s.sweeps = sweep;
  return s;
}

std::string to_string(ProofCase c) {
  switch (c) {
    case ProofCase::kCollinear: return "collinear";
    case ProofCase::kFullyShrunk: return "fully_shrunk";
    case ProofCase::kCommonFoot: return "common_foot";
    case ProofCase::kThreeCircles: return "three_circles";
  }
  return "unknown";
}

ProofWitness witness_from_proof(const ShrinkState& state, const Tolerance& tol) {
  const double band = tol.band(state.scale);
  auto finish = [&](Point2 x, ProofCase which, std::array<int, 3> labeling) {
    ProofWitness w;
    w.point = x;
    w.which = which;
    w.labeling = labeling;
    w.slack_shrunk = shrunk_slack(state, x);
    w.slack_original = original_slack(state, x);
    return w;
  };

  const auto& p = state.p;
  const double area2 = cross(p[1] - p[0], p[2] - p[0]);
  if (std::fabs(area2) <= tol.rel * state.scale * state.scale) {
    // Collinear reds: each shrunk disk meets the line in the segment from
    // p_i to the foot of its shrunk endpoint; the segments share a point.
    int ia = 0, ib = 1;
    for (auto [u, v] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
      if (distance(p[u], p[v]) > distance(p[ia], p[ib])) ia = u, ib = v;
    }
    const Vec2 e = unit(p[ib] - p[ia]);
    auto coord = [&](Point2 x) { return dot(x - p[ia], e); };
    double lo = -kInf, hi = kInf, mean = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double a = coord(p[i]);
      const double b = coord(state.shrunk[i]);
      lo = std::max(lo, std::min(a, b));
      hi = std::min(hi, std::max(a, b));
      mean += b / 3.0;
    }
    if (lo <= hi + band) {
      const double s = std::clamp(mean, std::min(lo, hi), std::max(lo, hi));
      return finish(p[ia] + s * e, ProofCase::kCollinear, {0, 1, 2});
    }
  } else {
    for (int i = 0; i < 3; ++i) {
      if (!state.fully_shrunk(i, tol)) continue;
      ProofWitness w = finish(p[i], ProofCase::kFullyShrunk, {(i + 1) % 3, (i + 2) % 3, i});
      if (w.slack_shrunk <= band) return w;
    }

    static constexpr std::array<std::array<int, 3>, 6> kLabelings{
        {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
    for (const auto& lab : kLabelings) {
      const int ia = lab[0], ib = lab[1], ic = lab[2];
      if (!state.tight[condition_of(ia, ib)] || !state.tight[condition_of(ic, ia)]) continue;
      const Point2 a = p[ia], b = p[ib], c = p[ic];
      const Point2 a_shrunk = state.shrunk[ia];
      const Point2 b_shrunk = state.shrunk[ib];
      // Foot of the perpendicular through the shrunk endpoint of pair 1 on
      // line(p1, p3); it lies on the circles of pairs 1 and 3.
      const Point2 foot13 = orthogonal_projection(a, c, a_shrunk);
      if (diametral_disk(b, b_shrunk).disk.slack(foot13) <= band) {
        ProofWitness w = finish(foot13, ProofCase::kCommonFoot, lab);
        if (w.slack_shrunk <= band) return w;
      }
      try {
        const auto frame = PerpendicularFrame::from_anchors(a, b, c, a_shrunk, b_shrunk, a_shrunk);
        const Lemma3Point o = lemma3_common_point(frame, tol);
        ProofWitness w = finish(o.point, ProofCase::kThreeCircles, lab);
        if (w.slack_shrunk <= band) return w;
      } catch (const GeometryError&) {
        continue;
      }
    }
  }
  throw GeometryError(
      GeometryError::Kind::kCaseResolution,
      "witness_from_proof: no case applies (margins " + std::to_string(state.margin[0]) + ", " +
          std::to_string(state.margin[1]) + ", " + std::to_string(state.margin[2]) + "; eps " +
          std::to_string(state.eps[0]) + ", " + std::to_string(state.eps[1]) + ", " +
          std::to_string(state.eps[2]) + ")");
}

}  // namespace diamatch
