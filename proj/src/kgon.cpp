#include "diamatch/kgon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diamatch/error.hpp"
#include "diamatch/random.hpp"

namespace diamatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kStarts = 256;
constexpr int kGoldenIterations = 90;

double normalize_orientation(double theta, int k) {
  const double period = 2.0 * M_PI / k;
  double t = std::fmod(theta, period);
  if (t < 0.0) t += period;
  if (t >= period) t = 0.0;
  return t;
}

/// Outward unit normal of edge j (between vertices j and j+1).
Vec2 edge_normal(double orientation, int k, int j) {
  const double a = orientation + M_PI * (2 * j + 1) / k;
  return {std::cos(a), std::sin(a)};
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len_sq = squared_norm(ab);
  if (len_sq == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
  return distance(p, a + t * ab);
}

RegularKGon kgon_at(Point2 p, Point2 q, int k, double theta) {
  const double t = normalize_orientation(theta, k);
  return place_kgon(p, q, k, t, kgon_scale_for_orientation(q - p, k, t));
}

}  // namespace

std::vector<Point2> RegularKGon::vertices() const {
  std::vector<Point2> out(k);
  for (int j = 0; j < k; ++j) {
    const double a = orientation + 2.0 * M_PI * j / k;
    out[j] = center + circumradius * Vec2{std::cos(a), std::sin(a)};
  }
  return out;
}

double RegularKGon::area() const {
  return 0.5 * k * circumradius * circumradius * std::sin(2.0 * M_PI / k);
}

double RegularKGon::apothem() const { return circumradius * std::cos(M_PI / k); }

double RegularKGon::boundary_distance(Point2 p) const {
  const double a = apothem();
  double outside = -kInf;
  for (int j = 0; j < k; ++j) outside = std::max(outside, dot(p - center, edge_normal(orientation, k, j)) - a);
  if (outside <= 0.0) return outside;
  const auto v = vertices();
  double best = kInf;
  for (int j = 0; j < k; ++j) best = std::min(best, point_segment_distance(p, v[j], v[(j + 1) % k]));
  return best;
}

void RegularKGon::validate() const {
  if (k < 3) throw ValidationError("bad_k", "a k-gon needs k >= 3");
  if (!(circumradius > 0.0) || !std::isfinite(circumradius) || !is_finite(center)) {
    throw ValidationError("bad_kgon", "k-gon needs a finite center and positive circumradius");
  }
}

double kgon_scale_for_orientation(Vec2 w, int k, double orientation) {
  const double apothem = std::cos(M_PI / k);
  // Width of the unit polygon across edge normal n: h(n) + h(-n).
  const double width = apothem + (k % 2 == 0 ? apothem : 1.0);
  double worst = 0.0;
  for (int j = 0; j < k; ++j) {
    worst = std::max(worst, std::fabs(dot(w, edge_normal(orientation, k, j))));
  }
  return worst / width;
}

RegularKGon place_kgon(Point2 p, Point2 q, int k, double orientation, double circumradius) {
  RegularKGon g{k, {0.0, 0.0}, circumradius, normalize_orientation(orientation, k)};
  const auto v = g.vertices();
  const double a = g.apothem();
  const Vec2 w_hat = (q - p) / distance(p, q);

  // The longest chord in direction w starts at a vertex.
  double best_len = -1.0;
  Point2 chord_start, chord_end;
  for (const Point2& vertex : v) {
    for (const Vec2 dir : {w_hat, -w_hat}) {
      double len = kInf;
      for (int j = 0; j < k; ++j) {
        const Vec2 n = edge_normal(g.orientation, k, j);
        const double rate = dot(dir, n);
        if (rate > 1e-15) len = std::min(len, (a - dot(vertex, n)) / rate);
      }
      len = std::max(len, 0.0);
      if (len > best_len) {
        best_len = len;
        chord_start = vertex;
        chord_end = vertex + len * dir;
      }
    }
  }
  g.center = midpoint(p, q) - (midpoint(chord_start, chord_end) - Point2{0.0, 0.0});
  return g;
}

RegularKGon diametral_kgon(Point2 p, Point2 q, int k, const Tolerance& tol) {
  (void)tol;
  if (k < 3) throw ValidationError("bad_k", "a k-gon needs k >= 3");
  if (!is_finite(p) || !is_finite(q)) throw ValidationError("nonfinite", "coordinates must be finite");
  if (p == q) {
    throw GeometryError(GeometryError::Kind::kDegenerateDirection,
                        "diametral_kgon: p and q coincide");
  }
  const Vec2 w = q - p;
  const double period = 2.0 * M_PI / k;
  const double step = period / kStarts;
  auto scale_at = [&](double theta) { return kgon_scale_for_orientation(w, k, theta); };

  std::vector<double> grid(kStarts);
  for (int i = 0; i < kStarts; ++i) grid[i] = scale_at(i * step);

  double best_theta = 0.0;
  double best_scale = kInf;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < kStarts; ++i) {
    const double left = grid[(i + kStarts - 1) % kStarts];
    const double right = grid[(i + 1) % kStarts];
    if (grid[i] > left || grid[i] > right) continue;
    // Golden-section refinement inside the bracketing cells.
    double lo = (i - 1) * step, hi = (i + 1) * step;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = scale_at(x1), f2 = scale_at(x2);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = scale_at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = scale_at(x2);
      }
    }
    double theta = f1 <= f2 ? x1 : x2;
    double s = std::min(f1, f2);
    if (grid[i] < s) s = grid[i], theta = i * step;
    if (s < best_scale) best_scale = s, best_theta = theta;
  }
  return kgon_at(p, q, k, best_theta);
}

Separation kgon_disjoint(const RegularKGon& g1, const RegularKGon& g2, const Tolerance& tol) {
  g1.validate();
  g2.validate();
  const auto v1 = g1.vertices();
  const auto v2 = g2.vertices();
  double best_sep = -kInf;
  for (const RegularKGon* g : {&g1, &g2}) {
    for (int j = 0; j < g->k; ++j) {
      const Vec2 n = edge_normal(g->orientation, g->k, j);
      double min1 = kInf, max1 = -kInf, min2 = kInf, max2 = -kInf;
      for (Point2 v : v1) min1 = std::min(min1, dot(v, n)), max1 = std::max(max1, dot(v, n));
      for (Point2 v : v2) min2 = std::min(min2, dot(v, n)), max2 = std::max(max2, dot(v, n));
      best_sep = std::max(best_sep, std::max(min2 - max1, min1 - max2));
    }
  }
  Separation out;
  if (best_sep > 0.0) {
    double gap = kInf;
    for (int j = 0; j < g2.k; ++j) {
      for (Point2 v : v1) gap = std::min(gap, point_segment_distance(v, v2[j], v2[(j + 1) % g2.k]));
    }
    for (int j = 0; j < g1.k; ++j) {
      for (Point2 v : v2) gap = std::min(gap, point_segment_distance(v, v1[j], v1[(j + 1) % g1.k]));
    }
    out.gap = gap;
  } else {
    out.gap = best_sep;
  }
  out.disjoint = out.gap > tol.band(2.0 * (g1.circumradius + g2.circumradius));
  return out;
}

SquareReport kgon_pairs_for_instance(const Instance& instance, int k, const Tolerance& tol) {
  instance.validate();
  if (instance.size() != 2) throw ValidationError("size_mismatch", "k-gon pairs need exactly two pairs");
  SquareReport rep;
  rep.k = k;
  rep.instance = instance;
  rep.all_disjoint = true;
  const std::array<std::vector<int>, 2> perms{{{0, 1}, {1, 0}}};
  for (int m = 0; m < 2; ++m) {
    KGonPairing& pairing = rep.matchings[m];
    pairing.pairs = perms[m];
    for (int i = 0; i < 2; ++i) {
      pairing.kgons[i] = diametral_kgon(instance.reds[i], instance.blues[perms[m][i]], k, tol);
    }
    pairing.separation = kgon_disjoint(pairing.kgons[0], pairing.kgons[1], tol);
    rep.all_disjoint = rep.all_disjoint && pairing.separation.disjoint;
  }
  return rep;
}

SquareReport square_counterexample(int k, double side, const Tolerance& tol) {
  if (k < 6 || (k - 2) % 4 != 0) {
    throw ValidationError("bad_k", "the square construction needs k = 4q + 2 with q >= 1, got " +
                                       std::to_string(k));
  }
  if (!(side > 0.0) || !std::isfinite(side)) throw ValidationError("bad_side", "side must be positive");
  const double s = 0.5 * side;
  SquareReport rep;
  rep.k = k;
  rep.side = side;
  rep.instance = Instance{{{s, s}, {-s, -s}}, {{s, -s}, {-s, s}}};
  rep.all_disjoint = true;
  const std::array<std::vector<int>, 2> perms{{{0, 1}, {1, 0}}};
  for (int m = 0; m < 2; ++m) {
    KGonPairing& pairing = rep.matchings[m];
    pairing.pairs = perms[m];
    pairing.symmetric_confirmed = true;
    for (int i = 0; i < 2; ++i) {
      const Point2 p = rep.instance.reds[i];
      const Point2 q = rep.instance.blues[perms[m][i]];
      // Symmetric candidates: a vertex or an edge normal along pq.
      const double dir = std::atan2(q.y - p.y, q.x - p.x);
      RegularKGon best = kgon_at(p, q, k, dir);
      const RegularKGon other = kgon_at(p, q, k, dir + M_PI / k);
      if (other.area() < best.area()) best = other;
      const RegularKGon free = diametral_kgon(p, q, k, tol);
      if (free.area() < best.area() * (1.0 - 1e-6)) {
        best = free;
        pairing.symmetric_confirmed = false;
      }
      pairing.kgons[i] = best;
    }
    pairing.separation = kgon_disjoint(pairing.kgons[0], pairing.kgons[1], tol);
    rep.all_disjoint = rep.all_disjoint && pairing.separation.disjoint;
  }
  return rep;
}

SegmentReport segment_counterexample(double jitter, std::uint64_t seed) {
  SegmentReport rep;
  rep.instance = Instance{{{0.0, 0.0}, {0.2, 0.2}}, {{4.0, 0.0}, {0.0, 4.0}}};
  if (jitter != 0.0) {
    Rng rng(seed);
    for (auto* set : {&rep.instance.reds, &rep.instance.blues}) {
      for (Point2& p : *set) {
        p.x += rng.uniform(-jitter, jitter);
        p.y += rng.uniform(-jitter, jitter);
      }
    }
  }
  rep.instance.validate();
  const auto& r = rep.instance.reds;
  const auto& b = rep.instance.blues;
  const std::array<Point2, 4> all{r[0], r[1], b[0], b[1]};
  rep.no_three_collinear = true;
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<Point2> tri;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) tri.push_back(all[i]);
    }
    if (orient2d_sign(tri[0], tri[1], tri[2]) == 0) rep.no_three_collinear = false;
  }
  const std::array<std::vector<int>, 2> perms{{{0, 1}, {1, 0}}};
  rep.both_non_crossing = true;
  for (int m = 0; m < 2; ++m) {
    SegmentPairing& sp = rep.matchings[m];
    sp.pairs = perms[m];
    sp.weight = matching_weight(rep.instance, sp.pairs);
    sp.segments_cross = segments_intersect(r[0], b[perms[m][0]], r[1], b[perms[m][1]]);
    rep.some_non_crossing = rep.some_non_crossing || !sp.segments_cross;
    rep.both_non_crossing = rep.both_non_crossing && !sp.segments_cross;
  }
  return rep;
}

}  // namespace diamatch
