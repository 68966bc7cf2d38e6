#include "diamatch/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "diamatch/error.hpp"

namespace diamatch {

namespace {

void require_distinct(Point2 a, Point2 b, const char* what) {
  if (a == b) {
    throw GeometryError(GeometryError::Kind::kDegenerateDirection,
                        std::string(what) + ": coincident points give no direction");
  }
}

// Error-free transformations (Knuth two-sum, fma two-product).
inline void two_sum(double a, double b, double& sum, double& err) {
  sum = a + b;
  const double bv = sum - a;
  const double av = sum - bv;
  err = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& diff, double& err) {
  diff = a - b;
  const double bv = a - diff;
  const double av = diff + bv;
  err = (a - av) + (bv - b);
}

inline void two_product(double a, double b, double& prod, double& err) {
  prod = a * b;
  err = std::fma(a, b, -prod);
}

// Adds `b` to a nonoverlapping expansion kept in increasing magnitude.
void grow_expansion(std::vector<double>& e, double b) {
  double q = b;
  for (double& component : e) {
    double sum = 0.0;
    double err = 0.0;
    two_sum(q, component, sum, err);
    component = err;
    q = sum;
  }
  e.push_back(q);
}

int expansion_sign(const std::vector<double>& e) {
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (*it > 0.0) return 1;
    if (*it < 0.0) return -1;
  }
  return 0;
}

// Exact product of two 2-component values (h1 + l1)(h2 + l2) appended with sign.
void append_product(std::vector<double>& terms, double h1, double l1, double h2, double l2,
                    double sign) {
  const std::array<std::pair<double, double>, 4> factors{
      {{h1, h2}, {h1, l2}, {l1, h2}, {l1, l2}}};
  for (const auto& [u, v] : factors) {
    double prod = 0.0;
    double err = 0.0;
    two_product(u, v, prod, err);
    terms.push_back(sign * prod);
    terms.push_back(sign * err);
  }
}

bool on_collinear_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool Disk::contains(Point2 p, const Tolerance& tol) const {
  const double d = distance(p, center);
  return d <= radius + tol.band(std::max(radius, d));
}

Line2 Line2::through(Point2 a, Point2 b) {
  require_distinct(a, b, "Line2::through");
  return {a, b - a};
}

Line2 Line2::perpendicular_to(Point2 a, Point2 b, Point2 anchor) {
  require_distinct(a, b, "Line2::perpendicular_to");
  return {anchor, perp(b - a)};
}

double HalfPlane::signed_distance(Point2 p) const {
  return side * cross(boundary.direction, p - boundary.anchor) / norm(boundary.direction);
}

bool HalfPlane::contains(Point2 p, const Tolerance& tol) const {
  return signed_distance(p) >= -tol.band(distance(p, boundary.anchor));
}

RigidMotion RigidMotion::rotation(double angle, Vec2 translation) {
  return {std::cos(angle), std::sin(angle), translation};
}

Point2 RigidMotion::apply(Point2 p) const { return apply_vector(p) + translation; }

Vec2 RigidMotion::apply_vector(Vec2 v) const {
  return {cos_angle * v.x - sin_angle * v.y, sin_angle * v.x + cos_angle * v.y};
}

RigidMotion RigidMotion::inverse() const {
  RigidMotion inv{cos_angle, -sin_angle, {}};
  inv.translation = -inv.apply_vector(translation);
  return inv;
}

DiametralDisk diametral_disk(Point2 p, Point2 q) {
  DiametralDisk out;
  out.p = p;
  out.q = q;
  out.disk = {midpoint(p, q), 0.5 * distance(p, q)};
  out.degenerate = (p == q);
  return out;
}

double signed_projection(Point2 a, Point2 b, Point2 p) {
  require_distinct(a, b, "signed_projection");
  const Vec2 d = b - a;
  return dot(p - a, d) / norm(d);
}

std::vector<Point2> circle_circle_intersection(const Disk& c1, const Disk& c2,
                                               const Tolerance& tol) {
  const Vec2 delta = c2.center - c1.center;
  const double d = norm(delta);
  const double eps = tol.band(std::max({d, c1.radius, c2.radius}));

  if (d <= eps) {
    if (std::fabs(c1.radius - c2.radius) > eps) return {};
    if (std::max(c1.radius, c2.radius) <= eps) return {midpoint(c1.center, c2.center)};
    throw GeometryError(GeometryError::Kind::kIdenticalCircles,
                        "circle_circle_intersection: identical circles");
  }
  if (d > c1.radius + c2.radius + eps) return {};
  if (d < std::fabs(c1.radius - c2.radius) - eps) return {};

  const Vec2 u = delta / d;
  // Distance from c1 along u to the radical line.
  double a = (d * d + (c1.radius - c2.radius) * (c1.radius + c2.radius)) / (2.0 * d);
  a = std::clamp(a, -c1.radius, c1.radius);
  const double h_sq = (c1.radius - a) * (c1.radius + a);
  const double h = std::sqrt(std::max(h_sq, 0.0));
  const Point2 base = c1.center + a * u;
  if (h <= eps) return {base};
  const Vec2 offset = h * perp(u);
  return {base + offset, base - offset};
}

Point2 invert_point(Point2 center, double radius_sq, Point2 p) {
  if (!(radius_sq > 0.0)) {
    throw ValidationError("nonpositive_radius", "invert_point: radius_sq must be positive");
  }
  const Vec2 v = p - center;
  const double len_sq = squared_norm(v);
  if (len_sq == 0.0) {
    throw GeometryError(GeometryError::Kind::kPole, "invert_point: point is the inversion center");
  }
  return center + (radius_sq / len_sq) * v;
}

Side side_of_line(Point2 a, Point2 b, Point2 p, const Tolerance& tol) {
  require_distinct(a, b, "side_of_line");
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  const double c = cross(ab, ap);
  const double len_ab = norm(ab);
  if (std::fabs(c) <= len_ab * tol.band(norm(ap))) return Side::kOn;
  return c > 0.0 ? Side::kLeft : Side::kRight;
}

Point2 orthogonal_projection(Point2 a, Point2 b, Point2 p) {
  require_distinct(a, b, "orthogonal_projection");
  const Vec2 d = b - a;
  return a + (dot(p - a, d) / squared_norm(d)) * d;
}

std::optional<Point2> line_intersection(const Line2& l1, const Line2& l2) {
  const double denom = cross(l1.direction, l2.direction);
  if (denom == 0.0) return std::nullopt;
  const double t = cross(l2.anchor - l1.anchor, l2.direction) / denom;
  return l1.at(t);
}

Disk circumcircle(Point2 a, Point2 b, Point2 c) {
  if (orient2d_sign(a, b, c) == 0) {
    throw GeometryError(GeometryError::Kind::kDegenerateFrame,
                        "circumcircle: points are collinear");
  }
  const Vec2 ba = b - a;
  const Vec2 ca = c - a;
  const double d = 2.0 * cross(ba, ca);
  const double ba_sq = squared_norm(ba);
  const double ca_sq = squared_norm(ca);
  const Vec2 offset{(ca.y * ba_sq - ba.y * ca_sq) / d, (ba.x * ca_sq - ca.x * ba_sq) / d};
  const Point2 center = a + offset;
  return {center, norm(offset)};
}

int orient2d_sign(Point2 a, Point2 b, Point2 c) {
  const double left = (b.x - a.x) * (c.y - a.y);
  const double right = (b.y - a.y) * (c.x - a.x);
  const double det = left - right;
  constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
  const double bound = (3.0 + 16.0 * kEps) * kEps * (std::fabs(left) + std::fabs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;

  double bax = 0, bax_err = 0, cay = 0, cay_err = 0, bay = 0, bay_err = 0, cax = 0, cax_err = 0;
  two_diff(b.x, a.x, bax, bax_err);
  two_diff(c.y, a.y, cay, cay_err);
  two_diff(b.y, a.y, bay, bay_err);
  two_diff(c.x, a.x, cax, cax_err);

  std::vector<double> terms;
  terms.reserve(16);
  append_product(terms, bax, bax_err, cay, cay_err, 1.0);
  append_product(terms, bay, bay_err, cax, cax_err, -1.0);

  std::vector<double> expansion;
  expansion.reserve(terms.size() + 1);
  for (double t : terms) {
    if (t != 0.0) grow_expansion(expansion, t);
  }
  return expansion_sign(expansion);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = orient2d_sign(a, b, c);
  const int o2 = orient2d_sign(a, b, d);
  const int o3 = orient2d_sign(c, d, a);
  const int o4 = orient2d_sign(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_collinear_segment(a, b, c)) return true;
  if (o2 == 0 && on_collinear_segment(a, b, d)) return true;
  if (o3 == 0 && on_collinear_segment(c, d, a)) return true;
  if (o4 == 0 && on_collinear_segment(c, d, b)) return true;
  return false;
}

}  // namespace diamatch
