#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace diamatch {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

// Vectors share the point representation.
using Vec2 = Point2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
/// Counter-clockwise quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double squared_norm(Vec2 a) { return dot(a, a); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
constexpr double squared_distance(Point2 a, Point2 b) { return squared_norm(b - a); }
constexpr Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Comparison tolerance: |lhs - rhs| <= rel * scale + abs.
struct Tolerance {
  double rel = 1e-9;
  double abs = 0.0;

  double band(double scale) const { return rel * std::fabs(scale) + abs; }
  bool valid() const { return rel > 0.0 && abs >= 0.0; }
};

struct Disk {
  Point2 center;
  double radius = 0.0;

  /// Closed containment with the tolerance band scaled by the radius and
  /// the distance to the query.
  bool contains(Point2 p, const Tolerance& tol) const;
  /// |p - center| - radius; negative inside.
  double slack(Point2 p) const { return distance(p, center) - radius; }
  double area() const { return M_PI * radius * radius; }
};

/// Diametral disk of segment pq. Coincident endpoints give the point disk
/// with `degenerate` set.
struct DiametralDisk {
  Point2 p;
  Point2 q;
  Disk disk;
  bool degenerate = false;
};

struct Line2 {
  Point2 anchor;
  Vec2 direction{1.0, 0.0};

  static Line2 through(Point2 a, Point2 b);
  /// Line through `anchor` perpendicular to the direction a -> b.
  static Line2 perpendicular_to(Point2 a, Point2 b, Point2 anchor);
  Point2 at(double t) const { return anchor + t * direction; }
};

/// Closed half-plane on the `side` (+1 left, -1 right) of the directed
/// boundary line.
struct HalfPlane {
  Line2 boundary;
  int side = 1;

  double signed_distance(Point2 p) const;
  bool contains(Point2 p, const Tolerance& tol) const;
};

enum class Side { kLeft, kRight, kOn };

/// Rotation by (cos, sin) followed by a translation.
struct RigidMotion {
  double cos_angle = 1.0;
  double sin_angle = 0.0;
  Vec2 translation;

  static RigidMotion rotation(double angle, Vec2 translation = {});
  Point2 apply(Point2 p) const;
  Vec2 apply_vector(Vec2 v) const;
  RigidMotion inverse() const;
};

DiametralDisk diametral_disk(Point2 p, Point2 q);

/// <p - a, (b - a)/|b - a|>. Throws GeometryError when a == b.
double signed_projection(Point2 a, Point2 b, Point2 p);

/// Boundary-circle intersection points (0, 1 or 2). Tangency within the
/// tolerance yields exactly one point. Identical circles throw.
std::vector<Point2> circle_circle_intersection(const Disk& c1, const Disk& c2,
                                               const Tolerance& tol);

Point2 invert_point(Point2 center, double radius_sq, Point2 p);

Side side_of_line(Point2 a, Point2 b, Point2 p, const Tolerance& tol);

Point2 orthogonal_projection(Point2 a, Point2 b, Point2 p);

/// Intersection of two lines; nullopt when parallel.
std::optional<Point2> line_intersection(const Line2& l1, const Line2& l2);

/// Circle through three points. Throws GeometryError if they are collinear.
Disk circumcircle(Point2 a, Point2 b, Point2 c);

/// Exact sign of the orientation determinant of (a, b, c): +1 counter-clockwise,
/// -1 clockwise, 0 collinear. Uses expansion arithmetic, so the result is
/// exact for all finite inputs.
int orient2d_sign(Point2 a, Point2 b, Point2 c);

/// Exact closed-segment intersection test built on orient2d_sign.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

}  // namespace diamatch
