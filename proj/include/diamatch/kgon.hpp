#pragma once

#include <array>
#include <vector>

#include "diamatch/geometry.hpp"
#include "diamatch/matching.hpp"

namespace diamatch {

/// v_j = center + circumradius * (cos, sin)(orientation + 2 pi j / k).
struct RegularKGon {
  int k = 3;
  Point2 center;
  double circumradius = 1.0;
  /// Normalized into [0, 2 pi / k).
  double orientation = 0.0;

  std::vector<Point2> vertices() const;
  double area() const;
  double apothem() const;
  /// Signed distance to the boundary: negative inside.
  double boundary_distance(Point2 p) const;
  void validate() const;
};

/// Smallest circumradius (for unit-circumradius shape at `orientation`) such
/// that a translate contains both p and q; the gauge of q - p in the
/// difference body of the polygon.
double kgon_scale_for_orientation(Vec2 w, int k, double orientation);

/// Places the k-gon of the given orientation and circumradius so that p and q
/// lie on its boundary. `circumradius` must be the minimal one.
RegularKGon place_kgon(Point2 p, Point2 q, int k, double orientation, double circumradius);

/// Smallest-area regular k-gon with p and q on its boundary. Multistart
/// golden-section search over the orientation; per orientation the scale is
/// exact.
RegularKGon diametral_kgon(Point2 p, Point2 q, int k, const Tolerance& tol = {});

struct Separation {
  bool disjoint = false;
  /// Minimum distance when disjoint, minus the penetration depth otherwise.
  double gap = 0.0;
};

/// Separating-axis test over both polygons' edge normals.
Separation kgon_disjoint(const RegularKGon& g1, const RegularKGon& g2, const Tolerance& tol = {});

struct KGonPairing {
  std::vector<int> pairs;
  std::array<RegularKGon, 2> kgons;
  Separation separation;
  /// The symmetric-candidate optimum matched the unrestricted search.
  bool symmetric_confirmed = false;
};

struct SquareReport {
  int k = 0;
  double side = 0.0;
  Instance instance;
  std::array<KGonPairing, 2> matchings;
  bool all_disjoint = false;
};

/// Square with alternating colors, reds (s,s), (-s,-s), blues (s,-s), (-s,s)
/// with s = side / 2. Requires k = 4q + 2, q >= 1.
SquareReport square_counterexample(int k, double side, const Tolerance& tol = {});

/// Same construction on an arbitrary 2 + 2 instance (used for perturbed
/// squares); no symmetry shortcut.
SquareReport kgon_pairs_for_instance(const Instance& instance, int k, const Tolerance& tol = {});

struct SegmentPairing {
  std::vector<int> pairs;
  double weight = 0.0;
  bool segments_cross = false;
};

struct SegmentReport {
  Instance instance;
  std::array<SegmentPairing, 2> matchings;
  bool no_three_collinear = false;
  bool some_non_crossing = false;
  bool both_non_crossing = false;
};

/// Two reds and two blues not in convex position. A nonzero `jitter` moves
/// every coordinate by a seeded uniform offset in [-jitter, jitter].
SegmentReport segment_counterexample(double jitter = 0.0, std::uint64_t seed = 0);

}  // namespace diamatch
