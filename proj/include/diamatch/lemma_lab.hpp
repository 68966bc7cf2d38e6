#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "diamatch/geometry.hpp"

namespace diamatch {

// ---------------------------------------------------------------------------
// Four-point criterion
// ---------------------------------------------------------------------------

/// Rigid motion placing p1 at (-d/2, 0) and p2 at (d/2, 0), d = |p1 p2|.
struct CanonicalFrame {
  RigidMotion forward;
  RigidMotion backward;
  double separation = 0.0;

  static CanonicalFrame from_points(Point2 p1, Point2 p2);
  Point2 to_frame(Point2 p) const { return forward.apply(p); }
  Point2 from_frame(Point2 p) const { return backward.apply(p); }
};

struct Lemma1Report {
  /// |p1q1|^2 + |p2q2|^2 >= |p1q2|^2 + |p2q1|^2 within tolerance.
  bool is_max_for_four = false;
  /// x(q2) <= x(q1) in the canonical frame within tolerance.
  bool projection_ok = false;
  double straight_sum = 0.0;
  double crossed_sum = 0.0;
  /// Canonical abscissae of q1, q2.
  double x_q1 = 0.0;
  double x_q2 = 0.0;
  /// The same abscissae from the power-difference identity
  /// x(q) = (|p1 q|^2 - |p2 q|^2) / (2d).
  double x_q1_power = 0.0;
  double x_q2_power = 0.0;

  bool implication_holds() const { return !is_max_for_four || projection_ok; }
};

Lemma1Report check_lemma1(Point2 p1, Point2 p2, Point2 q1, Point2 q2, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Three perpendicular lines and the common point of three circles
// ---------------------------------------------------------------------------

enum class Turn { kCounterClockwise, kClockwise };

/// Quarter turn, scaling by lambda, translation by (alpha, beta), expressed
/// in the frame where A = (a, 0), B = (b, 0), C = (0, c).
struct SimilarityParams {
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  Turn turn = Turn::kCounterClockwise;
};

/// Triangle A, B, C with lines h_ab, h_bc, h_ca perpendicular to AB, BC, CA.
/// A' = h_ab & h_ca, B' = h_ab & h_bc, C' = h_bc & h_ca.
struct PerpendicularFrame {
  Point2 a, b, c;
  Line2 h_ab, h_bc, h_ca;
  Point2 a_prime, b_prime, c_prime;

  /// Each line passes through its anchor. Throws GeometryError for a
  /// collinear triangle.
  static PerpendicularFrame from_anchors(Point2 a, Point2 b, Point2 c, Point2 anchor_ab,
                                         Point2 anchor_bc, Point2 anchor_ca);
  /// Diagonal of the bounding box of the six points.
  double scale() const;
};

struct Lemma3Point {
  /// Closed-form point from the recovered similarity.
  Point2 point;
  /// Same point from pairwise circle intersection.
  Point2 geometric;
  SimilarityParams params;
  /// |point - geometric|.
  double discrepancy = 0.0;
  /// Max distance of `point` from the three circles C_AA', C_BB', C_CC'.
  double residual = 0.0;
  /// How far C' misses the recovered similarity.
  double similarity_residual = 0.0;
  double scale = 0.0;
};

Lemma3Point lemma3_common_point(const PerpendicularFrame& frame, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Inversion side check
// ---------------------------------------------------------------------------

struct Lemma4Report {
  bool holds = false;
  Point2 o;
  /// O recomputed through an inversion centered at A.
  Point2 o_via_inversion;
  double route_discrepancy = 0.0;
  bool tangent = false;
  /// R lies on C2 within tolerance (snapped, not rejected).
  bool r_on_c2 = false;
  Side side_o = Side::kOn;
  Side side_b = Side::kOn;
};

/// Preconditions are checked individually; each failure throws a
/// ValidationError with its own code.
Lemma4Report check_lemma4(Point2 a, Point2 b, Point2 p, Point2 r, const Disk& c2,
                          const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Half-plane containment of diametral disks
// ---------------------------------------------------------------------------

struct Lemma5Config {
  Line2 ell;
  Point2 r;
  Point2 c;
  /// Half-line h = {apex + s * direction, s >= 0}.
  Point2 apex;
  Vec2 direction;
  HalfPlane delta;
  Point2 x;
  Point2 y;
};

struct Lemma5Report {
  /// D_XC & delta is contained in D_YC by both tests.
  bool holds = false;
  bool angle_holds = false;
  bool sampling_holds = false;
  /// |XH| <= |YH|: the hypothesis under which containment is claimed.
  bool ordered = false;
  std::optional<Point2> escaping_point;
  int samples = 0;
};

Lemma5Report check_lemma5(const Lemma5Config& config, const Tolerance& tol = {},
                          std::uint64_t seed = 0, int samples = 10000);

// ---------------------------------------------------------------------------
// Shrinking procedure for a maximum triple
// ---------------------------------------------------------------------------

struct ShrinkState {
  std::array<Point2, 3> p;
  std::array<Point2, 3> q;
  std::array<double, 3> length{};
  /// Distance of each shrunk endpoint from q_i.
  std::array<double, 3> eps{};
  std::array<Point2, 3> shrunk;
  /// Condition k compares pairs k and k+1 (mod 3) along p_k -> p_{k+1};
  /// margin >= 0 means it holds, ~0 means the perpendicularity is attained.
  std::array<double, 3> margin{};
  std::array<bool, 3> tight{};
  int sweeps = 0;
  double scale = 0.0;

  bool fully_shrunk(int i, const Tolerance& tol) const;
  int tight_count() const { return int(tight[0]) + int(tight[1]) + int(tight[2]); }
};

/// Point on segment q p at distance eps from q.
Point2 shrink_point(Point2 p, Point2 q, double eps);

/// Evaluates margins and tightness for explicit eps values.
ShrinkState make_shrink_state(const std::array<Point2, 3>& p, const std::array<Point2, 3>& q,
                              const std::array<double, 3>& eps, const Tolerance& tol = {});

/// Coordinate-wise maximal eps by monotone coordinate ascent (order eps1,
/// eps2, eps3). Throws ValidationError if the triple is not 2- and
/// 3-subset maximum.
ShrinkState shrink_triple(Point2 p1, Point2 q1, Point2 p2, Point2 q2, Point2 p3, Point2 q3,
                          const Tolerance& tol = {});

enum class ProofCase { kCollinear, kFullyShrunk, kCommonFoot, kThreeCircles };

std::string to_string(ProofCase c);

struct ProofWitness {
  Point2 point;
  ProofCase which = ProofCase::kCollinear;
  /// Original indices playing the roles 1, 2, 3 in the construction.
  std::array<int, 3> labeling{0, 1, 2};
  double slack_shrunk = 0.0;
  double slack_original = 0.0;
};

/// Common point of the three shrunk disks built along the case analysis:
/// collinear reds, a fully shrunk pair, or two attained perpendicularities.
/// Throws GeometryError(kCaseResolution) when no labeling yields a point.
ProofWitness witness_from_proof(const ShrinkState& state, const Tolerance& tol = {});

}  // namespace diamatch
