#pragma once

#include <optional>
#include <span>
#include <vector>

#include "diamatch/geometry.hpp"
#include "diamatch/matching.hpp"

namespace diamatch {

/// One disk per matched pair; labels hold the originating red indices.
struct DiskFamily {
  std::vector<Disk> disks;
  std::vector<int> labels;

  static DiskFamily from_matching(const Instance& instance, const Matching& matching);
  /// Diagonal of the bounding box of the union of the disks.
  double scale() const;
};

/// Outcome of the common-intersection decision.
///
/// Slack sign convention: negative means the witness lies strictly inside
/// every disk (by that depth), zero is boundary contact, positive is the
/// remaining gap of the best point found.
struct WitnessReport {
  bool feasible = false;
  /// Set when |slack| is within the tolerance band.
  bool boundary = false;
  Point2 witness;
  double slack = 0.0;
  /// Up to three disks attaining the maximum slack at the witness.
  std::vector<int> certificate;
  /// The absolute band used for the verdict.
  double band = 0.0;
};

struct MinSlack {
  Point2 point;
  double slack = 0.0;
  std::vector<int> basis;
};

/// Closed-disk test |c1c2| <= r1 + r2 within the tolerance band.
bool pairwise_intersects(const Disk& d1, const Disk& d2, const Tolerance& tol);

/// Diametral-disk variant. When every endpoint coordinate is a dyadic
/// rational of bounded size the decision is exact (two-stage squaring in
/// 128-bit integers); otherwise falls back to the tolerance test.
bool pairwise_intersects(const DiametralDisk& d1, const DiametralDisk& d2,
                         const Tolerance& tol);

/// Exact verdict when the inputs qualify for the integer path, else nullopt.
std::optional<bool> pairwise_intersects_exact(const DiametralDisk& d1, const DiametralDisk& d2);

bool triple_intersects(const Disk& d1, const Disk& d2, const Disk& d3, const Tolerance& tol);

/// max_i (|x - c_i| - r_i).
double family_slack(std::span<const Disk> disks, Point2 x);

/// Candidate-point decision: the intersection of closed disks is nonempty
/// iff a disk center or a pairwise boundary intersection lies in all disks.
/// Infeasible families report the min-slack point from refine_min_slack.
WitnessReport common_intersection_witness(const DiskFamily& family, const Tolerance& tol = {});
WitnessReport common_intersection_witness(std::span<const Disk> disks, const Tolerance& tol = {});

/// Point minimizing max_i (|x - c_i| - r_i).
MinSlack refine_min_slack(const DiskFamily& family, const Tolerance& tol = {});
MinSlack refine_min_slack(std::span<const Disk> disks, const Tolerance& tol = {});

}  // namespace diamatch
