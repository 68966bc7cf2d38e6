#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "diamatch/geometry.hpp"

namespace diamatch {

/// Red and blue point sets of equal size.
struct Instance {
  std::vector<Point2> reds;
  std::vector<Point2> blues;
  /// Permits repeated points within one color.
  bool allow_duplicates = false;

  std::size_t size() const { return reds.size(); }
  /// Throws ValidationError naming the first violated constraint.
  void validate() const;
  /// Diagonal of the bounding box of all points.
  double diameter() const;
};

/// Red index i is matched to blue index pairs[i].
struct Matching {
  std::vector<int> pairs;
  double weight = 0.0;

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Sum of squared matched distances, accumulated in red-index order.
double matching_weight(const Instance& instance, std::span<const int> pairs);

Matching make_matching(const Instance& instance, std::vector<int> pairs);

/// Result of a minimum-cost assignment with dual potentials satisfying
/// row_potential[i] + col_potential[j] <= cost(i, j), tight on the assignment.
struct Assignment {
  std::vector<int> row_to_col;
  std::vector<double> row_potential;
  std::vector<double> col_potential;
};

/// O(n^3) Hungarian method on a square row-major cost matrix.
Assignment solve_assignment(std::span<const double> cost, std::size_t n);

/// Weights closer than this to the optimum count as ties: rounding error of an
/// n-term sum plus tol.abs. The relative tolerance is deliberately not used,
/// so a returned matching is never measurably worse than the optimum.
double tie_band(double weight, std::size_t n, const Tolerance& tol);

/// Matching maximizing the sum of squared distances. Among co-optimal
/// matchings (weight within tie_band of the optimum) the lexicographically
/// smallest permutation is returned.
Matching max_matching(const Instance& instance, const Tolerance& tol = {});

/// Exhaustive maximum over all n! permutations with the same tie-break.
/// Refuses n > kBruteForceLimit.
inline constexpr std::size_t kBruteForceLimit = 8;
Matching brute_force_max_matching(const Instance& instance, const Tolerance& tol = {});

struct SubsetCheck {
  bool maximal = true;
  /// Red indices of the first violating subset.
  std::vector<int> subset;
  /// Blue indices assigned to `subset` by the improving re-pairing.
  std::vector<int> improved_blues;
  double gain = 0.0;
};

/// Checks that no re-pairing of the blues inside any k-subset of matched
/// pairs strictly increases the subset weight beyond tol.rel * weight.
SubsetCheck is_k_subset_maximum(const Instance& instance, const Matching& matching,
                                std::size_t k, const Tolerance& tol = {});

/// Applies improving 2-swaps, scanning pairs in a seed-determined order,
/// until none remains.
Matching local_search_2swap(const Instance& instance, const Matching& start,
                            std::uint64_t seed, const Tolerance& tol = {});

}  // namespace diamatch
