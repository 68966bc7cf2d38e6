#include "diamatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "diamatch/error.hpp"
#include "diamatch/random.hpp"

namespace diamatch {

namespace {

bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

bool has_duplicate(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  return std::adjacent_find(pts.begin(), pts.end()) != pts.end();
}

std::vector<double> negated_weights(const Instance& instance) {
  const std::size_t n = instance.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost[i * n + j] = -squared_distance(instance.reds[i], instance.blues[j]);
    }
  }
  return cost;
}

// Best completion of `prefix` (rows 0..prefix.size()-1 fixed) maximizing weight.
std::vector<int> complete_optimally(const Instance& instance, const std::vector<int>& prefix) {
  const std::size_t n = instance.size();
  std::vector<bool> used(n, false);
  for (int c : prefix) used[c] = true;
  std::vector<int> free_cols;
  for (std::size_t j = 0; j < n; ++j) {
    if (!used[j]) free_cols.push_back(static_cast<int>(j));
  }
  const std::size_t m = n - prefix.size();
  std::vector<int> out = prefix;
  if (m == 0) return out;
  std::vector<double> cost(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      cost[r * m + c] =
          -squared_distance(instance.reds[prefix.size() + r], instance.blues[free_cols[c]]);
    }
  }
  const Assignment sub = solve_assignment(cost, m);
  for (std::size_t r = 0; r < m; ++r) out.push_back(free_cols[sub.row_to_col[r]]);
  return out;
}

}  // namespace

double tie_band(double weight, std::size_t n, const Tolerance& tol) {
  return 16.0 * static_cast<double>(std::max<std::size_t>(n, 1)) *
             std::numeric_limits<double>::epsilon() * std::fabs(weight) +
         tol.abs;
}

void Instance::validate() const {
  if (reds.empty() || blues.empty()) {
    throw ValidationError("empty", "instance must contain at least one red and one blue point");
  }
  if (reds.size() != blues.size()) {
    throw ValidationError("size_mismatch", "|R| = " + std::to_string(reds.size()) +
                                               " differs from |B| = " +
                                               std::to_string(blues.size()));
  }
  for (const auto* set : {&reds, &blues}) {
    for (Point2 p : *set) {
      if (!is_finite(p)) throw ValidationError("nonfinite", "coordinates must be finite");
    }
  }
  std::vector<Point2> sorted_blues = blues;
  std::sort(sorted_blues.begin(), sorted_blues.end(), lex_less);
  for (Point2 r : reds) {
    if (std::binary_search(sorted_blues.begin(), sorted_blues.end(), r, lex_less)) {
      throw ValidationError("shared_point", "red and blue sets must be disjoint");
    }
  }
  if (!allow_duplicates) {
    if (has_duplicate(reds)) throw ValidationError("duplicate_red", "repeated red point");
    if (has_duplicate(blues)) throw ValidationError("duplicate_blue", "repeated blue point");
  }
}

double Instance::diameter() const {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto* set : {&reds, &blues}) {
    for (Point2 p : *set) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  if (min_x > max_x) return 0.0;
  return std::hypot(max_x - min_x, max_y - min_y);
}

double matching_weight(const Instance& instance, std::span<const int> pairs) {
  double w = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    w += squared_distance(instance.reds[i], instance.blues[pairs[i]]);
  }
  return w;
}

Matching make_matching(const Instance& instance, std::vector<int> pairs) {
  const std::size_t n = instance.size();
  if (pairs.size() != n) {
    throw ValidationError("not_a_permutation", "matching size differs from instance size");
  }
  std::vector<bool> seen(n, false);
  for (int j : pairs) {
    if (j < 0 || static_cast<std::size_t>(j) >= n || seen[j]) {
      throw ValidationError("not_a_permutation", "matching is not a bijection");
    }
    seen[j] = true;
  }
  Matching m;
  m.weight = matching_weight(instance, pairs);
  m.pairs = std::move(pairs);
  return m;
}

Assignment solve_assignment(std::span<const double> cost, std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t col = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col] = true;
      const std::size_t row = row_of[col];
      double delta = kInf;
      std::size_t next_col = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost[(row - 1) * n + (j - 1)] - u[row] - v[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next_col = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next_col;
    } while (row_of[col] != 0);
    do {
      const std::size_t prev = way[col];
      row_of[col] = row_of[prev];
      col = prev;
    } while (col != 0);
  }

  Assignment out;
  out.row_to_col.assign(n, -1);
  out.row_potential.assign(u.begin() + 1, u.end());
  out.col_potential.assign(v.begin() + 1, v.end());
  for (std::size_t j = 1; j <= n; ++j) {
    out.row_to_col[row_of[j] - 1] = static_cast<int>(j - 1);
  }
  return out;
}

Matching max_matching(const Instance& instance, const Tolerance& tol) {
  instance.validate();
  const std::size_t n = instance.size();
  const std::vector<double> cost = negated_weights(instance);
  const Assignment solved = solve_assignment(cost, n);

  std::vector<int> best = solved.row_to_col;
  const double best_weight = matching_weight(instance, best);
  const double band = tie_band(best_weight, n, tol);
  const double threshold = best_weight - band;
  // Reduced costs bound the weight loss of any matching using an edge, so
  // edges with reduced cost above the band cannot be co-optimal.
  const double filter = band + 1e-12 * std::fabs(best_weight);
  auto reduced = [&](std::size_t i, int j) {
    return std::max(0.0, cost[i * n + j] - solved.row_potential[i] - solved.col_potential[j]);
  };

  // Lexicographic post-pass: at each row take the smallest column that
  // still admits a co-optimal completion.
  std::vector<int> prefix;
  double prefix_reduced = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> used(n, false);
    for (int c : prefix) used[c] = true;
    for (int j = 0; j < best[i]; ++j) {
      if (used[j] || prefix_reduced + reduced(i, j) > filter) continue;
      std::vector<int> trial = prefix;
      trial.push_back(j);
      std::vector<int> candidate = complete_optimally(instance, trial);
      if (matching_weight(instance, candidate) >= threshold) {
        best = std::move(candidate);
        break;
      }
    }
    prefix.push_back(best[i]);
    prefix_reduced += reduced(i, best[i]);
  }
  return make_matching(instance, std::move(best));
}

Matching brute_force_max_matching(const Instance& instance, const Tolerance& tol) {
  instance.validate();
  const std::size_t n = instance.size();
  if (n > kBruteForceLimit) {
    throw ValidationError("size_guard", "brute force refuses n = " + std::to_string(n) +
                                            " > " + std::to_string(kBruteForceLimit));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<double, std::vector<int>>> all;
  double max_weight = -std::numeric_limits<double>::infinity();
  do {
    const double w = matching_weight(instance, perm);
    max_weight = std::max(max_weight, w);
    all.emplace_back(w, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  const double threshold = max_weight - tie_band(max_weight, n, tol);
  for (auto& [w, p] : all) {
    if (w >= threshold) return make_matching(instance, std::move(p));
  }
  return make_matching(instance, std::move(all.front().second));
}

SubsetCheck is_k_subset_maximum(const Instance& instance, const Matching& matching,
                                std::size_t k, const Tolerance& tol) {
  instance.validate();
  const std::size_t n = instance.size();
  if (k < 2 || k > kBruteForceLimit) {
    throw ValidationError("bad_k", "subset size must lie in [2, 8]");
  }
  (void)make_matching(instance, matching.pairs);
  SubsetCheck out;
  if (k > n) return out;

  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  std::vector<int> blues(k), order(k);
  while (true) {
    double current = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      blues[a] = matching.pairs[subset[a]];
      current += squared_distance(instance.reds[subset[a]], instance.blues[blues[a]]);
    }
    const double threshold = current + tol.band(current);
    std::iota(order.begin(), order.end(), 0);
    while (std::next_permutation(order.begin(), order.end())) {
      double alt = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        alt += squared_distance(instance.reds[subset[a]], instance.blues[blues[order[a]]]);
      }
      if (alt > threshold) {
        out.maximal = false;
        out.subset = subset;
        out.improved_blues.resize(k);
        for (std::size_t a = 0; a < k; ++a) out.improved_blues[a] = blues[order[a]];
        out.gain = alt - current;
        return out;
      }
    }
    // Next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && static_cast<std::size_t>(subset[pos - 1]) == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t a = pos; a < k; ++a) subset[a] = subset[a - 1] + 1;
  }
  return out;
}

Matching local_search_2swap(const Instance& instance, const Matching& start,
                            std::uint64_t seed, const Tolerance& tol) {
  instance.validate();
  Matching current = make_matching(instance, start.pairs);
  const std::size_t n = instance.size();
  std::vector<std::pair<int, int>> order;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) order.emplace_back(i, j);
  }
  Rng rng(seed);
  bool improved = true;
  while (improved) {
    improved = false;
    rng.shuffle(order);
    for (auto [i, j] : order) {
      auto& p = current.pairs;
      const double now = squared_distance(instance.reds[i], instance.blues[p[i]]) +
                         squared_distance(instance.reds[j], instance.blues[p[j]]);
      const double swapped = squared_distance(instance.reds[i], instance.blues[p[j]]) +
                             squared_distance(instance.reds[j], instance.blues[p[i]]);
      if (swapped > now + tol.band(now)) {
        std::swap(p[i], p[j]);
        improved = true;
      }
    }
  }
  current.weight = matching_weight(instance, current.pairs);
  return current;
}

}  // namespace diamatch
