#pragma once

#include <string>

#include "diamatch/error.hpp"
#include "diamatch/matching.hpp"
#include "diamatch/random.hpp"

namespace diamatch::testing {

/// Code of the ValidationError thrown by fn, or "" if none was thrown.
template <typename Fn>
std::string validation_code(Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.code();
  }
  return "";
}

/// Kind of the GeometryError thrown by fn, if any.
template <typename Fn>
bool throws_geometry(Fn&& fn, GeometryError::Kind kind) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e.kind() == kind;
  }
  return false;
}

inline Instance random_instance(std::size_t n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) {
    inst.reds.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
    inst.blues.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
  }
  return inst;
}

/// Small integer grid: many exact ties between permutations.
inline Instance grid_instance(std::size_t n, Rng& rng, int cells) {
  Instance inst;
  auto fresh = [&](std::vector<Point2>& own) {
    for (;;) {
      const Point2 p{double(rng.below(cells)), double(rng.below(cells))};
      bool clash = false;
      for (Point2 q : inst.reds) clash = clash || q == p;
      for (Point2 q : inst.blues) clash = clash || q == p;
      if (!clash) {
        own.push_back(p);
        return;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    fresh(inst.reds);
    fresh(inst.blues);
  }
  return inst;
}

}  // namespace diamatch::testing
