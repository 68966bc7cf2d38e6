#include "diamatch/intersection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "diamatch/error.hpp"

namespace diamatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Families up to this size get the exhaustive basis search in refine_min_slack.
constexpr std::size_t kExactBasisLimit = 40;
// Disks kept for the basis search after bisection on larger families.
constexpr std::size_t kActiveSetSize = 12;

double scale_of(std::span<const Disk> disks) {
  double min_x = kInf, min_y = kInf, max_x = -kInf, max_y = -kInf;
  for (const Disk& d : disks) {
    min_x = std::min(min_x, d.center.x - d.radius);
    min_y = std::min(min_y, d.center.y - d.radius);
    max_x = std::max(max_x, d.center.x + d.radius);
    max_y = std::max(max_y, d.center.y + d.radius);
  }
  if (min_x > max_x) return 0.0;
  return std::hypot(max_x - min_x, max_y - min_y);
}

struct Candidate {
  Point2 point;
  double slack = kInf;
};

// Minimum-slack candidate among centers and pairwise boundary intersections,
// first in generation order on ties.
Candidate best_candidate(std::span<const Disk> disks, const Tolerance& tol) {
  Candidate best;
  auto consider = [&](Point2 x) {
    const double s = family_slack(disks, x);
    if (s < best.slack) best = {x, s};
  };
  for (const Disk& d : disks) consider(d.center);
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      std::vector<Point2> pts;
      try {
        pts = circle_circle_intersection(disks[i], disks[j], tol);
      } catch (const GeometryError&) {
        continue;  // identical circles: centers already cover them
      }
      for (Point2 x : pts) consider(x);
    }
  }
  return best;
}

std::vector<int> active_disks(std::span<const Disk> disks, Point2 x, double band) {
  std::vector<std::pair<double, int>> slacks;
  double top = -kInf;
  for (std::size_t i = 0; i < disks.size(); ++i) {
    const double s = disks[i].slack(x);
    slacks.emplace_back(s, static_cast<int>(i));
    top = std::max(top, s);
  }
  std::stable_sort(slacks.begin(), slacks.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> out;
  for (const auto& [s, i] : slacks) {
    if (out.size() == 3 || s < top - band) break;
    out.push_back(i);
  }
  return out;
}

// Points where the slack of every disk in a basis of size 1..3 is equal.
// The minimizer of max_i slack is one of them for its own active basis.
void basis_points(std::span<const Disk> disks, std::span<const int> subset,
                  std::vector<Point2>& out) {
  for (int i : subset) out.push_back(disks[i].center);
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const Disk& di = disks[subset[a]];
      const Disk& dj = disks[subset[b]];
      const Vec2 e = dj.center - di.center;
      const double d = norm(e);
      if (d == 0.0 || std::fabs(di.radius - dj.radius) > d) continue;
      out.push_back(di.center + (0.5 * (d + di.radius - dj.radius) / d) * e);
    }
  }
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      for (std::size_t c = b + 1; c < subset.size(); ++c) {
        const Disk& d0 = disks[subset[a]];
        const Disk& d1 = disks[subset[b]];
        const Disk& d2 = disks[subset[c]];
        // With y = x - c0: 2 e_m . y = |e_m|^2 + (r0^2 - rm^2) + 2 (r0 - rm) t.
        const Vec2 e1 = d1.center - d0.center;
        const Vec2 e2 = d2.center - d0.center;
        const double det = 4.0 * cross(e1, e2);
        if (std::fabs(det) <= 4e-14 * norm(e1) * norm(e2)) continue;  // collinear centers
        const double k1 = squared_norm(e1) + (d0.radius - d1.radius) * (d0.radius + d1.radius);
        const double k2 = squared_norm(e2) + (d0.radius - d2.radius) * (d0.radius + d2.radius);
        const double g1 = 2.0 * (d0.radius - d1.radius);
        const double g2 = 2.0 * (d0.radius - d2.radius);
        // Cramer on rows (2 e1), (2 e2).
        const Vec2 y0{(k1 * 2.0 * e2.y - k2 * 2.0 * e1.y) / det,
                      (2.0 * e1.x * k2 - 2.0 * e2.x * k1) / det};
        const Vec2 y1{(g1 * 2.0 * e2.y - g2 * 2.0 * e1.y) / det,
                      (2.0 * e1.x * g2 - 2.0 * e2.x * g1) / det};
        // |y0 + y1 t|^2 = (r0 + t)^2.
        const double qa = squared_norm(y1) - 1.0;
        const double qb = 2.0 * (dot(y0, y1) - d0.radius);
        const double qc = squared_norm(y0) - d0.radius * d0.radius;
        std::array<double, 2> roots{kInf, kInf};
        if (std::fabs(qa) <= 1e-14) {
          if (qb != 0.0) roots[0] = -qc / qb;
        } else {
          const double disc = qb * qb - 4.0 * qa * qc;
          if (disc < 0.0) continue;
          const double sq = std::sqrt(disc);
          const double q = -0.5 * (qb + std::copysign(sq, qb));
          roots[0] = q / qa;
          if (q != 0.0) roots[1] = qc / q;
        }
        for (double t : roots) {
          if (!std::isfinite(t)) continue;
          out.push_back(d0.center + y0 + t * y1);
        }
      }
    }
  }
}

MinSlack minimize_over_bases(std::span<const Disk> disks, std::span<const int> subset,
                             double band) {
  std::vector<Point2> pts;
  basis_points(disks, subset, pts);
  MinSlack best;
  best.slack = kInf;
  for (Point2 x : pts) {
    if (!is_finite(x)) continue;
    const double s = family_slack(disks, x);
    if (s < best.slack) {
      best.slack = s;
      best.point = x;
    }
  }
  best.basis = active_disks(disks, best.point, band);
  return best;
}

bool inflated_feasible(std::span<const Disk> disks, double t, const Tolerance& tol,
                       Candidate* witness) {
  std::vector<Disk> inflated(disks.begin(), disks.end());
  for (Disk& d : inflated) d.radius = std::max(0.0, d.radius + t);
  const Candidate c = best_candidate(inflated, tol);
  if (witness) *witness = c;
  return c.slack <= tol.band(scale_of(inflated));
}

std::optional<std::array<std::int64_t, 8>> dyadic_integers(const std::array<double, 8>& vals) {
  constexpr double kBound = 1048576.0;  // 2^20 keeps (E - a - b)^2 within 128 bits
  for (int k = 0; k <= 64; ++k) {
    bool integral = true;
    for (double v : vals) {
      const double s = std::ldexp(v, k);
      if (s != std::trunc(s)) {
        integral = false;
        break;
      }
    }
    if (!integral) continue;
    std::array<std::int64_t, 8> out{};
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double s = std::ldexp(vals[i], k);
      if (std::fabs(s) >= kBound) return std::nullopt;
      out[i] = static_cast<std::int64_t>(s);
    }
    return out;
  }
  return std::nullopt;
}

}  // namespace

DiskFamily DiskFamily::from_matching(const Instance& instance, const Matching& matching) {
  DiskFamily family;
  for (std::size_t i = 0; i < matching.pairs.size(); ++i) {
    family.disks.push_back(
        diametral_disk(instance.reds[i], instance.blues[matching.pairs[i]]).disk);
    family.labels.push_back(static_cast<int>(i));
  }
  return family;
}

double DiskFamily::scale() const { return scale_of(disks); }

double family_slack(std::span<const Disk> disks, Point2 x) {
  double s = -kInf;
  for (const Disk& d : disks) s = std::max(s, d.slack(x));
  return s;
}

bool pairwise_intersects(const Disk& d1, const Disk& d2, const Tolerance& tol) {
  const double d = distance(d1.center, d2.center);
  return d <= d1.radius + d2.radius + tol.band(std::max({d, d1.radius, d2.radius}));
}

std::optional<bool> pairwise_intersects_exact(const DiametralDisk& d1, const DiametralDisk& d2) {
  const auto ints =
      dyadic_integers({d1.p.x, d1.p.y, d1.q.x, d1.q.y, d2.p.x, d2.p.y, d2.q.x, d2.q.y});
  if (!ints) return std::nullopt;
  using i128 = __int128;
  const auto& v = *ints;
  // Doubled centers and full diameters keep everything integral:
  // |c1c2| <= r1 + r2  <=>  E <= a + b + 2 sqrt(ab).
  const i128 ex = (v[0] + v[2]) - (v[4] + v[6]);
  const i128 ey = (v[1] + v[3]) - (v[5] + v[7]);
  const i128 e = ex * ex + ey * ey;
  const i128 a = i128(v[2] - v[0]) * (v[2] - v[0]) + i128(v[3] - v[1]) * (v[3] - v[1]);
  const i128 b = i128(v[6] - v[4]) * (v[6] - v[4]) + i128(v[7] - v[5]) * (v[7] - v[5]);
  const i128 lhs = e - a - b;
  if (lhs <= 0) return true;
  return lhs * lhs <= 4 * a * b;
}

bool pairwise_intersects(const DiametralDisk& d1, const DiametralDisk& d2,
                         const Tolerance& tol) {
  if (auto exact = pairwise_intersects_exact(d1, d2)) return *exact;
  return pairwise_intersects(d1.disk, d2.disk, tol);
}

bool triple_intersects(const Disk& d1, const Disk& d2, const Disk& d3, const Tolerance& tol) {
  const std::array<Disk, 3> disks{d1, d2, d3};
  return best_candidate(disks, tol).slack <= tol.band(scale_of(disks));
}

WitnessReport common_intersection_witness(std::span<const Disk> disks, const Tolerance& tol) {
  if (disks.empty()) throw ValidationError("empty_family", "disk family must be nonempty");
  for (const Disk& d : disks) {
    if (!(d.radius >= 0.0) || !is_finite(d.center)) {
      throw ValidationError("bad_disk", "disks need finite centers and nonnegative radii");
    }
  }
  WitnessReport report;
  report.band = tol.band(scale_of(disks));
  const Candidate best = best_candidate(disks, tol);
  if (best.slack <= report.band) {
    report.witness = best.point;
    report.slack = best.slack;
  } else {
    const MinSlack refined = refine_min_slack(disks, tol);
    report.witness = refined.point;
    report.slack = refined.slack;
  }
  report.feasible = report.slack <= report.band;
  report.boundary = std::fabs(report.slack) <= report.band;
  report.certificate = active_disks(disks, report.witness, report.band);
  return report;
}

WitnessReport common_intersection_witness(const DiskFamily& family, const Tolerance& tol) {
  WitnessReport report = common_intersection_witness(std::span<const Disk>(family.disks), tol);
  if (!family.labels.empty()) {
    for (int& idx : report.certificate) idx = family.labels[idx];
  }
  return report;
}

MinSlack refine_min_slack(std::span<const Disk> disks, const Tolerance& tol) {
  if (disks.empty()) throw ValidationError("empty_family", "disk family must be nonempty");
  const double scale = scale_of(disks);
  const double band = tol.band(scale);

  if (disks.size() <= kExactBasisLimit) {
    std::vector<int> all(disks.size());
    std::iota(all.begin(), all.end(), 0);
    return minimize_over_bases(disks, all, band);
  }

  // Bisection on the inflation t, then an exact basis search restricted to
  // the disks that are nearly active at the bracketing witness.
  double lo = -kInf;
  for (const Disk& d : disks) lo = std::max(lo, -d.radius);
  Candidate start = best_candidate(disks, tol);
  double hi = std::max(start.slack, lo);
  Candidate at_hi = start;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(scale, 1e-300); ++iter) {
    const double mid = 0.5 * (lo + hi);
    Candidate c;
    if (inflated_feasible(disks, mid, tol, &c)) {
      hi = mid;
      at_hi = c;
    } else {
      lo = mid;
    }
  }
  std::vector<std::pair<double, int>> ranked;
  for (std::size_t i = 0; i < disks.size(); ++i) {
    ranked.emplace_back(disks[i].slack(at_hi.point), static_cast<int>(i));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> active;
  for (std::size_t i = 0; i < std::min(kActiveSetSize, ranked.size()); ++i) {
    active.push_back(ranked[i].second);
  }
  MinSlack polished = minimize_over_bases(disks, active, band);
  const double fallback = family_slack(disks, at_hi.point);
  if (polished.slack <= fallback) return polished;
  return {at_hi.point, fallback, active_disks(disks, at_hi.point, band)};
}

MinSlack refine_min_slack(const DiskFamily& family, const Tolerance& tol) {
  MinSlack out = refine_min_slack(std::span<const Disk>(family.disks), tol);
  if (!family.labels.empty()) {
    for (int& idx : out.basis) idx = family.labels[idx];
  }
  return out;
}

}  // namespace diamatch
