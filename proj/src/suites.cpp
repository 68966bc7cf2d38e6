#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>

#include <json.hpp>

#include "diamatch/campaign.hpp"
#include "diamatch/error.hpp"
#include "diamatch/io.hpp"
#include "diamatch/lemma_lab.hpp"
#include "diamatch/random.hpp"

namespace diamatch {

namespace {

using ojson = nlohmann::ordered_json;

enum class Status { kPass, kFail, kSkip };

struct CaseResult {
  Status status = Status::kPass;
  std::vector<double> values;
  ojson detail;
};

struct Metric {
  std::string name;
  bool sum = false;
};

struct SuiteDef {
  std::string name;
  std::uint64_t tag;
  std::uint64_t default_cases;
  std::vector<Metric> metrics;
  std::function<CaseResult(Rng&, const Tolerance&, std::uint64_t)> run;
};

ojson pt(Point2 p) { return ojson::array({p.x, p.y}); }

Point2 random_point(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

double bbox_diag(std::initializer_list<Point2> pts) {
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (Point2 p : pts) {
    min_x = std::min(min_x, p.x), min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x), max_y = std::max(max_y, p.y);
  }
  return std::hypot(max_x - min_x, max_y - min_y);
}

CaseResult fail(std::vector<double> values, ojson detail) {
  return {Status::kFail, std::move(values), std::move(detail)};
}

// Four random points; whenever the straight pairing is maximum the
// projections must be ordered.
CaseResult four_point_case(Rng& rng, const Tolerance& tol) {
  const Point2 p1 = random_point(rng), p2 = random_point(rng), q1 = random_point(rng),
               q2 = random_point(rng);
  if (p1 == p2) return {Status::kSkip, {0, 0, 0}, {}};
  const Lemma1Report r = check_lemma1(p1, p2, q1, q2, tol);
  const double scale = bbox_diag({p1, p2, q1, q2});
  const double residual =
      std::max(std::fabs(r.x_q1 - r.x_q1_power), std::fabs(r.x_q2 - r.x_q2_power)) / scale;
  const bool violation = !r.implication_holds();
  std::vector<double> values{r.is_max_for_four ? 1.0 : 0.0, violation ? 1.0 : 0.0, residual};
  if (violation) {
    return fail(values, {{"check", "projection_order"}, {"p1", pt(p1)}, {"p2", pt(p2)},
                         {"q1", pt(q1)}, {"q2", pt(q2)}, {"x_q1", r.x_q1}, {"x_q2", r.x_q2}});
  }
  return {Status::kPass, values, {}};
}

// Local 2-swap optimum from a random start: every pair of disks meets.
CaseResult two_swap_case(Rng& rng, const Tolerance& tol) {
  const std::size_t n = 2 + rng.below(15);
  const std::uint64_t inst_seed = rng.next();
  const Instance inst = generate_instance(n, inst_seed, Distribution::kUniform);
  std::vector<int> start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = static_cast<int>(i);
  rng.shuffle(start);
  const Matching m = local_search_2swap(inst, make_matching(inst, start), rng.next(), tol);
  std::size_t pairs = 0, misses = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      ++pairs;
      const auto da = diametral_disk(inst.reds[a], inst.blues[m.pairs[a]]);
      const auto db = diametral_disk(inst.reds[b], inst.blues[m.pairs[b]]);
      if (!pairwise_intersects(da, db, tol)) ++misses;
    }
  }
  const bool optimal = is_k_subset_maximum(inst, m, 2, tol).maximal;
  std::vector<double> values{double(pairs), double(misses)};
  if (misses > 0 || !optimal) {
    return fail(values, {{"check", misses > 0 ? "disjoint_pair" : "not_2swap_optimal"},
                         {"n", n}, {"instance_seed", inst_seed}, {"pairs", m.pairs}});
  }
  return {Status::kPass, values, {}};
}

// Random triangle with random perpendicular lines: both constructions of
// the common point agree and lie on all three circles.
CaseResult three_circle_case(Rng& rng, const Tolerance& tol) {
  Point2 a, b, c;
  do {
    a = random_point(rng), b = random_point(rng), c = random_point(rng);
  } while (std::fabs(cross(b - a, c - a)) <
           0.1 * std::max({squared_distance(a, b), squared_distance(b, c), squared_distance(c, a)}));
  const Point2 anchor_ab = random_point(rng), anchor_bc = random_point(rng), anchor_ca = random_point(rng);
  const PerpendicularFrame frame = PerpendicularFrame::from_anchors(a, b, c, anchor_ab, anchor_bc, anchor_ca);
  const Lemma3Point o = lemma3_common_point(frame, tol);
  std::vector<double> values{o.discrepancy / o.scale, o.residual / o.scale, o.similarity_residual / o.scale};
  const bool ok = o.discrepancy <= tol.band(o.scale) && o.residual <= 0.1 * tol.band(o.scale);
  if (!ok) {
    return fail(values, {{"check", "common_point"}, {"a", pt(a)}, {"b", pt(b)}, {"c", pt(c)},
                         {"anchor_ab", pt(anchor_ab)}, {"anchor_bc", pt(anchor_bc)},
                         {"anchor_ca", pt(anchor_ca)}, {"discrepancy", o.discrepancy},
                         {"residual", o.residual}, {"scale", o.scale}});
  }
  return {Status::kPass, values, {}};
}

// Random configuration meeting the inversion-lemma preconditions.
CaseResult inversion_case(Rng& rng, const Tolerance& tol) {
  const double y0 = rng.uniform(-1.0, 1.0);
  const Point2 a{rng.uniform(-1.0, 1.0), y0};
  const Point2 b{a.x + rng.uniform(0.2, 2.0), y0};
  double px;
  do {
    px = a.x + rng.uniform(-2.0, 2.0);
  } while (std::fabs(px - a.x) < 0.05 || std::fabs(px - b.x) < 0.05);
  const Point2 p{px, y0};
  const Point2 center{0.5 * (b.x + p.x), y0 + rng.uniform(-2.0, 2.0)};
  const Disk c2{center, distance(center, b)};
  Point2 r;
  int attempts = 0;
  do {
    r = {a.x + rng.uniform(-2.0, 2.0), y0 + rng.uniform(0.05, 2.0)};
    if (++attempts > 1000) return {Status::kSkip, {0, 0, 0}, {}};
  } while (distance(r, center) < c2.radius * (1.0 + 1e-6));
  const Lemma4Report rep = check_lemma4(a, b, p, r, c2, tol);
  const double scale = bbox_diag({a, b, p, r});
  std::vector<double> values{rep.route_discrepancy / scale, rep.tangent ? 1.0 : 0.0, px < a.x ? 1.0 : 0.0};
  if (!rep.holds) {
    return fail(values, {{"check", "same_side"}, {"a", pt(a)}, {"b", pt(b)}, {"p", pt(p)}, {"r", pt(r)},
                         {"c2_center", pt(c2.center)}, {"c2_radius", c2.radius}, {"o", pt(rep.o)}});
  }
  return {Status::kPass, values, {}};
}

// Random half-plane configuration; also probes the swapped order, where
// containment is expected to fail.
CaseResult halfplane_case(Rng& rng, const Tolerance& tol) {
  const double phi = rng.uniform(0.0, 2.0 * M_PI);
  const Vec2 e{std::cos(phi), std::sin(phi)};
  const Vec2 n = perp(e);
  const Point2 origin = random_point(rng);
  Lemma5Config cfg;
  cfg.ell = {origin, e};
  cfg.r = origin + rng.uniform(-1.0, 1.0) * e;
  cfg.c = origin + rng.uniform(-1.0, 1.0) * e;
  cfg.apex = cfg.r + rng.uniform(-1.0, 1.0) * n;
  cfg.direction = n;
  cfg.delta = {{origin, e}, 1};
  double sx = rng.uniform(0.0, 2.0), sy = rng.uniform(0.0, 2.0);
  if (sx > sy) std::swap(sx, sy);
  cfg.x = cfg.apex + sx * n;
  cfg.y = cfg.apex + sy * n;
  const std::uint64_t sample_seed = rng.next();
  const Lemma5Report rep = check_lemma5(cfg, tol, sample_seed, 10000);

  double controls = 0.0, escapes = 0.0;
  const double height_x = dot(cfg.x - origin, n);
  if (sy - sx > 0.1 && distance(cfg.r, cfg.c) > 0.1 && height_x > 0.1) {
    Lemma5Config swapped = cfg;
    std::swap(swapped.x, swapped.y);
    controls = 1.0;
    escapes = check_lemma5(swapped, tol, sample_seed, 2000).holds ? 0.0 : 1.0;
  }
  std::vector<double> values{controls, escapes};
  if (!rep.holds) {
    ojson d{{"check", rep.angle_holds ? "sampling" : "angle"}, {"ell_anchor", pt(origin)},
            {"ell_direction", pt(e)}, {"r", pt(cfg.r)}, {"c", pt(cfg.c)}, {"apex", pt(cfg.apex)},
            {"x", pt(cfg.x)}, {"y", pt(cfg.y)}};
    if (rep.escaping_point) d["escaping_point"] = pt(*rep.escaping_point);
    return fail(values, d);
  }
  return {Status::kPass, values, {}};
}

// Maximum-matching triples: shrink, then build the witness along the case
// analysis and check it against the original disks.
CaseResult shrink_case(Rng& rng, const Tolerance& tol, std::uint64_t index_hint) {
  const Distribution dist = index_hint % 10 == 9 ? Distribution::kLine : Distribution::kUniform;
  const std::uint64_t inst_seed = rng.next();
  const Instance inst = generate_instance(3, inst_seed, dist);
  const Matching m = max_matching(inst, tol);
  const std::array<Point2, 3> p{inst.reds[0], inst.reds[1], inst.reds[2]};
  const std::array<Point2, 3> q{inst.blues[m.pairs[0]], inst.blues[m.pairs[1]], inst.blues[m.pairs[2]]};
  ojson detail{{"distribution", to_string(dist)}, {"instance_seed", inst_seed},
               {"p", {pt(p[0]), pt(p[1]), pt(p[2])}}, {"q", {pt(q[0]), pt(q[1]), pt(q[2])}}};
  std::vector<double> values(7, 0.0);

  const ShrinkState s = shrink_triple(p[0], q[0], p[1], q[1], p[2], q[2], tol);
  const double band = tol.band(s.scale);
  double containment = -std::numeric_limits<double>::infinity();
  bool postcondition = s.tight_count() >= 2;
  for (int i = 0; i < 3; ++i) {
    const Disk small = diametral_disk(p[i], s.shrunk[i]).disk;
    const Disk big = diametral_disk(p[i], q[i]).disk;
    containment = std::max(containment, distance(small.center, big.center) + small.radius - big.radius);
    postcondition = postcondition || s.fully_shrunk(i, tol);
  }
  values[4] = postcondition ? 0.0 : 1.0;
  values[6] = containment / s.scale;
  detail["eps"] = s.eps;
  if (containment > band) {
    detail["check"] = "shrunk_not_contained";
    return fail(values, detail);
  }

  ProofWitness w;
  try {
    w = witness_from_proof(s, tol);
  } catch (const GeometryError& e) {
    detail["check"] = "case_resolution";
    detail["message"] = e.what();
    return fail(values, detail);
  }
  values[static_cast<int>(w.which)] = 1.0;
  values[5] = w.slack_original / s.scale;
  const std::vector<Disk> originals{diametral_disk(p[0], q[0]).disk, diametral_disk(p[1], q[1]).disk,
                                    diametral_disk(p[2], q[2]).disk};
  const WitnessReport global = common_intersection_witness(std::span<const Disk>(originals), tol);
  detail["case"] = to_string(w.which);
  detail["witness"] = pt(w.point);
  detail["slack"] = w.slack_original;
  if (w.slack_original > band) {
    detail["check"] = "witness_outside";
    return fail(values, detail);
  }
  if (!global.feasible) {
    detail["check"] = "solver_disagrees";
    return fail(values, detail);
  }
  return {Status::kPass, values, {}};
}

bool triples_verdict(const std::vector<Disk>& d, const Tolerance& tol) {
  const std::size_t n = d.size();
  if (n == 1) return true;
  if (n == 2) return pairwise_intersects(d[0], d[1], tol);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        if (!triple_intersects(d[a], d[b], d[c], tol)) return false;
  return true;
}

// Random, engineered-infeasible, engineered-feasible and tangent families.
CaseResult helly_case(Rng& rng, const Tolerance& tol, std::uint64_t index_hint) {
  std::vector<Disk> disks;
  const int kind = static_cast<int>(index_hint % 4);
  switch (kind) {
    case 0: {
      const std::size_t m = 1 + rng.below(7);
      for (std::size_t i = 0; i < m; ++i) disks.push_back({random_point(rng, 0.0, 1.0), rng.uniform(0.1, 0.6)});
      break;
    }
    case 1: {
      // Pairwise-meeting, triple-empty: unit triangle, radius in (1/2, 1/sqrt 3).
      const Point2 c0 = random_point(rng);
      const double rot = rng.uniform(0.0, 2.0 * M_PI);
      const double r = rng.uniform(0.51, 0.56);
      for (int j = 0; j < 3; ++j) {
        const double a = rot + 2.0 * M_PI * j / 3.0;
        disks.push_back({c0 + (1.0 / std::sqrt(3.0)) * Vec2{std::cos(a), std::sin(a)}, r});
      }
      const std::size_t extra = rng.below(3);
      for (std::size_t i = 0; i < extra; ++i) disks.push_back({c0 + 0.2 * Vec2{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.8, 1.5)});
      break;
    }
    case 2: {
      const Point2 x = random_point(rng);
      const std::size_t m = 2 + rng.below(6);
      for (std::size_t i = 0; i < m; ++i) {
        const Point2 c = random_point(rng);
        disks.push_back({c, distance(c, x) * rng.uniform(1.0, 1.3)});
      }
      break;
    }
    default: {
      const Point2 c0 = random_point(rng);
      const double r1 = rng.uniform(0.2, 1.0), r2 = rng.uniform(0.2, 1.0);
      const double a = rng.uniform(0.0, 2.0 * M_PI);
      const Vec2 u{std::cos(a), std::sin(a)};
      disks.push_back({c0, r1});
      disks.push_back({c0 + (r1 + r2) * u, r2});
      const Point2 touch = c0 + r1 * u;
      const Point2 c3 = random_point(rng);
      disks.push_back({c3, distance(c3, touch) * rng.uniform(0.999, 1.001)});
      break;
    }
  }
  const WitnessReport w = common_intersection_witness(std::span<const Disk>(disks), tol);
  const bool triples = triples_verdict(disks, tol);
  const bool agree = triples == w.feasible;
  const bool in_band = std::fabs(w.slack) <= w.band;
  std::vector<double> values{w.feasible ? 1.0 : 0.0, w.feasible ? 0.0 : 1.0, (!agree && in_band) ? 1.0 : 0.0,
                             kind == 1 ? 1.0 : 0.0};
  if (!agree && !in_band) {
    ojson d{{"check", "verdict_mismatch"}, {"kind", kind}, {"slack", w.slack}, {"feasible", w.feasible},
            {"triples", triples}};
    ojson arr = ojson::array();
    for (const Disk& disk : disks) arr.push_back({{"center", pt(disk.center)}, {"radius", disk.radius}});
    d["disks"] = arr;
    return fail(values, d);
  }
  return {Status::kPass, values, {}};
}

const std::vector<SuiteDef>& suites() {
  static const std::vector<SuiteDef> defs = [] {
    std::vector<SuiteDef> v;
    v.push_back({"lemma1", 0x11, 10000,
                 {{"applicable", true}, {"violations", true}, {"worst_power_identity_residual", false}},
                 [](Rng& r, const Tolerance& t, std::uint64_t) { return four_point_case(r, t); }});
    v.push_back({"lemma2", 0x22, 100, {{"pairs_checked", true}, {"disjoint_pairs", true}},
                 [](Rng& r, const Tolerance& t, std::uint64_t) { return two_swap_case(r, t); }});
    v.push_back({"lemma3", 0x33, 500,
                 {{"worst_discrepancy", false}, {"worst_residual", false}, {"worst_similarity_residual", false}},
                 [](Rng& r, const Tolerance& t, std::uint64_t) { return three_circle_case(r, t); }});
    v.push_back({"lemma4", 0x44, 1000,
                 {{"worst_route_discrepancy", false}, {"tangent_cases", true}, {"p_left_of_a_cases", true}},
                 [](Rng& r, const Tolerance& t, std::uint64_t) { return inversion_case(r, t); }});
    v.push_back({"lemma5", 0x55, 200, {{"swapped_controls", true}, {"swapped_escapes", true}},
                 [](Rng& r, const Tolerance& t, std::uint64_t) { return halfplane_case(r, t); }});
    v.push_back({"lemma6", 0x66, 1000,
                 {{"collinear_cases", true},
                  {"fully_shrunk_cases", true},
                  {"common_foot_cases", true},
                  {"three_circle_cases", true},
                  {"postcondition_misses", true},
                  {"worst_witness_slack", false},
                  {"worst_containment_excess", false}},
                 [](Rng& r, const Tolerance& t, std::uint64_t seed) { return shrink_case(r, t, seed); }});
    v.push_back({"helly", 0x77, 1000,
                 {{"feasible_families", true},
                  {"infeasible_families", true},
                  {"in_band_disagreements", true},
                  {"engineered_infeasible", true}},
                 [](Rng& r, const Tolerance& t, std::uint64_t seed) { return helly_case(r, t, seed); }});
    return v;
  }();
  return defs;
}

const SuiteDef& find_suite(std::string_view name) {
  for (const auto& s : suites()) {
    if (s.name == name) return s;
  }
  throw ValidationError("bad_suite", "unknown suite '" + std::string(name) + "'");
}

}  // namespace

double SuiteResult::metric(std::string_view key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw ValidationError("bad_metric", "unknown metric '" + std::string(key) + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.push_back(s.name);
    return v;
  }();
  return names;
}

std::uint64_t default_suite_cases(std::string_view name) { return find_suite(name).default_cases; }

SuiteResult run_suite(std::string_view name, std::uint64_t cases, const SuiteOptions& options) {
  const SuiteDef& def = find_suite(name);
  std::vector<CaseResult> results(cases);
  parallel_for(cases, options.jobs, [&](std::size_t i) {
    const std::uint64_t seed = options.seed_start + i;
    Rng rng(splitmix64(def.tag) ^ seed);
    results[i] = def.run(rng, options.tol, seed);
  });

  SuiteResult out;
  out.name = def.name;
  out.cases = cases;
  std::vector<double> agg(def.metrics.size(), 0.0);
  for (std::size_t i = 0; i < cases; ++i) {
    const CaseResult& r = results[i];
    if (r.status == Status::kSkip) {
      ++out.skipped;
      continue;
    }
    (r.status == Status::kPass ? out.passed : out.failed) += 1;
    for (std::size_t k = 0; k < def.metrics.size() && k < r.values.size(); ++k) {
      agg[k] = def.metrics[k].sum ? agg[k] + r.values[k] : std::max(agg[k], r.values[k]);
    }
    if (r.status == Status::kFail) out.failures.push_back({options.seed_start + i, r.detail.dump()});
  }
  for (std::size_t k = 0; k < def.metrics.size(); ++k) {
    out.metrics.emplace_back(def.metrics[k].name, agg[k]);
  }
  return out;
}

std::vector<SuiteResult> run_suites(const SuiteOptions& options) {
  std::vector<SuiteResult> out;
  for (const auto& name : suite_names()) {
    if (options.only && *options.only != name) continue;
    out.push_back(run_suite(name, options.cases.value_or(default_suite_cases(name)), options));
  }
  if (options.only && out.empty()) find_suite(*options.only);
  return out;
}

std::string suites_report_json(const std::vector<SuiteResult>& results, const SuiteOptions& options) {
  ojson doc;
  doc["schema"] = "diamatch.lemmas/1";
  doc["seed_start"] = options.seed_start;
  doc["tol"] = options.tol.rel;
  bool all = true;
  ojson arr = ojson::array();
  for (const auto& r : results) {
    all = all && r.ok();
    ojson s;
    s["name"] = r.name;
    s["cases"] = r.cases;
    s["passed"] = r.passed;
    s["failed"] = r.failed;
    s["skipped"] = r.skipped;
    ojson metrics = ojson::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    s["metrics"] = metrics;
    ojson fails = ojson::array();
    for (const auto& f : r.failures) fails.push_back({{"seed", f.seed}, {"config", ojson::parse(f.config_json)}});
    s["failures"] = fails;
    arr.push_back(s);
  }
  doc["suites"] = arr;
  doc["all_passed"] = all;
  return doc.dump(2) + "\n";
}

std::size_t dump_failures(const std::vector<SuiteResult>& results, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::size_t written = 0;
  for (const auto& r : results) {
    for (const auto& f : r.failures) {
      ojson doc{{"suite", r.name}, {"seed", f.seed}, {"config", ojson::parse(f.config_json)}};
      write_text_file((std::filesystem::path(dir) / (r.name + "-" + std::to_string(f.seed) + ".json")).string(),
                      doc.dump(2) + "\n");
      ++written;
    }
  }
  return written;
}

}  // namespace diamatch
