#include "diamatch/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "diamatch/error.hpp"
#include "diamatch/io.hpp"
#include "diamatch/random.hpp"

namespace diamatch {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::uint64_t kStrategyTag = 0x5f3759df2c6a1b8dULL;

ojson point_json(Point2 p) { return ojson::array({p.x, p.y}); }

bool all_triples_intersect(std::span<const Disk> disks, const Tolerance& tol) {
  const std::size_t n = disks.size();
  if (n == 1) return true;
  if (n == 2) return pairwise_intersects(disks[0], disks[1], tol);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!triple_intersects(disks[a], disks[b], disks[c], tol)) return false;
      }
    }
  }
  return true;
}

}  // namespace

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) error_index = i, error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  // Rethrow the lowest-index failure so the error does not depend on timing.
  if (error) std::rethrow_exception(error);
}

// --- Instance generation ---------------------------------------------------

Distribution parse_distribution(std::string_view name) {
  if (name == "uniform") return Distribution::kUniform;
  if (name == "clustered") return Distribution::kClustered;
  if (name == "collinear") return Distribution::kCollinear;
  if (name == "line") return Distribution::kLine;
  throw ValidationError("bad_distribution", "unknown distribution '" + std::string(name) + "'");
}

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::kUniform: return "uniform";
    case Distribution::kClustered: return "clustered";
    case Distribution::kCollinear: return "collinear";
    case Distribution::kLine: return "line";
  }
  return "uniform";
}

std::uint64_t instance_stream(std::uint64_t seed, std::size_t n) { return seed ^ splitmix64(n); }

Instance generate_instance(std::size_t n, std::uint64_t seed, Distribution dist) {
  if (n == 0) throw ValidationError("empty", "instance size must be positive");
  Rng rng(instance_stream(seed, n) ^ splitmix64(static_cast<std::uint64_t>(dist) + 1));
  Instance inst;
  auto draw = [&](auto&& sample) {
    // Re-draw on the (practically impossible) collision to keep sets valid.
    for (int attempt = 0; attempt < 100; ++attempt) {
      inst.reds.clear();
      inst.blues.clear();
      for (std::size_t i = 0; i < n; ++i) inst.reds.push_back(sample());
      for (std::size_t i = 0; i < n; ++i) inst.blues.push_back(sample());
      try {
        inst.validate();
        return;
      } catch (const ValidationError&) {
      }
    }
    throw ValidationError("generator", "could not draw a valid instance");
  };
  switch (dist) {
    case Distribution::kUniform:
      draw([&] { return Point2{rng.uniform01(), rng.uniform01()}; });
      break;
    case Distribution::kClustered: {
      std::array<Point2, 3> centers;
      for (auto& c : centers) c = {rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)};
      draw([&] {
        const Point2 c = centers[rng.below(3)];
        const double dx = 0.05 * rng.normal();
        const double dy = 0.05 * rng.normal();
        return Point2{c.x + dx, c.y + dy};
      });
      break;
    }
    case Distribution::kCollinear: {
      const double angle = rng.uniform(0.0, M_PI);
      const Vec2 dir{std::cos(angle), std::sin(angle)};
      draw([&] {
        const double t = rng.uniform(-0.5, 0.5);
        const double jx = rng.uniform(-1e-6, 1e-6);
        const double jy = rng.uniform(-1e-6, 1e-6);
        return Point2{0.5 + t * dir.x + jx, 0.5 + t * dir.y + jy};
      });
      break;
    }
    case Distribution::kLine:
      draw([&] { return Point2{rng.uniform01(), 0.5}; });
      break;
  }
  return inst;
}

// --- Verification ------------------------------------------------------------

InstanceOutcome verify_instance(const Instance& instance, const Tolerance& tol, bool audit) {
  InstanceOutcome o;
  o.n = instance.size();
  o.matching = max_matching(instance, tol);
  const DiskFamily family = DiskFamily::from_matching(instance, o.matching);
  o.witness = common_intersection_witness(family, tol);
  o.diameter = instance.diameter();
  o.relative_slack = o.diameter > 0.0 ? o.witness.slack / o.diameter : 0.0;
  o.feasible = o.witness.slack <= tol.band(o.diameter);
  if (!o.feasible) o.failures.push_back("no_common_point");
  if (!audit) return o;

  if (o.n >= 2) {
    o.subset2 = is_k_subset_maximum(instance, o.matching, 2, tol).maximal ? 1 : 0;
    if (!o.subset2) o.failures.push_back("subset2_not_maximum");
  }
  if (o.n >= 3) {
    o.subset3 = is_k_subset_maximum(instance, o.matching, 3, tol).maximal ? 1 : 0;
    if (!o.subset3) o.failures.push_back("subset3_not_maximum");
  }
  const bool triples = all_triples_intersect(family.disks, tol);
  const bool agree = triples == o.witness.feasible || std::fabs(o.witness.slack) <= o.witness.band;
  o.triples = agree ? 1 : 0;
  if (!agree) o.failures.push_back("triples_disagree");
  if (o.n <= 7) {
    const Matching brute = brute_force_max_matching(instance, tol);
    o.brute_force = brute.weight == o.matching.weight ? 1 : 0;
    if (!o.brute_force) o.failures.push_back("brute_force_weight_differs");
  }
  return o;
}

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.n_min < 1 || options.n_max < options.n_min) {
    throw ValidationError("bad_range", "need 1 <= n-min <= n-max");
  }
  if (options.seeds < 1) throw ValidationError("bad_seeds", "seed count must be at least 1");
  VerifyReport rep;
  rep.options = options;
  std::vector<std::pair<std::size_t, std::uint64_t>> tasks;
  for (std::size_t n = options.n_min; n <= options.n_max; ++n) {
    for (std::uint64_t s = 0; s < options.seeds; ++s) tasks.emplace_back(n, options.seed_start + s);
  }
  rep.outcomes.resize(tasks.size());
  parallel_for(tasks.size(), options.jobs, [&](std::size_t i) {
    const auto [n, seed] = tasks[i];
    InstanceOutcome o = verify_instance(generate_instance(n, seed, options.distribution), options.tol,
                                        options.audit);
    o.seed = seed;
    rep.outcomes[i] = std::move(o);
  });
  rep.worst_slack = -std::numeric_limits<double>::infinity();
  rep.worst_relative_slack = -std::numeric_limits<double>::infinity();
  for (const auto& o : rep.outcomes) {
    (o.passed() ? rep.passed : rep.failed) += 1;
    rep.worst_slack = std::max(rep.worst_slack, o.witness.slack);
    rep.worst_relative_slack = std::max(rep.worst_relative_slack, o.relative_slack);
  }
  return rep;
}

std::string verify_report_json(const VerifyReport& rep, bool per_instance) {
  const VerifyOptions& opt = rep.options;
  ojson doc;
  doc["schema"] = "diamatch.verify/1";
  doc["distribution"] = to_string(opt.distribution);
  doc["n_min"] = opt.n_min;
  doc["n_max"] = opt.n_max;
  doc["seed_start"] = opt.seed_start;
  doc["seeds"] = opt.seeds;
  doc["tol"] = opt.tol.rel;
  doc["audit"] = opt.audit;
  doc["instances"] = rep.outcomes.size();
  doc["passed"] = rep.passed;
  doc["failed"] = rep.failed;
  doc["worst_slack"] = rep.worst_slack;
  doc["worst_relative_slack"] = rep.worst_relative_slack;
  auto audit_flag = [](int v) { return v < 0 ? ojson(nullptr) : ojson(v == 1); };
  auto outcome_json = [&](const InstanceOutcome& o) {
    ojson r;
    r["n"] = o.n;
    r["seed"] = o.seed;
    r["pairs"] = o.matching.pairs;
    r["weight"] = o.matching.weight;
    r["feasible"] = o.feasible;
    r["boundary"] = o.witness.boundary;
    r["witness"] = point_json(o.witness.witness);
    r["slack"] = o.witness.slack;
    r["relative_slack"] = o.relative_slack;
    r["certificate"] = o.witness.certificate;
    r["subset2"] = audit_flag(o.subset2);
    r["subset3"] = audit_flag(o.subset3);
    r["triples"] = audit_flag(o.triples);
    r["brute_force"] = audit_flag(o.brute_force);
    r["failures"] = o.failures;
    return r;
  };
  ojson failures = ojson::array();
  for (const auto& o : rep.outcomes) {
    if (o.passed()) continue;
    ojson f;
    f["n"] = o.n;
    f["seed"] = o.seed;
    f["reasons"] = o.failures;
    f["slack"] = o.witness.slack;
    f["replay"] = "verify --n-min " + std::to_string(o.n) + " --n-max " + std::to_string(o.n) +
                  " --dist " + to_string(opt.distribution) + " --replay " + std::to_string(o.seed);
    failures.push_back(f);
  }
  doc["failures"] = failures;
  if (per_instance) {
    ojson results = ojson::array();
    for (const auto& o : rep.outcomes) results.push_back(outcome_json(o));
    doc["results"] = results;
  }
  return doc.dump(2) + "\n";
}

// --- Strategies --------------------------------------------------------------

Strategy parse_strategy(std::string_view name) {
  if (name == "max-sq") return Strategy::kMaxSq;
  if (name == "min-sq") return Strategy::kMinSq;
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "random") return Strategy::kRandom;
  if (name == "local2swap") return Strategy::kLocal2Swap;
  throw ValidationError("bad_strategy", "unknown strategy '" + std::string(name) + "'");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kMaxSq: return "max-sq";
    case Strategy::kMinSq: return "min-sq";
    case Strategy::kGreedy: return "greedy";
    case Strategy::kRandom: return "random";
    case Strategy::kLocal2Swap: return "local2swap";
  }
  return "max-sq";
}

Matching apply_strategy(Strategy s, const Instance& instance, std::uint64_t seed, const Tolerance& tol) {
  instance.validate();
  const std::size_t n = instance.size();
  switch (s) {
    case Strategy::kMaxSq:
      return max_matching(instance, tol);
    case Strategy::kMinSq: {
      std::vector<double> cost(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = squared_distance(instance.reds[i], instance.blues[j]);
      }
      return make_matching(instance, solve_assignment(cost, n).row_to_col);
    }
    case Strategy::kGreedy: {
      // Heaviest remaining edge first; ties broken by (red, blue) index.
      std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          edges.emplace_back(squared_distance(instance.reds[i], instance.blues[j]), i, j);
        }
      }
      std::stable_sort(edges.begin(), edges.end(),
                       [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
      std::vector<int> pairs(n, -1);
      std::vector<bool> used(n, false);
      for (const auto& [w, i, j] : edges) {
        if (pairs[i] >= 0 || used[j]) continue;
        pairs[i] = static_cast<int>(j);
        used[j] = true;
      }
      return make_matching(instance, std::move(pairs));
    }
    case Strategy::kRandom:
    case Strategy::kLocal2Swap: {
      Rng rng(seed ^ kStrategyTag);
      std::vector<int> pairs(n);
      std::iota(pairs.begin(), pairs.end(), 0);
      rng.shuffle(pairs);
      Matching start = make_matching(instance, std::move(pairs));
      if (s == Strategy::kRandom) return start;
      return local_search_2swap(instance, start, rng.next(), tol);
    }
  }
  throw ValidationError("bad_strategy", "unknown strategy");
}

std::vector<ExperimentRow> run_experiment(const ExperimentOptions& options) {
  if (options.n_min < 1 || options.n_max < options.n_min) {
    throw ValidationError("bad_range", "need 1 <= n-min <= n-max");
  }
  if (options.seeds < 1) throw ValidationError("bad_seeds", "seed count must be at least 1");
  if (options.strategies.empty()) throw ValidationError("bad_strategy", "no strategies given");
  struct Task {
    Strategy strategy;
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (Strategy s : options.strategies) {
    for (std::size_t n = options.n_min; n <= options.n_max; ++n) {
      for (std::uint64_t k = 0; k < options.seeds; ++k) tasks.push_back({s, n, options.seed_start + k});
    }
  }
  std::vector<ExperimentRow> rows(tasks.size());
  parallel_for(tasks.size(), options.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    const Instance inst = generate_instance(t.n, t.seed, options.distribution);
    const Matching m = apply_strategy(t.strategy, inst, instance_stream(t.seed, t.n), options.tol);
    const DiskFamily family = DiskFamily::from_matching(inst, m);
    const WitnessReport w = common_intersection_witness(family, options.tol);
    ExperimentRow& row = rows[i];
    row.strategy = t.strategy;
    row.n = t.n;
    row.seed = t.seed;
    row.weight = m.weight;
    const double diameter = inst.diameter();
    row.slack = w.slack;
    row.relative_slack = diameter > 0.0 ? w.slack / diameter : 0.0;
    row.feasible = w.slack <= options.tol.band(diameter);
    std::size_t pairs = 0, hits = 0;
    for (std::size_t a = 0; a < family.disks.size(); ++a) {
      for (std::size_t b = a + 1; b < family.disks.size(); ++b) {
        ++pairs;
        if (pairwise_intersects(family.disks[a], family.disks[b], options.tol)) ++hits;
      }
    }
    row.pairwise_rate = pairs == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(pairs);
  });
  return rows;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = "strategy,n,seed,weight,feasible,slack,relative_slack,pairwise_rate\n";
  for (const auto& r : rows) {
    out += to_string(r.strategy) + "," + std::to_string(r.n) + "," + std::to_string(r.seed) + "," +
           format_double(r.weight) + "," + (r.feasible ? "1" : "0") + "," + format_double(r.slack) + "," +
           format_double(r.relative_slack) + "," + format_double(r.pairwise_rate) + "\n";
  }
  return out;
}

}  // namespace diamatch
