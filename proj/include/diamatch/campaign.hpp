#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diamatch/intersection.hpp"
#include "diamatch/matching.hpp"

namespace diamatch {

// --- Instance generation ---------------------------------------------------

/// uniform: unit square. clustered: three Gaussian clusters (sigma 0.05).
/// collinear: a random line through the unit square with 1e-6 jitter.
/// line: exactly on y = 0.5.
enum class Distribution { kUniform, kClustered, kCollinear, kLine };

Distribution parse_distribution(std::string_view name);
std::string to_string(Distribution d);

/// Seed of the generator stream for instance (n, seed): seed ^ splitmix64(n).
std::uint64_t instance_stream(std::uint64_t seed, std::size_t n);

Instance generate_instance(std::size_t n, std::uint64_t seed, Distribution dist);

// --- Common-intersection verification campaign -------------------------------

struct VerifyOptions {
  std::size_t n_min = 2;
  std::size_t n_max = 16;
  std::uint64_t seed_start = 0;
  std::uint64_t seeds = 100;
  Distribution distribution = Distribution::kUniform;
  Tolerance tol;
  unsigned jobs = 1;
  /// Subset maximality (k = 2, 3), all-triples consistency and, for
  /// n <= 7, brute-force weight agreement.
  bool audit = true;
};

struct InstanceOutcome {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Matching matching;
  WitnessReport witness;
  double diameter = 0.0;
  /// slack / diameter (0 for a zero-diameter instance).
  double relative_slack = 0.0;
  bool feasible = false;
  /// -1 not run, 0 failed, 1 passed.
  int subset2 = -1;
  int subset3 = -1;
  int triples = -1;
  int brute_force = -1;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<InstanceOutcome> outcomes;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double worst_slack = 0.0;
  double worst_relative_slack = 0.0;
};

/// Full pipeline on one instance: max matching, diametral disks, witness,
/// and the optional audits.
InstanceOutcome verify_instance(const Instance& instance, const Tolerance& tol, bool audit);

/// Outcomes are ordered by (n, seed) regardless of `jobs`.
VerifyReport run_verify(const VerifyOptions& options);

/// Deterministic JSON; `per_instance` includes every outcome, otherwise
/// only failures are listed.
std::string verify_report_json(const VerifyReport& report, bool per_instance);

// --- Strategy comparison ---------------------------------------------------

enum class Strategy { kMaxSq, kMinSq, kGreedy, kRandom, kLocal2Swap };

Strategy parse_strategy(std::string_view name);
std::string to_string(Strategy s);

/// Matching chosen by a strategy; randomized strategies draw from `seed`.
Matching apply_strategy(Strategy s, const Instance& instance, std::uint64_t seed, const Tolerance& tol);

struct ExperimentOptions {
  std::vector<Strategy> strategies{Strategy::kMaxSq};
  std::size_t n_min = 2;
  std::size_t n_max = 16;
  std::uint64_t seed_start = 0;
  std::uint64_t seeds = 100;
  Distribution distribution = Distribution::kUniform;
  Tolerance tol;
  unsigned jobs = 1;
};

struct ExperimentRow {
  Strategy strategy = Strategy::kMaxSq;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double weight = 0.0;
  bool feasible = false;
  double slack = 0.0;
  double relative_slack = 0.0;
  /// Fraction of disk pairs that intersect (1 for n = 1).
  double pairwise_rate = 1.0;
};

/// Rows ordered by (strategy as listed, n, seed).
std::vector<ExperimentRow> run_experiment(const ExperimentOptions& options);

/// Columns: strategy,n,seed,weight,feasible,slack,relative_slack,pairwise_rate.
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

// --- Property suites for the proof steps -----------------------------------

struct SuiteFailure {
  std::uint64_t seed = 0;
  /// JSON object describing the configuration and the failed check.
  std::string config_json;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  /// Ordered (name, value) pairs: worst residuals and case counts.
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<SuiteFailure> failures;

  bool ok() const { return failed == 0; }
  double metric(std::string_view key) const;
};

struct SuiteOptions {
  /// Runs a single suite when set.
  std::optional<std::string> only;
  /// Overrides every suite's default case count.
  std::optional<std::uint64_t> cases;
  std::uint64_t seed_start = 0;
  Tolerance tol;
  unsigned jobs = 1;
};

/// lemma1 (four-point criterion), lemma2 (2-swap optimum pairwise
/// intersection), lemma3 (three-circle point), lemma4 (inversion side),
/// lemma5 (half-plane containment), lemma6 (shrink + witness), helly
/// (all-triples versus global verdict).
const std::vector<std::string>& suite_names();
std::uint64_t default_suite_cases(std::string_view name);

SuiteResult run_suite(std::string_view name, std::uint64_t cases, const SuiteOptions& options);
std::vector<SuiteResult> run_suites(const SuiteOptions& options);

std::string suites_report_json(const std::vector<SuiteResult>& results, const SuiteOptions& options);

/// Writes one JSON file per failure into `dir` (created if missing);
/// returns the number written.
std::size_t dump_failures(const std::vector<SuiteResult>& results, const std::string& dir);

// --- Shared ----------------------------------------------------------------

/// Calls fn(i) for i in [0, count) on `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace diamatch
