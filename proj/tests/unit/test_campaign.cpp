#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "diamatch/campaign.hpp"
#include "diamatch/io.hpp"
#include "diamatch/svg.hpp"
#include "test_util.hpp"

using namespace diamatch;
using namespace diamatch::testing;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("instance generation") {
  for (Distribution d : {Distribution::kUniform, Distribution::kClustered, Distribution::kCollinear,
                         Distribution::kLine}) {
    CHECK(parse_distribution(to_string(d)) == d);
    const Instance a = generate_instance(12, 5, d), b = generate_instance(12, 5, d);
    CHECK(a.reds == b.reds);
    CHECK(a.blues == b.blues);
    CHECK(a.size() == 12);
    CHECK(generate_instance(12, 6, d).reds != a.reds);
  }
  for (Point2 p : generate_instance(8, 1, Distribution::kLine).reds) CHECK(p.y == 0.5);
  CHECK(instance_stream(9, 4) == (9 ^ splitmix64(4)));
  CHECK(validation_code([] { parse_distribution("gaussian"); }) == "bad_distribution");
  CHECK(validation_code([] { generate_instance(0, 1, Distribution::kUniform); }) == "empty");
}

TEST_CASE("verification campaign is deterministic across thread counts") {
  VerifyOptions opt;
  opt.n_min = 2;
  opt.n_max = 9;
  opt.seeds = 20;
  opt.distribution = Distribution::kClustered;
  const VerifyReport serial = run_verify(opt);
  opt.jobs = 4;
  const VerifyReport parallel = run_verify(opt);
  CHECK(serial.failed == 0);
  CHECK(serial.passed == 8 * 20);
  CHECK(verify_report_json(serial, true) == verify_report_json(parallel, true));
  for (const auto& o : serial.outcomes) {
    CHECK(o.feasible);
    CHECK(o.subset2 == 1);
    CHECK(o.subset3 == (o.n >= 3 ? 1 : -1));
    CHECK(o.triples == 1);
    CHECK(o.brute_force == (o.n <= 7 ? 1 : -1));
  }
  const auto doc = nlohmann::json::parse(verify_report_json(serial, false));
  CHECK(doc["schema"] == "diamatch.verify/1");
  CHECK(doc["failures"].empty());
  CHECK_FALSE(doc.contains("results"));

  opt.n_max = 1;
  CHECK(validation_code([&] { run_verify(opt); }) == "bad_range");
}

TEST_CASE("strategies") {
  const Tolerance tol;
  for (Strategy s : {Strategy::kMaxSq, Strategy::kMinSq, Strategy::kGreedy, Strategy::kRandom,
                     Strategy::kLocal2Swap}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK(validation_code([] { parse_strategy("best"); }) == "bad_strategy");
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = random_instance(2 + t % 7, rng);
    const double best = apply_strategy(Strategy::kMaxSq, inst, 0, tol).weight;
    const double worst = apply_strategy(Strategy::kMinSq, inst, 0, tol).weight;
    for (Strategy s : {Strategy::kGreedy, Strategy::kRandom, Strategy::kLocal2Swap}) {
      const double w = apply_strategy(s, inst, t, tol).weight;
      CHECK(w <= best);
      CHECK(w >= worst);
    }
    CHECK(brute_force_max_matching(inst).weight == best);
  }

  ExperimentOptions eo;
  eo.strategies = {Strategy::kMaxSq, Strategy::kRandom};
  eo.n_min = 3;
  eo.n_max = 5;
  eo.seeds = 10;
  const auto rows = run_experiment(eo);
  CHECK(rows.size() == 2 * 3 * 10);
  for (const auto& r : rows) {
    if (r.strategy == Strategy::kMaxSq) {
      CHECK(r.feasible);
      CHECK(r.pairwise_rate == 1.0);
    }
  }
  eo.jobs = 3;
  const std::string csv = experiment_csv(rows);
  CHECK(csv == experiment_csv(run_experiment(eo)));
  CHECK(csv.rfind("strategy,n,seed,weight,feasible,slack,relative_slack,pairwise_rate\n", 0) == 0);
  CHECK(count(csv, "\n") == rows.size() + 1);
}

TEST_CASE("property suites") {
  SuiteOptions opt;
  opt.cases = 30;
  const auto results = run_suites(opt);
  CHECK(results.size() == suite_names().size());
  for (const auto& r : results) {
    CHECK_MESSAGE(r.ok(), r.name);
    CHECK(r.passed + r.failed + r.skipped == 30);
  }
  CHECK(default_suite_cases("lemma1") == 10000);
  CHECK(default_suite_cases("lemma6") == 1000);

  opt.only = "lemma3";
  const auto one = run_suites(opt);
  REQUIRE(one.size() == 1);
  CHECK(one[0].metric("worst_discrepancy") <= 1e-9);
  opt.jobs = 2;
  CHECK(suites_report_json(one, opt) == suites_report_json(run_suites(opt), opt));

  opt.only = "lemma7";
  CHECK(validation_code([&] { run_suites(opt); }) == "bad_suite");
}

TEST_CASE("failure dumps") {
  SuiteResult r;
  r.name = "lemma4";
  r.failures.push_back({17, R"({"check":"same_side"})"});
  const auto dir = std::filesystem::temp_directory_path() / "diamatch_dump_test";
  std::filesystem::remove_all(dir);
  CHECK(dump_failures({r}, dir.string()) == 1);
  const auto doc = nlohmann::json::parse(read_text_file((dir / "lemma4-17.json").string()));
  CHECK(doc["suite"] == "lemma4");
  CHECK(doc["seed"] == 17);
  CHECK(doc["config"]["check"] == "same_side");
  std::filesystem::remove_all(dir);
}

TEST_CASE("drawings") {
  const Instance inst{{{0, 0}, {2, 0}, {1, 3}}, {{3, 0}, {-1, 0}, {1, -2}}};
  const Matching m = max_matching(inst);
  const std::string svg = render_matching_svg(inst, m, Point2{1, 0});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count(svg, "class=\"red\"") == 3);
  CHECK(count(svg, "class=\"blue\"") == 3);
  CHECK(count(svg, "class=\"segment\"") == 3);
  CHECK(count(svg, "class=\"disk\"") == 3);
  CHECK(count(svg, "class=\"witness\"") == 1);
  CHECK(count(render_matching_svg(inst, m, std::nullopt), "class=\"witness\"") == 0);
  CHECK(count(render_kgon_svg(square_counterexample(6, 2.0)), "class=\"kgon\"") == 4);
  CHECK(count(render_segment_svg(segment_counterexample()), "class=\"segment\"") == 4);
}
