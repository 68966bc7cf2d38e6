// diamatch: command-line front end.
//
// Exit status: 0 all checks pass, 1 a checked property failed, 2 usage or
// input error.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "diamatch/campaign.hpp"
#include "diamatch/error.hpp"
#include "diamatch/io.hpp"
#include "diamatch/kgon.hpp"
#include "diamatch/random.hpp"
#include "diamatch/report.hpp"
#include "diamatch/svg.hpp"

namespace {

using namespace diamatch;

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kUsage = 2;

/// DIAMATCH_TOL, then --tol.
Tolerance resolve_tolerance(const std::optional<double>& flag) {
  Tolerance tol;
  if (const char* env = std::getenv("DIAMATCH_TOL")) {
    try {
      std::size_t used = 0;
      tol.rel = std::stod(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ValidationError("bad_tol", std::string("DIAMATCH_TOL is not a number: ") + env);
    }
  }
  if (flag) tol.rel = *flag;
  if (!tol.valid() || !std::isfinite(tol.rel)) {
    throw ValidationError("bad_tol", "tolerance must be a positive finite number");
  }
  return tol;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct CommonFlags {
  std::optional<double> tol;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--tol", f.tol, "Relative tolerance (default 1e-9, or DIAMATCH_TOL)");
  cmd->add_option("--jobs,-j", f.jobs, "Worker threads; output does not depend on it")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum squared-distance matchings and their diametral disks"};
  app.require_subcommand(1);

  // match
  CommonFlags match_flags;
  std::string match_input, match_svg, match_json;
  auto* match = app.add_subcommand("match", "Max matching, diametral disks and a common point for one instance");
  match->add_option("file", match_input, "Instance file (.json or .csv)")->required();
  match->add_option("--svg", match_svg, "Write an SVG drawing");
  match->add_option("--json", match_json, "Write the report here instead of stdout");
  add_common(match, match_flags);

  // verify
  CommonFlags verify_flags;
  VerifyOptions vopt;
  std::string verify_dist = "uniform", verify_out;
  std::optional<std::uint64_t> replay;
  bool per_instance = false, no_audit = false;
  auto* verify = app.add_subcommand("verify", "Seeded campaign checking that max-matching disks share a point");
  verify->add_option("--n-min", vopt.n_min, "Smallest instance size")->check(CLI::PositiveNumber);
  verify->add_option("--n-max", vopt.n_max, "Largest instance size")->check(CLI::PositiveNumber);
  verify->add_option("--seeds", vopt.seeds, "Instances per size")->check(CLI::PositiveNumber);
  verify->add_option("--seed-start", vopt.seed_start, "First seed");
  verify->add_option("--dist", verify_dist, "uniform|clustered|collinear|line");
  verify->add_option("--replay", replay, "Run a single seed and report every instance");
  verify->add_flag("--per-instance", per_instance, "Include every instance in the report");
  verify->add_flag("--no-audit", no_audit, "Skip subset, triples and brute-force audits");
  verify->add_option("--out", verify_out, "Report path (default stdout)");
  add_common(verify, verify_flags);

  // lemmas
  CommonFlags lemma_flags;
  std::optional<std::string> only;
  std::optional<std::uint64_t> lemma_cases;
  std::uint64_t lemma_seed_start = 0;
  std::string dump_dir, lemma_out;
  auto* lemmas = app.add_subcommand("lemmas", "Property suites for each proof step");
  lemmas->add_option("--only", only, "Run one suite: lemma1..lemma6 or helly");
  lemmas->add_option("--seeds", lemma_cases, "Cases per suite (overrides the defaults)")->check(CLI::PositiveNumber);
  lemmas->add_option("--seed-start", lemma_seed_start, "First seed");
  lemmas->add_option("--dump-failures", dump_dir, "Write failing configurations here");
  lemmas->add_option("--out", lemma_out, "Report path (default stdout)");
  add_common(lemmas, lemma_flags);

  // counterexample
  CommonFlags cx_flags;
  std::string kind, cx_svg, cx_json;
  int k = 6;
  double side = 2.0, jitter = 0.0;
  std::uint64_t cx_seed = 0;
  auto* cx = app.add_subcommand("counterexample", "Square k-gon construction or the segment instance");
  cx->add_option("--kind", kind, "kgon|segment")->required()->check(CLI::IsMember({"kgon", "segment"}));
  cx->add_option("--k", k, "Polygon size, 4q+2");
  cx->add_option("--side", side, "Square side length");
  cx->add_option("--jitter", jitter, "Perturb every coordinate by up to this much");
  cx->add_option("--seed", cx_seed, "Seed for --jitter");
  cx->add_option("--svg", cx_svg, "Write an SVG drawing");
  cx->add_option("--json", cx_json, "Write the report here instead of stdout");
  add_common(cx, cx_flags);

  // experiment
  CommonFlags exp_flags;
  ExperimentOptions eopt;
  std::string strategies = "max-sq", exp_dist = "uniform", exp_out;
  auto* experiment = app.add_subcommand("experiment", "Compare matching strategies; CSV output");
  experiment->add_option("--strategies", strategies, "Comma list of max-sq,min-sq,greedy,random,local2swap");
  experiment->add_option("--n-min", eopt.n_min, "Smallest instance size")->check(CLI::PositiveNumber);
  experiment->add_option("--n-max", eopt.n_max, "Largest instance size")->check(CLI::PositiveNumber);
  experiment->add_option("--seeds", eopt.seeds, "Instances per size")->check(CLI::PositiveNumber);
  experiment->add_option("--seed-start", eopt.seed_start, "First seed");
  experiment->add_option("--dist", exp_dist, "uniform|clustered|collinear|line");
  experiment->add_option("--out", exp_out, "CSV path (default stdout)");
  add_common(experiment, exp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*match) {
      const Tolerance tol = resolve_tolerance(match_flags.tol);
      const MatchResult r = run_match(read_instance_file(match_input), tol);
      emit(match_report_json(r), match_json);
      if (!match_svg.empty()) {
        write_text_file(match_svg, render_matching_svg(r.file.instance, r.matching, r.witness.witness));
      }
      return r.witness.feasible ? kOk : kPropertyFailure;
    }

    if (*verify) {
      vopt.tol = resolve_tolerance(verify_flags.tol);
      vopt.jobs = verify_flags.jobs;
      vopt.distribution = parse_distribution(verify_dist);
      vopt.audit = !no_audit;
      if (replay) {
        vopt.seed_start = *replay;
        vopt.seeds = 1;
        per_instance = true;
      }
      if (vopt.n_max < vopt.n_min) throw ValidationError("bad_range", "--n-max must be >= --n-min");
      const VerifyReport rep = run_verify(vopt);
      emit(verify_report_json(rep, per_instance), verify_out);
      for (const auto& o : rep.outcomes) {
        if (o.passed()) continue;
        std::cerr << "FAIL n=" << o.n << " seed=" << o.seed << " replay: verify --n-min " << o.n
                  << " --n-max " << o.n << " --dist " << verify_dist << " --replay " << o.seed << "\n";
      }
      return rep.failed == 0 ? kOk : kPropertyFailure;
    }

    if (*lemmas) {
      SuiteOptions sopt;
      sopt.only = only;
      sopt.cases = lemma_cases;
      sopt.seed_start = lemma_seed_start;
      sopt.tol = resolve_tolerance(lemma_flags.tol);
      sopt.jobs = lemma_flags.jobs;
      const auto results = run_suites(sopt);
      emit(suites_report_json(results, sopt), lemma_out);
      if (!dump_dir.empty()) dump_failures(results, dump_dir);
      bool ok = true;
      for (const auto& r : results) {
        std::cerr << r.name << ": " << r.passed << " passed, " << r.failed << " failed, " << r.skipped
                  << " skipped\n";
        ok = ok && r.ok();
      }
      return ok ? kOk : kPropertyFailure;
    }

    if (*cx) {
      const Tolerance tol = resolve_tolerance(cx_flags.tol);
      if (kind == "segment") {
        const SegmentReport rep = segment_counterexample(jitter, cx_seed);
        emit(segment_report_json(rep), cx_json);
        if (!cx_svg.empty()) write_text_file(cx_svg, render_segment_svg(rep));
        return rep.some_non_crossing ? kOk : kPropertyFailure;
      }
      SquareReport rep = square_counterexample(k, side, tol);
      if (jitter != 0.0) {
        Instance inst = rep.instance;
        Rng rng(cx_seed);
        for (auto* set : {&inst.reds, &inst.blues}) {
          for (Point2& p : *set) {
            p.x += rng.uniform(-jitter, jitter);
            p.y += rng.uniform(-jitter, jitter);
          }
        }
        rep = kgon_pairs_for_instance(inst, k, tol);
        rep.side = side;
      }
      emit(square_report_json(rep, tol), cx_json);
      if (!cx_svg.empty()) write_text_file(cx_svg, render_kgon_svg(rep));
      bool ok = rep.all_disjoint;
      for (const auto& m : rep.matchings) ok = ok && m.separation.gap > square_gap_margin(rep, tol);
      return ok ? kOk : kPropertyFailure;
    }

    if (*experiment) {
      eopt.tol = resolve_tolerance(exp_flags.tol);
      eopt.jobs = exp_flags.jobs;
      eopt.distribution = parse_distribution(exp_dist);
      eopt.strategies.clear();
      for (const auto& s : split_list(strategies)) eopt.strategies.push_back(parse_strategy(s));
      emit(experiment_csv(run_experiment(eopt)), exp_out);
      return kOk;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return kUsage;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
