#include "diamatch/report.hpp"

#include <json.hpp>

namespace diamatch {

namespace {

using ojson = nlohmann::ordered_json;

ojson pt(Point2 p) { return ojson::array({p.x, p.y}); }

ojson points(const std::vector<Point2>& pts) {
  ojson arr = ojson::array();
  for (Point2 p : pts) arr.push_back(pt(p));
  return arr;
}

ojson kgon_json(const RegularKGon& g) {
  return {{"k", g.k},
          {"center", pt(g.center)},
          {"circumradius", g.circumradius},
          {"orientation", g.orientation},
          {"area", g.area()},
          {"vertices", points(g.vertices())}};
}

}  // namespace

MatchResult run_match(const InstanceFile& file, const Tolerance& tol) {
  MatchResult r;
  r.file = file;
  r.tol = tol;
  r.matching = max_matching(file.instance, tol);
  r.family = DiskFamily::from_matching(file.instance, r.matching);
  r.witness = common_intersection_witness(r.family, tol);
  return r;
}

std::string match_report_json(const MatchResult& r) {
  ojson doc;
  doc["schema"] = "diamatch.match/1";
  if (!r.file.name.empty()) doc["name"] = r.file.name;
  if (r.file.seed) doc["seed"] = *r.file.seed;
  doc["n"] = r.file.instance.size();
  doc["tol"] = r.tol.rel;
  doc["matching"] = {{"pairs", r.matching.pairs}, {"weight", r.matching.weight}};
  ojson disks = ojson::array();
  for (std::size_t i = 0; i < r.family.disks.size(); ++i) {
    disks.push_back({{"red", r.family.labels[i]},
                     {"blue", r.matching.pairs[r.family.labels[i]]},
                     {"center", pt(r.family.disks[i].center)},
                     {"radius", r.family.disks[i].radius}});
  }
  doc["disks"] = disks;
  doc["witness"] = {{"feasible", r.witness.feasible},
                    {"boundary", r.witness.boundary},
                    {"point", pt(r.witness.witness)},
                    {"slack", r.witness.slack},
                    {"band", r.witness.band},
                    {"certificate", r.witness.certificate}};
  return doc.dump(2) + "\n";
}

double square_gap_margin(const SquareReport& report, const Tolerance& tol) {
  return 10.0 * tol.band(report.side > 0.0 ? report.side : report.instance.diameter());
}

std::string square_report_json(const SquareReport& report, const Tolerance& tol) {
  ojson doc;
  doc["schema"] = "diamatch.counterexample/1";
  doc["kind"] = "kgon";
  doc["k"] = report.k;
  doc["side"] = report.side;
  doc["reds"] = points(report.instance.reds);
  doc["blues"] = points(report.instance.blues);
  const double margin = square_gap_margin(report, tol);
  bool margin_ok = true;
  ojson arr = ojson::array();
  for (const auto& m : report.matchings) {
    margin_ok = margin_ok && m.separation.gap > margin;
    arr.push_back({{"pairs", m.pairs},
                   {"kgons", {kgon_json(m.kgons[0]), kgon_json(m.kgons[1])}},
                   {"disjoint", m.separation.disjoint},
                   {"gap", m.separation.gap},
                   {"symmetric_confirmed", m.symmetric_confirmed}});
  }
  doc["matchings"] = arr;
  doc["gap_margin"] = margin;
  doc["all_disjoint"] = report.all_disjoint;
  doc["margin_ok"] = margin_ok;
  return doc.dump(2) + "\n";
}

std::string segment_report_json(const SegmentReport& report) {
  ojson doc;
  doc["schema"] = "diamatch.counterexample/1";
  doc["kind"] = "segment";
  doc["reds"] = points(report.instance.reds);
  doc["blues"] = points(report.instance.blues);
  doc["no_three_collinear"] = report.no_three_collinear;
  ojson arr = ojson::array();
  for (const auto& m : report.matchings) {
    arr.push_back({{"pairs", m.pairs}, {"weight", m.weight}, {"segments_cross", m.segments_cross}});
  }
  doc["matchings"] = arr;
  doc["some_non_crossing"] = report.some_non_crossing;
  doc["both_non_crossing"] = report.both_non_crossing;
  return doc.dump(2) + "\n";
}

}  // namespace diamatch
