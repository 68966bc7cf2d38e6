#pragma once

#include <string>

#include "diamatch/intersection.hpp"
#include "diamatch/io.hpp"
#include "diamatch/kgon.hpp"

namespace diamatch {

/// End-to-end result for one instance file.
struct MatchResult {
  InstanceFile file;
  Matching matching;
  DiskFamily family;
  WitnessReport witness;
  Tolerance tol;
};

/// Max matching, diametral disks and common-intersection witness.
MatchResult run_match(const InstanceFile& file, const Tolerance& tol);

std::string match_report_json(const MatchResult& result);
std::string square_report_json(const SquareReport& report, const Tolerance& tol);
std::string segment_report_json(const SegmentReport& report);

/// The separation margin required of the square construction: 10 tolerance
/// bands at the scale of the side.
double square_gap_margin(const SquareReport& report, const Tolerance& tol);

}  // namespace diamatch
