#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diamatch/intersection.hpp"
#include "diamatch/kgon.hpp"
#include "diamatch/matching.hpp"

namespace diamatch {

/// Points (red/blue fills), matching segments, translucent diametral disks
/// and the witness point. One element per item, SVG 1.1.
std::string render_matching_svg(const Instance& instance, const Matching& matching,
                                const std::optional<Point2>& witness);

/// Both perfect matchings of a 2 + 2 instance side by side, each with its
/// pair of k-gons.
std::string render_kgon_svg(const SquareReport& report);

/// Both matchings of the segment construction side by side.
std::string render_segment_svg(const SegmentReport& report);

}  // namespace diamatch
