#include "diamatch/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diamatch/io.hpp"

namespace diamatch {

namespace {

constexpr double kPanel = 480.0;
constexpr double kMargin = 24.0;
constexpr const char* kRed = "#d62728";
constexpr const char* kBlue = "#1f77b4";

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void add(Point2 p, double pad = 0.0) {
    min_x = std::min(min_x, p.x - pad);
    min_y = std::min(min_y, p.y - pad);
    max_x = std::max(max_x, p.x + pad);
    max_y = std::max(max_y, p.y + pad);
  }
};

/// World-to-panel map with y pointing up; `offset` shifts along x.
class View {
 public:
  View(const Box& box, double offset) : offset_(offset) {
    const double w = std::max(box.max_x - box.min_x, 1e-12);
    const double h = std::max(box.max_y - box.min_y, 1e-12);
    scale_ = (kPanel - 2.0 * kMargin) / std::max(w, h);
    min_x_ = box.min_x - 0.5 * (std::max(w, h) - w);
    max_y_ = box.max_y + 0.5 * (std::max(w, h) - h);
  }
  std::string x(double v) const { return format_double(round(offset_ + kMargin + (v - min_x_) * scale_)); }
  std::string y(double v) const { return format_double(round(kMargin + (max_y_ - v) * scale_)); }
  std::string len(double v) const { return format_double(round(v * scale_)); }

 private:
  static double round(double v) { return std::round(v * 1000.0) / 1000.0; }
  double offset_;
  double scale_ = 1.0;
  double min_x_ = 0.0;
  double max_y_ = 0.0;
};

std::string header(double width, double height) {
  const std::string w = format_double(width), h = format_double(height);
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"white\"/>\n";
}

std::string point_elem(const View& v, Point2 p, const char* color, const char* cls) {
  return "<circle class=\"" + std::string(cls) + "\" cx=\"" + v.x(p.x) + "\" cy=\"" + v.y(p.y) +
         "\" r=\"4\" fill=\"" + color + "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
}

std::string segment_elem(const View& v, Point2 a, Point2 b) {
  return "<line class=\"segment\" x1=\"" + v.x(a.x) + "\" y1=\"" + v.y(a.y) + "\" x2=\"" + v.x(b.x) +
         "\" y2=\"" + v.y(b.y) + "\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
}

std::string disk_elem(const View& v, const Disk& d) {
  return "<circle class=\"disk\" cx=\"" + v.x(d.center.x) + "\" cy=\"" + v.y(d.center.y) + "\" r=\"" +
         v.len(d.radius) + "\" fill=\"#7f7f7f\" fill-opacity=\"0.15\" stroke=\"#555555\" stroke-width=\"0.8\"/>\n";
}

std::string polygon_elem(const View& v, const RegularKGon& g) {
  std::string pts;
  for (Point2 p : g.vertices()) {
    if (!pts.empty()) pts += ' ';
    pts += v.x(p.x) + "," + v.y(p.y);
  }
  return "<polygon class=\"kgon\" points=\"" + pts +
         "\" fill=\"#2ca02c\" fill-opacity=\"0.15\" stroke=\"#2ca02c\" stroke-width=\"1\"/>\n";
}

std::string caption(double x, const std::string& text) {
  return "<text x=\"" + format_double(x) + "\" y=\"" + format_double(kPanel + 8.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\">" + text + "</text>\n";
}

}  // namespace

std::string render_matching_svg(const Instance& instance, const Matching& matching,
                                const std::optional<Point2>& witness) {
  Box box;
  std::vector<Disk> disks;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Disk d = diametral_disk(instance.reds[i], instance.blues[matching.pairs[i]]).disk;
    disks.push_back(d);
    box.add(d.center, d.radius);
  }
  const View v(box, 0.0);
  std::string out = header(kPanel, kPanel);
  for (const Disk& d : disks) out += disk_elem(v, d);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    out += segment_elem(v, instance.reds[i], instance.blues[matching.pairs[i]]);
  }
  for (Point2 p : instance.reds) out += point_elem(v, p, kRed, "red");
  for (Point2 p : instance.blues) out += point_elem(v, p, kBlue, "blue");
  if (witness) {
    out += "<circle class=\"witness\" cx=\"" + v.x(witness->x) + "\" cy=\"" + v.y(witness->y) +
           "\" r=\"6\" fill=\"#ffbf00\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_kgon_svg(const SquareReport& report) {
  Box box;
  for (const auto& m : report.matchings) {
    for (const auto& g : m.kgons) {
      for (Point2 p : g.vertices()) box.add(p);
    }
  }
  std::string out = header(2.0 * kPanel, kPanel + 16.0);
  for (int m = 0; m < 2; ++m) {
    const View v(box, m * kPanel);
    const KGonPairing& pairing = report.matchings[m];
    for (const auto& g : pairing.kgons) out += polygon_elem(v, g);
    for (int i = 0; i < 2; ++i) {
      out += segment_elem(v, report.instance.reds[i], report.instance.blues[pairing.pairs[i]]);
    }
    for (Point2 p : report.instance.reds) out += point_elem(v, p, kRed, "red");
    for (Point2 p : report.instance.blues) out += point_elem(v, p, kBlue, "blue");
    out += caption(m * kPanel + kMargin, "k=" + std::to_string(report.k) + (pairing.separation.disjoint ? " disjoint" : " overlapping") +
                                               ", gap " + format_double(pairing.separation.gap));
  }
  out += "</svg>\n";
  return out;
}

std::string render_segment_svg(const SegmentReport& report) {
  Box box;
  for (Point2 p : report.instance.reds) box.add(p);
  for (Point2 p : report.instance.blues) box.add(p);
  std::string out = header(2.0 * kPanel, kPanel + 16.0);
  for (int m = 0; m < 2; ++m) {
    const View v(box, m * kPanel);
    const SegmentPairing& pairing = report.matchings[m];
    for (int i = 0; i < 2; ++i) {
      out += segment_elem(v, report.instance.reds[i], report.instance.blues[pairing.pairs[i]]);
    }
    for (Point2 p : report.instance.reds) out += point_elem(v, p, kRed, "red");
    for (Point2 p : report.instance.blues) out += point_elem(v, p, kBlue, "blue");
    out += caption(m * kPanel + kMargin, pairing.segments_cross ? "segments cross" : "segments disjoint");
  }
  out += "</svg>\n";
  return out;
}

}  // namespace diamatch
