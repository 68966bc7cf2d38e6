#include "diamatch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "diamatch/error.hpp"

namespace diamatch {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw ValidationError("parse_error", where + ": " + what);
}

double parse_number_text(std::string_view text, const std::string& where) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    parse_fail(where, "expected a number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) parse_fail(where, "coordinate is not finite");
  return v;
}

double coordinate(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number_text(v.get<std::string>(), where);
  parse_fail(where, "expected a number or decimal string");
}

std::vector<Point2> point_list(const json& doc, const char* key) {
  if (!doc.contains(key)) parse_fail(key, "missing field");
  const json& arr = doc.at(key);
  if (!arr.is_array()) parse_fail(key, "expected an array of [x, y] pairs");
  std::vector<Point2> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    const json& pt = arr[i];
    if (!pt.is_array() || pt.size() != 2) parse_fail(where, "expected [x, y]");
    out.push_back({coordinate(pt[0], where + "[0]"), coordinate(pt[1], where + "[1]")});
  }
  return out;
}

json point_array(const std::vector<Point2>& pts) {
  json arr = json::array();
  for (Point2 p : pts) arr.push_back(json::array({p.x, p.y}));
  return arr;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

InstanceFile parse_instance_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail("json", e.what());
  }
  if (!doc.is_object()) parse_fail("json", "top level must be an object");
  if (!doc.contains("version")) parse_fail("version", "missing field");
  if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kInstanceFormatVersion) {
    parse_fail("version", "unsupported format version " + doc["version"].dump());
  }
  InstanceFile file;
  file.instance.reds = point_list(doc, "reds");
  file.instance.blues = point_list(doc, "blues");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) parse_fail("name", "expected a string");
    file.name = doc["name"].get<std::string>();
  }
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_unsigned()) parse_fail("seed", "expected a nonnegative integer");
    file.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("allow_duplicates")) {
    if (!doc["allow_duplicates"].is_boolean()) parse_fail("allow_duplicates", "expected true or false");
    file.instance.allow_duplicates = doc["allow_duplicates"].get<bool>();
  }
  file.instance.validate();
  return file;
}

InstanceFile parse_instance_csv(const std::string& text) {
  InstanceFile file;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 3) parse_fail(where, "expected 3 fields (color,x,y), got " + std::to_string(fields.size()));
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string color = trim(fields[0]);
    if (!header_seen) {
      header_seen = true;
      if (color == "color") {
        if (trim(fields[1]) != "x" || trim(fields[2]) != "y") parse_fail(where, "header must be color,x,y");
        continue;
      }
    }
    const Point2 p{parse_number_text(fields[1], where + ", field x"),
                   parse_number_text(fields[2], where + ", field y")};
    if (color == "red") {
      file.instance.reds.push_back(p);
    } else if (color == "blue") {
      file.instance.blues.push_back(p);
    } else {
      parse_fail(where + ", field color", "expected 'red' or 'blue', got '" + color + "'");
    }
  }
  file.instance.validate();
  return file;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("io_error", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("io_error", "cannot write " + path);
  out << text;
  if (!out) throw ValidationError("io_error", "failed writing " + path);
}

InstanceFile read_instance_file(const std::string& path) {
  const std::string text = read_text_file(path);
  const bool csv_ext = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (csv_ext || (first != std::string::npos && text[first] != '{')) return parse_instance_csv(text);
  return parse_instance_json(text);
}

std::string write_instance_json(const InstanceFile& file) {
  nlohmann::ordered_json doc;
  doc["version"] = kInstanceFormatVersion;
  if (!file.name.empty()) doc["name"] = file.name;
  if (file.seed) doc["seed"] = *file.seed;
  doc["reds"] = point_array(file.instance.reds);
  doc["blues"] = point_array(file.instance.blues);
  return doc.dump(2) + "\n";
}

std::string write_instance_csv(const InstanceFile& file) {
  std::string out = "color,x,y\n";
  for (Point2 p : file.instance.reds) out += "red," + format_double(p.x) + "," + format_double(p.y) + "\n";
  for (Point2 p : file.instance.blues) out += "blue," + format_double(p.x) + "," + format_double(p.y) + "\n";
  return out;
}

}  // namespace diamatch
