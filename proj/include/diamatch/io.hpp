#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "diamatch/matching.hpp"

namespace diamatch {

/// Versioned instance file. JSON:
///   {"version": 1, "name": "...", "seed": 7, "reds": [[x, y], ...], "blues": [[x, y], ...]}
/// Coordinates may be numbers or decimal strings. CSV: header `color,x,y`,
/// one row per point with color `red` or `blue`.
struct InstanceFile {
  Instance instance;
  std::string name;
  std::optional<std::uint64_t> seed;
};

inline constexpr int kInstanceFormatVersion = 1;

/// Parse failures throw ValidationError("parse_error") naming the line or
/// field; the parsed instance is validated before returning.
InstanceFile parse_instance_json(const std::string& text);
InstanceFile parse_instance_csv(const std::string& text);

/// Dispatches on the extension (.csv) or on the leading character.
InstanceFile read_instance_file(const std::string& path);

/// Shortest decimal strings that round-trip exactly.
std::string write_instance_json(const InstanceFile& file);
std::string write_instance_csv(const InstanceFile& file);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace diamatch
