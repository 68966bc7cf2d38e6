#pragma once

#include <stdexcept>
#include <string>

namespace diamatch {

/// Degenerate geometric input: coincident points, zero-length directions,
/// infinite intersections. Never a silent NaN.
class GeometryError : public std::domain_error {
 public:
  enum class Kind {
    kDegenerateDirection,
    kPole,
    kIdenticalCircles,
    kDegenerateFrame,
    kCaseResolution,
  };

  GeometryError(Kind kind, const std::string& what)
      : std::domain_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Input rejected by a precondition check. `code()` names the violated
/// constraint (e.g. "size_mismatch", "c2_encloses_r").
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string code, const std::string& what)
      : std::invalid_argument(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace diamatch
