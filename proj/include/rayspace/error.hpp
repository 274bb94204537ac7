#pragma once

#include <stdexcept>
#include <string>

namespace rayspace {

enum class ErrorCode {
  identically_zero,
  singular_fit,
  degenerate_segment,
  degenerate_triangle,
  degenerate_angle,
  non_unit_quaternion,
  bad_index,
  no_path,
  parse_error,
  validation_error,
  invalid_argument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::identically_zero: return "IdenticallyZero";
    case ErrorCode::singular_fit: return "SingularFit";
    case ErrorCode::degenerate_segment: return "DegenerateSegment";
    case ErrorCode::degenerate_triangle: return "DegenerateTriangle";
    case ErrorCode::degenerate_angle: return "DegenerateAngle";
    case ErrorCode::non_unit_quaternion: return "NonUnitQuaternion";
    case ErrorCode::bad_index: return "BadIndex";
    case ErrorCode::no_path: return "NoPath";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() says which.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rayspace
