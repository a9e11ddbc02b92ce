#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

enum class ErrorCode {
  ZeroVector,
  NotDifferentiable,
  UnsupportedKind,
  NotRegular,
  DegenerateIntersection,
  DuplicateVertex,
  NoConvergence,
  RadiusTooSmall,
  DimensionMismatch,
  ConstraintUnsatisfiable,
  TopologyMismatch,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wulff
