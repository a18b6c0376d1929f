#pragma once

#include <stdexcept>
#include <string>

namespace rbfpu {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  UnsupportedDimension,
  DuplicateNode,
  DegenerateCover,
  NotSpd,
  InsufficientData,
  UnfittableSubdomain,
  UncoveredPoint,
  OutOfDomain,
  DegenerateDomain,
  InvalidSplit,
  Parse,
  Io,
  SchemaVersion,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a code so callers (the CLI in
/// particular) can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rbfpu
