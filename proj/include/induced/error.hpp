#pragma once

#include <stdexcept>
#include <string>

namespace induced {

enum class ErrorKind {
  DimensionMismatch,
  NotOrthonormal,
  KernelDimensionMismatch,
  DegenerateFrame,
  SingularOverlap,
  SingularOperator,
  IncompatiblePartition,
  CoefficientMismatch,
  AmbiguousCrossing,
  ProfileDomainError,
  InvalidInput,
  Io,
};

const char* to_string(ErrorKind kind);

/// Numerical failures (singular overlaps, kernel mismatches, degenerate
/// frames) are distinguished from bad input and I/O so the CLI can map them
/// onto exit codes.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace induced
