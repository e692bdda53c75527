#include "induced/error.hpp"

namespace induced {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::KernelDimensionMismatch: return "KernelDimensionMismatch";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::SingularOverlap: return "SingularOverlap";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::IncompatiblePartition: return "IncompatiblePartition";
    case ErrorKind::CoefficientMismatch: return "CoefficientMismatch";
    case ErrorKind::AmbiguousCrossing: return "AmbiguousCrossing";
    case ErrorKind::ProfileDomainError: return "ProfileDomainError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::KernelDimensionMismatch:
    case ErrorKind::DegenerateFrame:
    case ErrorKind::SingularOverlap:
    case ErrorKind::SingularOperator:
    case ErrorKind::AmbiguousCrossing:
    case ErrorKind::CoefficientMismatch:
    case ErrorKind::ProfileDomainError:
      return true;
    default:
      return false;
  }
}

}  // namespace induced
