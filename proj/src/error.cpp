#include "chvi/error.hpp"

namespace chvi {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::BadInitialData: return "BadInitialData";
    case ErrorKind::MaxItersExceeded: return "MaxItersExceeded";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NotOnShell: return "NotOnShell";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace chvi
