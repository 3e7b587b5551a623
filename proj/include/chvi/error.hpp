#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chvi {

enum class ErrorKind {
  OutOfRange,
  EmptyRegion,
  NonMonotone,
  BadInitialData,
  MaxItersExceeded,
  SingularJacobian,
  NotOnShell,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception type used throughout the library. `kind()` is stable and is
/// what callers (and the CLI failure record) should dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chvi
