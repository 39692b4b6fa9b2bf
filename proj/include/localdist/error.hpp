#pragma once

#include <stdexcept>
#include <string>

namespace localdist {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  Validation,
  CapExceeded,
  Parse,
};

// All library failures are reported through this exception; the C API maps
// `kind()` onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace localdist
