#pragma once

#include <stdexcept>
#include <string>

namespace magcurv {

enum class ErrorKind {
  InvalidArgument,
  Degenerate,
  Domain,
  NotConverged,
  Parse,
  Io,
  Internal,
};

// All library failures surface as this exception; the C API maps `kind` to
// a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::InvalidArgument, message);
}

}  // namespace magcurv
