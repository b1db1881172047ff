#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace deltrace {

enum class ErrorKind {
  InvalidParameter,
  SupportTooLarge,
  DegenerateWindow,
  PreconditionViolated,
  InvalidTrace,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above so that
// callers (notably the CLI) can map it to a machine-readable code.
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

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace deltrace
