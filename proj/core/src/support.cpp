#include <thread>

#include "deltrace/error.hpp"
#include "deltrace/parallel.hpp"

namespace deltrace {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::SupportTooLarge: return "support-too-large";
    case ErrorKind::DegenerateWindow: return "degenerate-window";
    case ErrorKind::PreconditionViolated: return "precondition-violated";
    case ErrorKind::InvalidTrace: return "invalid-trace";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

unsigned default_workers() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace deltrace
