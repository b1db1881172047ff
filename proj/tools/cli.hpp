#pragma once

#include <iosfwd>

namespace deltrace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parses argv, runs one experiment and writes its report. Reports go to
// --out (relative paths resolve against $DELTRACE_OUTPUT_DIR when set) or to
// `out` when --out is absent. Library failures print a JSON error object to
// `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deltrace::cli
