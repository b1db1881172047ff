#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace deltrace {

inline constexpr const char* kVersion = "0.1.0";

// One output record. Column order is part of the file format.
struct ReportRow {
  std::string experiment;
  std::int64_t n = 0;
  double q = 0.0;
  std::string metric;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::int64_t wall_ms = 0;
};

inline constexpr const char* kCsvHeader = "experiment,n,q,metric,estimate,stderr,samples,seed,wall_ms";

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

// 64-bit FNV-1a of the canonical configuration text, as 16 hex digits.
std::string config_hash(std::string_view canonical_config);

// "# deltrace <version> config=<hash> prng=<name>"
std::string provenance_comment(std::string_view canonical_config);

std::string rows_to_csv(const std::vector<ReportRow>& rows, std::string_view comment);

// {"meta": "<comment>", "rows": [ {...}, ... ]}
std::string rows_to_json(const std::vector<ReportRow>& rows, std::string_view comment);

// Parses a CSV written by rows_to_csv (comment lines skipped).
std::vector<ReportRow> rows_from_csv(std::string_view text);

}  // namespace deltrace
