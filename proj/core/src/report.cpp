#include "deltrace/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "deltrace/error.hpp"
#include "deltrace/rng.hpp"

namespace deltrace {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string config_hash(std::string_view canonical_config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string provenance_comment(std::string_view canonical_config) {
  return std::string("# deltrace ") + kVersion + " config=" + config_hash(canonical_config) + " prng=" + kPrngName;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

template <class T>
T parse_number(const std::string& text) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    if constexpr (std::is_floating_point_v<T>) {
      if (text == "nan") return NAN;
      if (text == "inf") return INFINITY;
      if (text == "-inf") return -INFINITY;
    }
    fail(ErrorKind::Parse, "malformed number in report: '" + text + "'");
  }
  return value;
}

}  // namespace

std::string rows_to_csv(const std::vector<ReportRow>& rows, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    out += comment;
    out += '\n';
  }
  out += kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.experiment) + ',' + std::to_string(r.n) + ',' + format_double(r.q) + ',' +
           csv_field(r.metric) + ',' + format_double(r.estimate) + ',' + format_double(r.stderr_) + ',' +
           std::to_string(r.samples) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.wall_ms) + '\n';
  }
  return out;
}

std::string rows_to_json(const std::vector<ReportRow>& rows, std::string_view comment) {
  // Doubles are inserted as raw shortest-form text so that rendering matches
  // the CSV writer exactly.
  std::string out = "{\"meta\":" + nlohmann::json(std::string(comment)).dump() + ",\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("null"); };
    if (i) out += ',';
    out += "{\"experiment\":" + nlohmann::json(r.experiment).dump() + ",\"n\":" + std::to_string(r.n) +
           ",\"q\":" + num(r.q) + ",\"metric\":" + nlohmann::json(r.metric).dump() + ",\"estimate\":" +
           num(r.estimate) + ",\"stderr\":" + num(r.stderr_) + ",\"samples\":" + std::to_string(r.samples) +
           ",\"seed\":" + std::to_string(r.seed) + ",\"wall_ms\":" + std::to_string(r.wall_ms) + "}";
  }
  return out + "]}\n";
}

std::vector<ReportRow> rows_from_csv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      require(line == kCsvHeader, ErrorKind::Parse, "unexpected report header: " + line);
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    require(f.size() == 9, ErrorKind::Parse, "report rows need 9 fields");
    ReportRow r;
    r.experiment = f[0];
    r.n = parse_number<std::int64_t>(f[1]);
    r.q = parse_number<double>(f[2]);
    r.metric = f[3];
    r.estimate = parse_number<double>(f[4]);
    r.stderr_ = parse_number<double>(f[5]);
    r.samples = parse_number<std::int64_t>(f[6]);
    r.seed = parse_number<std::uint64_t>(f[7]);
    r.wall_ms = parse_number<std::int64_t>(f[8]);
    rows.push_back(std::move(r));
  }
  require(header_seen, ErrorKind::Parse, "report has no header row");
  return rows;
}

}  // namespace deltrace
