#pragma once

// Slow, obviously-correct reference computations used only by tests.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "deltrace/bitstring.hpp"

namespace oracle {

// Law of the trace by enumerating all 2^|x| retention masks.
inline std::map<std::string, double> mask_law(const deltrace::BitString& x, double q) {
  const std::size_t n = x.size();
  std::map<std::string, double> law;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::string w;
    int kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) {
        w += static_cast<char>('0' + x[i]);
        ++kept;
      }
    }
    law[w] += std::pow(1.0 - q, kept) * std::pow(q, static_cast<double>(n) - kept);
  }
  return law;
}

// Embeddings of w into x counted over retention masks.
inline std::uint64_t mask_embedding_count(const deltrace::BitString& w, const deltrace::BitString& x) {
  std::uint64_t count = 0;
  const std::string target = w.to_string();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << x.size()); ++mask) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i)
      if ((mask >> i) & 1) s += static_cast<char>('0' + x[i]);
    count += s == target;
  }
  return count;
}

// Distinct subsequences (empty included) by the last-occurrence recurrence
// d[i] = 2 d[i-1] - d[last(x_i) - 1].
inline std::uint64_t distinct_subsequences(const deltrace::BitString& x) {
  std::vector<std::uint64_t> d(x.size() + 1);
  d[0] = 1;
  long last[2] = {-1, -1};
  for (std::size_t i = 1; i <= x.size(); ++i) {
    d[i] = 2 * d[i - 1];
    const int c = x[i - 1];
    if (last[c] >= 0) d[i] -= d[static_cast<std::size_t>(last[c]) - 1];
    last[c] = static_cast<long>(i);
  }
  return d[x.size()];
}

inline double tv(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  std::map<std::string, std::pair<double, double>> u;
  for (auto& [k, v] : a) u[k].first = v;
  for (auto& [k, v] : b) u[k].second = v;
  double s = 0.0;
  for (auto& [k, v] : u) s += std::fabs(v.first - v.second);
  return 0.5 * s;
}

inline double hellinger_sq(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  std::map<std::string, std::pair<double, double>> u;
  for (auto& [k, v] : a) u[k].first = v;
  for (auto& [k, v] : b) u[k].second = v;
  double s = 0.0;
  for (auto& [k, v] : u) {
    const double d = std::sqrt(v.first) - std::sqrt(v.second);
    s += d * d;
  }
  return s;
}

inline deltrace::BitString random_string(std::uint64_t bits, std::size_t len) {
  deltrace::BitString s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<int>((bits >> i) & 1));
  return s;
}

}  // namespace oracle
