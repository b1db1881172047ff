#include "deltrace/exact_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "deltrace/error.hpp"
#include "deltrace/numeric.hpp"

namespace deltrace {

EmbeddingCount embedding_count(const BitString& w, const BitString& x) {
  const std::size_t m = w.size();
  if (m > x.size()) return 0;
  std::vector<EmbeddingCount> dp(m + 1, 0);
  dp[0] = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t hi = std::min(m, i + 1);
    for (std::size_t j = hi; j >= 1; --j) {
      if (w[j - 1] == x[i]) dp[j] += dp[j - 1];
    }
  }
  return dp[m];
}

double ScaledCount::log() const noexcept {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

double count_ratio(const ScaledCount& numerator, const ScaledCount& denominator) noexcept {
  if (denominator.is_zero()) {
    return numerator.is_zero() ? std::numeric_limits<double>::quiet_NaN()
                               : std::numeric_limits<double>::infinity();
  }
  if (numerator.is_zero()) return 0.0;
  const long shift = numerator.exponent - denominator.exponent;
  if (shift > 4000) return std::numeric_limits<double>::infinity();
  if (shift < -4000) return 0.0;
  return std::ldexp(numerator.mantissa / denominator.mantissa, static_cast<int>(shift));
}

EmbeddingCounter::EmbeddingCounter(BitString x) : x_(std::move(x)) {}

ScaledCount EmbeddingCounter::count(const BitString& w) {
  const std::size_t m = w.size();
  const std::size_t n = x_.size();
  if (m > n) return {};
  dp_.assign(m + 1, 0.0);
  dp_[0] = 1.0;
  // dp_[j+1] += dp_[j] for every j with w[j] == x_i, visited right to left.
  zeros_.clear();
  ones_.clear();
  for (std::size_t j = m; j-- > 0;) (w[j] ? ones_ : zeros_).push_back(static_cast<std::uint32_t>(j));

  constexpr double kRescaleAbove = 0x1.0p900;
  constexpr int kRescaleShift = -900;
  long exponent = 0;
  double* dp = dp_.data();
  for (std::size_t i = 0; i < n; ++i) {
    // Only states j with j <= i and m - j <= n - i can still reach a full match.
    const std::size_t lo = m > n - i ? m - (n - i) : 0;
    const std::size_t hi = std::min(i, m - 1 + (m == 0));
    const auto& positions = x_[i] ? ones_ : zeros_;
    for (std::uint32_t j : positions) {
      if (j > hi) continue;
      if (j < lo) break;
      dp[j + 1] += dp[j];
    }
    if ((i & 255) == 255) {
      const double peak = *std::max_element(dp_.begin(), dp_.end());
      if (peak > kRescaleAbove) {
        for (auto& v : dp_) v = std::ldexp(v, kRescaleShift);
        exponent -= kRescaleShift;
      }
    }
  }
  ScaledCount out{dp[m], dp[m] == 0.0 ? 0 : exponent};
  if (out.mantissa != 0.0) {
    int e = 0;
    out.mantissa = std::frexp(out.mantissa, &e);
    out.exponent += e;
  }
  return out;
}

ScaledCount embedding_count_scaled(const BitString& w, const BitString& x) {
  EmbeddingCounter counter(x);
  return counter.count(w);
}

namespace {

// log(p^k q^(L-k)).
double log_weight(std::size_t length, std::size_t kept, const ChannelParams& params) {
  return static_cast<double>(kept) * std::log(params.p()) +
         static_cast<double>(length - kept) * std::log(params.q());
}

template <class Count>
double count_times_weight(const Count& count, double log_w) {
  if (count == 0) return 0.0;
  if constexpr (std::is_same_v<Count, EmbeddingCount>) {
    // Exponent-aware conversion so that counts beyond double range survive.
    const std::size_t bits = boost::multiprecision::msb(count) + 1;
    const std::size_t drop = bits > 64 ? bits - 64 : 0;
    const EmbeddingCount top = count >> drop;
    const double log_count = std::log(top.template convert_to<double>()) +
                             static_cast<double>(drop) * std::log(2.0);
    return std::exp(log_count + log_w);
  } else {
    const double c = static_cast<double>(count);
    if (log_w > -700.0) return c * std::exp(log_w);
    return std::exp(std::log(c) + log_w);
  }
}

}  // namespace

double trace_probability(const BitString& x, const BitString& w, const ChannelParams& params) {
  if (w.size() > x.size()) return 0.0;
  return count_times_weight(embedding_count(w, x), log_weight(x.size(), w.size(), params));
}

std::uint64_t distinct_subsequence_count(const BitString& x, std::uint64_t saturate_at) {
  // State i = greedy match ended just before position i. next(i, b) is one
  // past the first b at or after i. Each distinct subsequence is one path.
  const std::size_t n = x.size();
  std::vector<std::array<std::size_t, 2>> next(n + 1);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  next[n] = {kNone, kNone};
  for (std::size_t i = n; i-- > 0;) {
    next[i] = next[i + 1];
    next[i][x[i]] = i + 1;
  }
  std::vector<std::uint64_t> paths(n + 1, 0);
  for (std::size_t i = n + 1; i-- > 0;) {
    std::uint64_t total = 1;
    for (int b = 0; b < 2; ++b) {
      if (next[i][b] == kNone) continue;
      const std::uint64_t add = paths[next[i][b]];
      total = (total > saturate_at - std::min(add, saturate_at)) ? saturate_at : total + add;
    }
    paths[i] = std::min(total, saturate_at);
  }
  return paths[0];
}

namespace {

// Depth-first traversal of every distinct subsequence of x or of y (y may be
// absent). For each node w the vectors hold, per end position j, the number of
// embeddings of w ending exactly at j. Visitor receives (w, count_x, count_y).
template <class Count, class Visit>
class PairTraversal {
 public:
  PairTraversal(const BitString& x, const BitString* y, std::size_t cap, Visit& visit)
      : x_(x), y_(y), cap_(cap), visit_(visit) {}

  void run() {
    BitString w;
    levels_.resize(std::max(x_.size(), y_ ? y_->size() : 0) + 2);
    visit_node(w, Count(1), Count(y_ ? 1 : 0));
    extend_root(w);
  }

 private:
  struct Level {
    std::vector<Count> cx;
    std::vector<Count> cy;
  };

  void visit_node(const BitString& w, const Count& nx, const Count& ny) {
    if (++visited_ > cap_) {
      fail(ErrorKind::SupportTooLarge,
           "trace support exceeds the cap of " + std::to_string(cap_) + " strings; use Monte Carlo");
    }
    visit_(w, nx, ny);
  }

  static bool any_nonzero(const std::vector<Count>& v) {
    for (const auto& c : v)
      if (c != 0) return true;
    return false;
  }

  // Children of the empty string: every occurrence of b is an embedding end.
  void extend_root(BitString& w) {
    for (int b = 0; b < 2; ++b) {
      Level& lvl = levels_[1];
      fill_root(x_, b, lvl.cx);
      if (y_) fill_root(*y_, b, lvl.cy);
      else lvl.cy.clear();
      if (!any_nonzero(lvl.cx) && !any_nonzero(lvl.cy)) continue;
      w.push_back(b);
      descend(w, 1);
      pop(w);
    }
  }

  static void fill_root(const BitString& s, int b, std::vector<Count>& out) {
    out.assign(s.size(), Count(0));
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s[j] == b) out[j] = 1;
  }

  static void fill_child(const BitString& s, int b, const std::vector<Count>& parent,
                         std::vector<Count>& out) {
    out.assign(s.size(), Count(0));
    if (parent.empty()) return;
    Count prefix = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] == b) out[j] = prefix;
      prefix += parent[j];
    }
  }

  static Count sum(const std::vector<Count>& v) {
    Count total = 0;
    for (const auto& c : v) total += c;
    return total;
  }

  void descend(BitString& w, std::size_t depth) {
    Level& cur = levels_[depth];
    visit_node(w, sum(cur.cx), sum(cur.cy));
    Level& child = levels_[depth + 1];
    for (int b = 0; b < 2; ++b) {
      fill_child(x_, b, cur.cx, child.cx);
      if (y_) fill_child(*y_, b, cur.cy, child.cy);
      else child.cy.clear();
      if (!any_nonzero(child.cx) && !any_nonzero(child.cy)) continue;
      w.push_back(b);
      descend(w, depth + 1);
      pop(w);
    }
  }

  static void pop(BitString& w) { w.pop_back(); }

  const BitString& x_;
  const BitString* y_;
  std::size_t cap_;
  Visit& visit_;
  std::size_t visited_ = 0;
  std::vector<Level> levels_;
};

template <class Visit>
void traverse(const BitString& x, const BitString* y, std::size_t cap, Visit& visit) {
  const std::size_t longest = std::max(x.size(), y ? y->size() : 0);
  require(distinct_subsequence_count(x, cap + 1) <= cap &&
              (!y || distinct_subsequence_count(*y, cap + 1) <= cap),
          ErrorKind::SupportTooLarge,
          "trace support exceeds the cap of " + std::to_string(cap) + " strings; use Monte Carlo");
  // Counts are bounded by C(L, L/2) < 2^L.
  if (longest <= 63) {
    auto adapter = [&](const BitString& w, const std::uint64_t& a, const std::uint64_t& b) { visit(w, a, b); };
    PairTraversal<std::uint64_t, decltype(adapter)>(x, y, cap, adapter).run();
  } else if (longest <= 127) {
    auto adapter = [&](const BitString& w, const uint128& a, const uint128& b) {
      visit(w, a, b);
    };
    PairTraversal<uint128, decltype(adapter)>(x, y, cap, adapter).run();
  } else {
    auto adapter = [&](const BitString& w, const EmbeddingCount& a, const EmbeddingCount& b) { visit(w, a, b); };
    PairTraversal<EmbeddingCount, decltype(adapter)>(x, y, cap, adapter).run();
  }
}

}  // namespace

DiscreteMeasure<BitString> exact_distribution(const BitString& x, const ChannelParams& params,
                                              std::size_t support_cap) {
  DiscreteMeasure<BitString> law;
  auto visit = [&](const BitString& w, const auto& count, const auto&) {
    law.add(w, count_times_weight(count, log_weight(x.size(), w.size(), params)));
  };
  traverse(x, nullptr, support_cap, visit);
  return law;
}

ExactDistances exact_distances(const BitString& x, const BitString& y, const ChannelParams& params,
                               std::size_t support_cap) {
  CompensatedSum tv, h2, mx, my;
  std::size_t support = 0;
  auto visit = [&](const BitString& w, const auto& cx, const auto& cy) {
    const double a = w.size() <= x.size() ? count_times_weight(cx, log_weight(x.size(), w.size(), params)) : 0.0;
    const double b = w.size() <= y.size() ? count_times_weight(cy, log_weight(y.size(), w.size(), params)) : 0.0;
    tv += std::fabs(a - b);
    const double d = std::sqrt(a) - std::sqrt(b);
    h2 += d * d;
    mx += a;
    my += b;
    ++support;
  };
  traverse(x, &y, support_cap, visit);
  return {0.5 * tv.value(), h2.value(), support, mx.value(), my.value()};
}

double exact_distance(const BitString& x, const BitString& y, const ChannelParams& params, Metric metric,
                      std::size_t support_cap) {
  const auto d = exact_distances(x, y, params, support_cap);
  return metric == Metric::TV ? d.tv : d.hellinger_sq;
}

std::string measure_to_json(const DiscreteMeasure<BitString>& measure) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, mass] : measure) j[key.to_string()] = mass;
  return j.dump();
}

DiscreteMeasure<BitString> measure_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    require(j.is_object(), ErrorKind::Parse, "measure JSON must be an object");
    DiscreteMeasure<BitString> out;
    for (const auto& [key, mass] : j.items()) out.add(BitString::parse(key), mass.get<double>());
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed measure JSON: ") + e.what());
  }
}

}  // namespace deltrace
