#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "deltrace/bitstring.hpp"
#include "deltrace/channel.hpp"
#include "deltrace/measure.hpp"

namespace deltrace {

// Number of strictly increasing index maps that embed w into x as a
// subsequence. Exact at any width.
using EmbeddingCount = boost::multiprecision::cpp_int;

EmbeddingCount embedding_count(const BitString& w, const BitString& x);

// Floating embedding count `mantissa * 2^exponent`. Produced by the same
// recurrence as embedding_count with exact power-of-two rescaling, so the only
// error is double rounding of the additions (relative error below 1e-13 for
// strings of a few thousand bits).
struct ScaledCount {
  double mantissa = 0.0;
  long exponent = 0;

  bool is_zero() const noexcept { return mantissa == 0.0; }
  double log() const noexcept;
};

// this / other; +inf when other is zero and this is not.
double count_ratio(const ScaledCount& numerator, const ScaledCount& denominator) noexcept;

// Counts embeddings of many short strings into one fixed string, reusing
// buffers between calls. Not thread-safe; use one per worker.
class EmbeddingCounter {
 public:
  explicit EmbeddingCounter(BitString x);

  const BitString& text() const noexcept { return x_; }
  ScaledCount count(const BitString& w);

 private:
  BitString x_;
  std::vector<double> dp_;
  std::vector<std::uint32_t> zeros_;
  std::vector<std::uint32_t> ones_;
};

ScaledCount embedding_count_scaled(const BitString& w, const BitString& x);

// P[trace of x equals w] = embedding_count(w, x) * p^{|w|} q^{|x|-|w|}.
double trace_probability(const BitString& x, const BitString& w, const ChannelParams& params);

inline constexpr std::size_t kDefaultSupportCap = 10'000'000;

// Number of distinct subsequences of x (the empty one included), by path
// counting in the subsequence automaton. Saturates at `saturate_at`.
std::uint64_t distinct_subsequence_count(const BitString& x,
                                         std::uint64_t saturate_at = UINT64_MAX);

// The trace law of x: every distinct subsequence with its exact probability.
// Throws SupportTooLarge when the support exceeds `support_cap`.
DiscreteMeasure<BitString> exact_distribution(const BitString& x, const ChannelParams& params,
                                              std::size_t support_cap = kDefaultSupportCap);

enum class Metric { TV, HellingerSq };

struct ExactDistances {
  double tv = 0.0;
  double hellinger_sq = 0.0;
  std::size_t union_support = 0;
  double mass_x = 0.0;
  double mass_y = 0.0;
};

// Both distances between the trace laws of x and y from a single traversal of
// the union of their subsequence automata. The laws are never materialised.
ExactDistances exact_distances(const BitString& x, const BitString& y, const ChannelParams& params,
                               std::size_t support_cap = kDefaultSupportCap);

double exact_distance(const BitString& x, const BitString& y, const ChannelParams& params,
                      Metric metric, std::size_t support_cap = kDefaultSupportCap);

// JSON object mapping bit-string keys to masses; doubles are written in
// shortest round-trip form.
std::string measure_to_json(const DiscreteMeasure<BitString>& measure);
DiscreteMeasure<BitString> measure_from_json(const std::string& text);

}  // namespace deltrace
