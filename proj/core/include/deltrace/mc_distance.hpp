#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "deltrace/bitstring.hpp"
#include "deltrace/channel.hpp"
#include "deltrace/exact_oracle.hpp"
#include "deltrace/report.hpp"
#include "deltrace/stats.hpp"

namespace deltrace {

struct EstimateWithCI {
  double value = 0.0;  // clamped to the metric's range
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  double raw = 0.0;  // before clamping
};

// How per-sample embedding counts are evaluated. ScaledDouble rescales by
// exact powers of two; BigInt runs the recurrence in arbitrary precision and
// converts the ratio once at the end.
enum class CountBackend { ScaledDouble, BigInt };

// OneSided: w ~ law of x, term (1 - N_y/N_x)_+.
// Symmetrized: one draw from each law per sample, term |1 - r| / (1 + r).
enum class TvSampling { OneSided, Symmetrized };

// Affinity: w ~ law of x, dH2 = 2 (1 - E sqrt(N_y/N_x)).
// Symmetric: one draw from each law per sample, term 2 (1 - sqrt r)^2 / (1 + r),
// which stays bounded and has far smaller variance when dH2 is small.
enum class HellingerForm { Affinity, Symmetric };

struct McOptions {
  unsigned workers = 1;
  CountBackend backend = CountBackend::ScaledDouble;
};

// Sample i draws from its own stream derive_stream_seed(seed, i), and partial
// sums are reduced in a fixed order, so results do not depend on `workers`.
EstimateWithCI estimate_tv(const BitString& x, const BitString& y, const ChannelParams& params, std::uint64_t n,
                           std::uint64_t seed, const McOptions& options = {},
                           TvSampling sampling = TvSampling::OneSided);

EstimateWithCI estimate_hellinger_sq(const BitString& x, const BitString& y, const ChannelParams& params,
                                     std::uint64_t n, std::uint64_t seed, const McOptions& options = {},
                                     HellingerForm form = HellingerForm::Affinity);

enum class PairKind { XY, XYPrime };

StringPair make_pair(PairKind kind, int n);

struct RateSweepConfig {
  PairKind pair = PairKind::XY;
  std::vector<int> ns;
  double q = 0.5;
  Metric metric = Metric::TV;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  // When positive, each point keeps doubling its sample count (starting from
  // `samples`) until stderr <= target_rel_stderr * estimate or max_samples is hit.
  double target_rel_stderr = 0.0;
  std::uint64_t max_samples = 0;
  HellingerForm hellinger_form = HellingerForm::Symmetric;
  TvSampling tv_sampling = TvSampling::OneSided;
  McOptions options;
};

struct RatePoint {
  int n = 0;
  EstimateWithCI estimate;
  double wall_ms = 0.0;
  bool excluded = false;  // estimate <= 2 stderr
};

struct RateSweepResult {
  std::vector<RatePoint> points;
  std::optional<OlsFit> slope;  // log estimate against log n over non-excluded points
  std::vector<ReportRow> rows;  // one per n, then a slope row when the slope exists
};

RateSweepResult rate_sweep(const RateSweepConfig& config);

}  // namespace deltrace
