#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "deltrace/bitstring.hpp"
#include "deltrace/channel.hpp"
#include "deltrace/report.hpp"
#include "deltrace/stats.hpp"

namespace deltrace {

// Window of positions k (1-based) inspected by the statistic:
// floor(2np) + 1 <= k <= floor(2np + sqrt(npq)), further capped at len - 1.
struct ZStatConfig {
  int n = 0;
  ChannelParams params{0.5};
  std::int64_t window_lo = 0;
  std::int64_t window_hi = -1;

  static ZStatConfig make(int n, const ChannelParams& params);
  bool degenerate() const noexcept { return window_hi < window_lo; }
};

// Number of k in the window with trace_k = trace_{k+1} = 1.
std::int64_t z_statistic(const BitString& trace, const ZStatConfig& cfg);

// Z of one channel output of x, generating only the trace prefix Z depends on.
std::int64_t sample_z(const BitString& x, const ZStatConfig& cfg, Rng& rng);

// E[Z] for traces of x, summed exactly over the positions that can land at
// each window slot.
double exact_z_mean(const BitString& x, const ZStatConfig& cfg);

struct TesterParams {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double threshold = 0.0;
  std::uint64_t calibration_samples = 0;
  double var_x = 0.0;
  double var_y = 0.0;
  double gap_stderr = 0.0;  // from paired draws

  bool valid() const noexcept { return mean_y > mean_x; }
};

// Seed domain reserved for calibration draws; evaluation uses other domains.
inline constexpr std::uint64_t kCalibrationDomain = 0xca1;

// Monte Carlo means of Z under x_n and y_n. Draw i of both inputs shares one
// stream, so the deletion patterns coincide and the gap has low variance.
TesterParams calibrate(int n, const ChannelParams& params, std::uint64_t samples, std::uint64_t seed,
                       unsigned workers = 1);

enum class Label { X, Y };
const char* to_string(Label label) noexcept;

// Mean Z above the threshold means y; ties go to x.
Label classify(const std::vector<BitString>& traces, const TesterParams& tp, const ZStatConfig& cfg);
Label classify_mean(double mean_z, const TesterParams& tp);

// Sign of sum_i log(N_x(w_i) / N_y(w_i)); nonnegative means x. A trace that
// only one input can produce decides outright; if both kinds occur the result
// is x.
Label likelihood_classify(const std::vector<BitString>& traces, const BitString& x, const BitString& y);

enum class Tester { Z, LikelihoodRatio };

struct ErrorSweepConfig {
  std::vector<int> ns;
  // Trace counts per n; either one list shared by all n, or `t_per_n` giving T for each n.
  std::vector<std::uint64_t> ts;
  std::vector<std::uint64_t> t_per_n;
  double q = 0.5;
  Tester tester = Tester::Z;
  std::uint64_t reps = 100;  // trials per true label
  std::uint64_t seed = 0;
  std::uint64_t calibration_samples = 1000000;
  unsigned workers = 1;
};

struct ErrorPoint {
  int n = 0;
  std::uint64_t t = 0;
  std::uint64_t errors_x = 0;  // x misread as y
  std::uint64_t errors_y = 0;
  std::uint64_t reps = 0;
  double error = 0.0;
  Interval wilson;
};

struct ErrorSweepResult {
  std::vector<ErrorPoint> points;
  std::vector<TesterParams> calibrations;  // one per n for the Z tester
  std::vector<ReportRow> rows;
};

ErrorSweepResult error_rate_sweep(const ErrorSweepConfig& config);

// ceil(C n^{3/2} ln n).
std::uint64_t trace_budget(double c, int n);

struct ConcentrationRow {
  double r = 0.0;
  double tail = 0.0;  // P[|Z - E Z| > r n^{1/4}]
};

struct ConcentrationResult {
  double mean = 0.0;  // exact E[Z] under x_n
  std::vector<ConcentrationRow> rows;
  std::optional<double> fitted_c;  // from log tail against r^2 over r > 0 with tail > 0
  bool decreasing = false;
};

ConcentrationResult z_concentration_check(int n, const ChannelParams& params, const std::vector<double>& rs,
                                          std::uint64_t samples, std::uint64_t seed, unsigned workers = 1);

}  // namespace deltrace
