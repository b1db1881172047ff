#include "deltrace/distinguisher.hpp"

#include <algorithm>
#include <cmath>

#include "deltrace/error.hpp"
#include "deltrace/exact_oracle.hpp"
#include "deltrace/numeric.hpp"
#include "deltrace/parallel.hpp"

namespace deltrace {

ZStatConfig ZStatConfig::make(int n, const ChannelParams& params) {
  require(n >= 1, ErrorKind::InvalidParameter, "block parameter n must be at least 1");
  ZStatConfig cfg;
  cfg.n = n;
  cfg.params = params;
  const double np = n * params.p();
  cfg.window_lo = static_cast<std::int64_t>(std::floor(2.0 * np)) + 1;
  cfg.window_hi = static_cast<std::int64_t>(std::floor(2.0 * np + std::sqrt(np * params.q())));
  return cfg;
}

std::int64_t z_statistic(const BitString& trace, const ZStatConfig& cfg) {
  const auto len = static_cast<std::int64_t>(trace.size());
  const std::int64_t hi = std::min(cfg.window_hi, len - 1);
  std::int64_t z = 0;
  for (std::int64_t k = std::max<std::int64_t>(cfg.window_lo, 1); k <= hi; ++k) z += trace[k - 1] & trace[k];
  return z;
}

std::int64_t sample_z(const BitString& x, const ZStatConfig& cfg, Rng& rng) {
  if (cfg.degenerate()) return 0;
  const double p = cfg.params.p();
  const auto need = static_cast<std::size_t>(cfg.window_hi + 1);
  // Retained bits at 1-based trace positions lo..hi+1 are all that matter.
  std::size_t kept = 0;
  std::int64_t z = 0;
  int prev = 0;
  for (auto bit : x) {
    if (kept >= need) break;
    if (rng.uniform() < p) {
      ++kept;
      const auto k = static_cast<std::int64_t>(kept) - 1;  // position of the previous retained bit
      if (k >= cfg.window_lo && k <= cfg.window_hi) z += prev & bit;
      prev = bit;
    }
  }
  return z;
}

double exact_z_mean(const BitString& x, const ZStatConfig& cfg) {
  if (cfg.degenerate()) return 0.0;
  const auto len = static_cast<std::int64_t>(x.size());
  const double p = cfg.params.p(), q = cfg.params.q();
  const double lp = std::log(p), lq = std::log(q);
  // follow[j]: probability that the next retained bit after 1-based position j
  // exists and is a 1.
  std::vector<double> follow(len + 2, 0.0);
  for (std::int64_t j = len - 1; j >= 1; --j) follow[j] = x[j] ? p + q * follow[j + 1] : q * follow[j + 1];
  CompensatedSum total;
  for (std::int64_t k = cfg.window_lo; k <= cfg.window_hi; ++k) {
    for (std::int64_t j = k; j <= len; ++j) {
      if (!x[j - 1]) continue;
      // x_j is the k-th retained bit.
      const double log_c = std::lgamma(static_cast<double>(j)) - std::lgamma(static_cast<double>(k)) -
                           std::lgamma(static_cast<double>(j - k + 1));
      total += std::exp(log_c + k * lp + (j - k) * lq) * follow[j];
    }
  }
  return total.value();
}

namespace {

StringPair pair_for(int n) { return build_xy(n); }

}  // namespace

TesterParams calibrate(int n, const ChannelParams& params, std::uint64_t samples, std::uint64_t seed,
                       unsigned workers) {
  require(samples >= 1, ErrorKind::InvalidParameter, "calibration needs at least one sample");
  const ZStatConfig cfg = ZStatConfig::make(n, params);
  require(!cfg.degenerate(), ErrorKind::DegenerateWindow, "Z window is empty for these parameters");
  const auto pair = pair_for(n);
  const std::uint64_t base = derive_domain_seed(seed, kCalibrationDomain);
  struct Part {
    MomentAccumulator x, y, gap;
  };
  auto parts = map_chunks(samples, 4096, workers, [&](std::size_t begin, std::size_t end) {
    Part part;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t s = derive_stream_seed(base, i);
      Rng rx(s), ry(s);
      const double zx = static_cast<double>(sample_z(pair.left, cfg, rx));
      const double zy = static_cast<double>(sample_z(pair.right, cfg, ry));
      part.x.add(zx);
      part.y.add(zy);
      part.gap.add(zy - zx);
    }
    return part;
  });
  Part total;
  for (const auto& p : parts) {
    total.x += p.x;
    total.y += p.y;
    total.gap += p.gap;
  }
  TesterParams tp;
  tp.mean_x = total.x.mean();
  tp.mean_y = total.y.mean();
  tp.threshold = 0.5 * (tp.mean_x + tp.mean_y);
  tp.calibration_samples = samples;
  tp.var_x = total.x.variance();
  tp.var_y = total.y.variance();
  tp.gap_stderr = total.gap.standard_error();
  return tp;
}

const char* to_string(Label label) noexcept { return label == Label::X ? "x" : "y"; }

Label classify_mean(double mean_z, const TesterParams& tp) {
  require(tp.valid(), ErrorKind::PreconditionViolated, "tester is invalid: calibrated mean_y <= mean_x");
  return mean_z > tp.threshold ? Label::Y : Label::X;
}

Label classify(const std::vector<BitString>& traces, const TesterParams& tp, const ZStatConfig& cfg) {
  require(!traces.empty(), ErrorKind::InvalidParameter, "cannot classify an empty batch");
  std::int64_t sum = 0;
  for (const auto& t : traces) sum += z_statistic(t, cfg);
  return classify_mean(static_cast<double>(sum) / static_cast<double>(traces.size()), tp);
}

Label likelihood_classify(const std::vector<BitString>& traces, const BitString& x, const BitString& y) {
  require(x.size() == y.size(), ErrorKind::InvalidParameter, "likelihood test needs inputs of equal length");
  EmbeddingCounter cx(x), cy(y);
  CompensatedSum llr;
  bool only_x = false, only_y = false;
  for (const auto& w : traces) {
    const ScaledCount nx = cx.count(w);
    const ScaledCount ny = cy.count(w);
    if (nx.is_zero() && ny.is_zero()) fail(ErrorKind::InvalidTrace, "trace " + w.to_string() + " embeds in neither input");
    if (ny.is_zero()) {
      only_x = true;
    } else if (nx.is_zero()) {
      only_y = true;
    } else {
      llr += nx.log() - ny.log();
    }
  }
  if (only_x) return Label::X;
  if (only_y) return Label::Y;
  return llr.value() >= 0.0 ? Label::X : Label::Y;
}

std::uint64_t trace_budget(double c, int n) {
  require(c > 0.0 && n >= 2, ErrorKind::InvalidParameter, "trace budget needs C > 0 and n >= 2");
  return static_cast<std::uint64_t>(std::ceil(c * std::pow(n, 1.5) * std::log(static_cast<double>(n))));
}

namespace {

constexpr std::uint64_t kEvaluationDomain = 0xe7a1;

// One trial: T traces of the true input, then the tester's verdict.
Label run_trial(const BitString& truth, const StringPair& pair, const ZStatConfig& cfg, const TesterParams* tp,
                Tester tester, std::uint64_t t, Rng& rng) {
  if (tester == Tester::Z) {
    std::int64_t sum = 0;
    for (std::uint64_t i = 0; i < t; ++i) sum += sample_z(truth, cfg, rng);
    return classify_mean(static_cast<double>(sum) / static_cast<double>(t), *tp);
  }
  std::vector<BitString> traces;
  traces.reserve(t);
  for (std::uint64_t i = 0; i < t; ++i) traces.push_back(transmit(truth, cfg.params, rng));
  return likelihood_classify(traces, pair.left, pair.right);
}

}  // namespace

ErrorSweepResult error_rate_sweep(const ErrorSweepConfig& config) {
  require(config.reps >= 1, ErrorKind::InvalidParameter, "error sweep needs reps >= 1");
  require(!config.ns.empty(), ErrorKind::InvalidParameter, "error sweep needs at least one n");
  require(config.t_per_n.empty() || config.t_per_n.size() == config.ns.size(), ErrorKind::InvalidParameter,
          "t_per_n must give one trace count per n");
  require(!config.ts.empty() || !config.t_per_n.empty(), ErrorKind::InvalidParameter,
          "error sweep needs trace counts");
  const ChannelParams params(config.q);
  const std::string metric = config.tester == Tester::Z ? "error_z" : "error_lr";
  ErrorSweepResult result;
  for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
    const int n = config.ns[ni];
    const auto pair = build_xy(n);
    const ZStatConfig cfg = ZStatConfig::make(n, params);
    TesterParams tp;
    if (config.tester == Tester::Z) {
      tp = calibrate(n, params, config.calibration_samples, derive_domain_seed(config.seed, n), config.workers);
      result.calibrations.push_back(tp);
    }
    std::vector<std::uint64_t> ts = config.t_per_n.empty() ? config.ts : std::vector{config.t_per_n[ni]};
    for (std::uint64_t t : ts) {
      require(t >= 1, ErrorKind::InvalidParameter, "trace count must be at least 1");
      const std::uint64_t eval = derive_domain_seed(derive_domain_seed(config.seed, kEvaluationDomain),
                                                    (static_cast<std::uint64_t>(n) << 40) ^ t);
      // Trials 0..reps-1 use x as the truth, reps..2reps-1 use y.
      auto parts = map_chunks(2 * config.reps, 1, config.workers, [&](std::size_t begin, std::size_t end) {
        std::pair<std::uint64_t, std::uint64_t> wrong{0, 0};
        for (std::size_t i = begin; i < end; ++i) {
          Rng rng(derive_stream_seed(eval, i));
          const bool truth_x = i < config.reps;
          const Label got = run_trial(truth_x ? pair.left : pair.right, pair, cfg, &tp, config.tester, t, rng);
          if (truth_x && got != Label::X) ++wrong.first;
          if (!truth_x && got != Label::Y) ++wrong.second;
        }
        return wrong;
      });
      ErrorPoint pt;
      pt.n = n;
      pt.t = t;
      pt.reps = config.reps;
      for (const auto& [ex, ey] : parts) {
        pt.errors_x += ex;
        pt.errors_y += ey;
      }
      const double trials = 2.0 * static_cast<double>(config.reps);
      pt.error = static_cast<double>(pt.errors_x + pt.errors_y) / trials;
      pt.wilson = wilson_interval(pt.errors_x + pt.errors_y, 2 * config.reps);
      const double se = std::sqrt(pt.error * (1.0 - pt.error) / trials);
      const auto samples = static_cast<std::int64_t>(t);
      result.rows.push_back({"distinguish-sweep", n, config.q, metric, pt.error, se, samples, config.seed, 0});
      result.rows.push_back({"distinguish-sweep", n, config.q, metric + "_wilson_lo", pt.wilson.lo, 0.0, samples,
                             config.seed, 0});
      result.rows.push_back({"distinguish-sweep", n, config.q, metric + "_wilson_hi", pt.wilson.hi, 0.0, samples,
                             config.seed, 0});
      result.points.push_back(pt);
    }
  }
  return result;
}

ConcentrationResult z_concentration_check(int n, const ChannelParams& params, const std::vector<double>& rs,
                                          std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  require(samples >= 1, ErrorKind::InvalidParameter, "concentration check needs at least one sample");
  const ZStatConfig cfg = ZStatConfig::make(n, params);
  require(!cfg.degenerate(), ErrorKind::DegenerateWindow, "Z window is empty for these parameters");
  const auto x = build_xy(n).left;
  ConcentrationResult out;
  out.mean = exact_z_mean(x, cfg);
  const auto width = static_cast<std::size_t>(cfg.window_hi - cfg.window_lo + 1);
  auto parts = map_chunks(samples, 4096, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> hist(width + 1, 0);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_stream_seed(seed, i));
      ++hist[static_cast<std::size_t>(sample_z(x, cfg, rng))];
    }
    return hist;
  });
  std::vector<std::uint64_t> hist(width + 1, 0);
  for (const auto& h : parts)
    for (std::size_t z = 0; z < h.size(); ++z) hist[z] += h[z];
  const double scale = std::pow(static_cast<double>(n), 0.25);
  std::vector<double> r2, logs;
  for (double r : rs) {
    std::uint64_t beyond = 0;
    for (std::size_t z = 0; z < hist.size(); ++z)
      if (std::fabs(static_cast<double>(z) - out.mean) > r * scale) beyond += hist[z];
    const double tail = static_cast<double>(beyond) / static_cast<double>(samples);
    out.rows.push_back({r, tail});
    if (r > 0.0 && tail > 0.0) {
      r2.push_back(r * r);
      logs.push_back(std::log(tail));
    }
  }
  if (const auto fit = ols(r2, logs)) out.fitted_c = -fit->slope;
  out.decreasing = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const bool strictly = out.rows[i].tail < out.rows[i - 1].tail;
    const bool both_zero = out.rows[i].tail == 0.0 && out.rows[i - 1].tail == 0.0;
    if (!(strictly || both_zero)) out.decreasing = false;
  }
  return out;
}

}  // namespace deltrace
