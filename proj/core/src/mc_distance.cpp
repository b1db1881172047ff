#include "deltrace/mc_distance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "deltrace/error.hpp"
#include "deltrace/numeric.hpp"
#include "deltrace/parallel.hpp"

namespace deltrace {

namespace {

constexpr std::size_t kChunk = 256;

// N_y(w) / N_x(w) for a trace w of x or of y; +inf when only x misses w.
class RatioEvaluator {
 public:
  RatioEvaluator(const BitString& x, const BitString& y, CountBackend backend)
      : cx_(x), cy_(y), x_(x), y_(y), backend_(backend) {}

  double operator()(const BitString& w) {
    if (backend_ == CountBackend::ScaledDouble) return count_ratio(cy_.count(w), cx_.count(w));
    const EmbeddingCount nx = embedding_count(w, x_);
    const EmbeddingCount ny = embedding_count(w, y_);
    if (nx == 0) return ny == 0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
    return boost::multiprecision::cpp_rational(ny, nx).convert_to<double>();
  }

 private:
  EmbeddingCounter cx_, cy_;
  const BitString& x_;
  const BitString& y_;
  CountBackend backend_;
};

// Mean and standard error of term(i, rng, ratio) over i in [0, n).
template <class Term>
MomentAccumulator sample_moments(const BitString& x, const BitString& y, std::uint64_t n, std::uint64_t seed,
                                 const McOptions& options, Term term) {
  auto parts = map_chunks(n, kChunk, options.workers, [&](std::size_t begin, std::size_t end) {
    RatioEvaluator ratio(x, y, options.backend);
    MomentAccumulator acc;
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_stream_seed(seed, i));
      acc.add(term(rng, ratio));
    }
    return acc;
  });
  MomentAccumulator total;
  for (const auto& p : parts) total += p;
  return total;
}

void check_inputs(const BitString& x, const BitString& y, std::uint64_t n) {
  require(x.size() == y.size(), ErrorKind::InvalidParameter,
          "Monte Carlo distances need inputs of equal length");
  require(n >= 1, ErrorKind::InvalidParameter, "sample count must be at least 1");
}

EstimateWithCI finish(const MomentAccumulator& m, double scale, double offset, double hi, std::uint64_t seed) {
  EstimateWithCI out;
  out.raw = offset + scale * m.mean();
  out.value = std::clamp(out.raw, 0.0, hi);
  out.stderr_ = std::fabs(scale) * m.standard_error();
  out.n_samples = m.count;
  out.seed = seed;
  return out;
}

}  // namespace

EstimateWithCI estimate_tv(const BitString& x, const BitString& y, const ChannelParams& params, std::uint64_t n,
                           std::uint64_t seed, const McOptions& options, TvSampling sampling) {
  check_inputs(x, y, n);
  if (sampling == TvSampling::OneSided) {
    auto m = sample_moments(x, y, n, seed, options, [&](Rng& rng, RatioEvaluator& ratio) {
      return std::max(0.0, 1.0 - ratio(transmit(x, params, rng)));
    });
    return finish(m, 1.0, 0.0, 1.0, seed);
  }
  auto term = [](double r) { return std::isinf(r) ? 1.0 : std::fabs(1.0 - r) / (1.0 + r); };
  auto m = sample_moments(x, y, n, seed, options, [&](Rng& rng, RatioEvaluator& ratio) {
    const double a = term(ratio(transmit(x, params, rng)));
    const double b = term(ratio(transmit(y, params, rng)));
    return 0.5 * (a + b);
  });
  return finish(m, 1.0, 0.0, 1.0, seed);
}

EstimateWithCI estimate_hellinger_sq(const BitString& x, const BitString& y, const ChannelParams& params,
                                     std::uint64_t n, std::uint64_t seed, const McOptions& options,
                                     HellingerForm form) {
  check_inputs(x, y, n);
  if (form == HellingerForm::Affinity) {
    auto m = sample_moments(x, y, n, seed, options, [&](Rng& rng, RatioEvaluator& ratio) {
      return std::sqrt(ratio(transmit(x, params, rng)));
    });
    return finish(m, -2.0, 2.0, 2.0, seed);
  }
  auto term = [](double r) {
    if (std::isinf(r)) return 2.0;
    const double d = 1.0 - std::sqrt(r);
    return 2.0 * d * d / (1.0 + r);
  };
  auto m = sample_moments(x, y, n, seed, options, [&](Rng& rng, RatioEvaluator& ratio) {
    const double a = term(ratio(transmit(x, params, rng)));
    const double b = term(ratio(transmit(y, params, rng)));
    return 0.5 * (a + b);
  });
  return finish(m, 1.0, 0.0, 2.0, seed);
}

StringPair make_pair(PairKind kind, int n) {
  return kind == PairKind::XY ? build_xy(n) : build_xy_prime(n);
}

RateSweepResult rate_sweep(const RateSweepConfig& config) {
  require(!config.ns.empty(), ErrorKind::InvalidParameter, "rate sweep needs at least one n");
  require(std::is_sorted(config.ns.begin(), config.ns.end()) &&
              std::adjacent_find(config.ns.begin(), config.ns.end()) == config.ns.end(),
          ErrorKind::InvalidParameter, "rate sweep n values must be strictly increasing");
  const ChannelParams params(config.q);
  const std::string metric = config.metric == Metric::TV ? "tv" : "hellinger_sq";

  RateSweepResult result;
  std::vector<double> xs, ys;
  for (int n : config.ns) {
    const auto pair = make_pair(config.pair, n);
    const std::uint64_t seed = derive_domain_seed(config.seed, static_cast<std::uint64_t>(n));
    const auto start = std::chrono::steady_clock::now();
    auto run = [&](std::uint64_t count) {
      return config.metric == Metric::TV
                 ? estimate_tv(pair.left, pair.right, params, count, seed, config.options, config.tv_sampling)
                 : estimate_hellinger_sq(pair.left, pair.right, params, count, seed, config.options,
                                         config.hellinger_form);
    };
    std::uint64_t count = config.samples;
    EstimateWithCI est = run(count);
    if (config.target_rel_stderr > 0.0) {
      const std::uint64_t cap = std::max(config.max_samples, config.samples);
      while (est.stderr_ > config.target_rel_stderr * est.value && count < cap) {
        count = std::min(cap, count * 2);
        est = run(count);
      }
    }
    RatePoint point;
    point.n = n;
    point.estimate = est;
    point.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    point.excluded = !(est.value > 2.0 * est.stderr_);
    if (!point.excluded) {
      xs.push_back(n);
      ys.push_back(est.value);
    }
    result.rows.push_back({"rate-sweep", n, config.q, metric, est.value, est.stderr_,
                           static_cast<std::int64_t>(est.n_samples), config.seed,
                           static_cast<std::int64_t>(std::llround(point.wall_ms))});
    result.points.push_back(point);
  }
  result.slope = loglog_fit(xs, ys);
  if (result.slope) {
    result.rows.push_back({"rate-sweep", 0, config.q, "slope_" + metric, result.slope->slope,
                           result.slope->slope_stderr, static_cast<std::int64_t>(result.slope->points), config.seed,
                           0});
  }
  return result;
}

}  // namespace deltrace
