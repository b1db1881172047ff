#include <cmath>

#include <gtest/gtest.h>

#include "deltrace/error.hpp"
#include "deltrace/mc_distance.hpp"

using namespace deltrace;

namespace {

const ChannelParams kHalf(0.5);

}  // namespace

TEST(EstimateTv, IdenticalInputsGiveExactZero) {
  const auto x = BitString::parse("0110100");
  const auto e = estimate_tv(x, x, kHalf, 500, 3);
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.stderr_, 0.0);
  EXPECT_EQ(e.n_samples, 500u);
  EXPECT_EQ(e.seed, 3u);
  const auto h = estimate_hellinger_sq(x, x, kHalf, 500, 3);
  EXPECT_EQ(h.value, 0.0);
  const auto hs = estimate_hellinger_sq(x, x, kHalf, 500, 3, {}, HellingerForm::Symmetric);
  EXPECT_EQ(hs.value, 0.0);
}

TEST(EstimateTv, RejectsBadInput) {
  EXPECT_THROW(estimate_tv(BitString::parse("01"), BitString::parse("011"), kHalf, 10, 1), Error);
  EXPECT_THROW(estimate_tv(BitString::parse("01"), BitString::parse("10"), kHalf, 0, 1), Error);
  EXPECT_THROW(estimate_hellinger_sq(BitString::parse("01"), BitString::parse("0"), kHalf, 10, 1), Error);
}

TEST(EstimateTv, MatchesExactOracle) {
  const auto [x, y, n_] = build_xy(1);
  const double exact = exact_distance(x, y, kHalf, Metric::TV);
  const auto e = estimate_tv(x, y, kHalf, 100000, 11);
  EXPECT_NEAR(e.value, exact, 4 * e.stderr_);
  EXPECT_GE(e.value, 0.0);
  EXPECT_LE(e.value, 1.0);
  const auto s = estimate_tv(x, y, kHalf, 100000, 12, {}, TvSampling::Symmetrized);
  EXPECT_NEAR(s.value, exact, 4 * s.stderr_);
}

TEST(EstimateHellinger, MatchesExactOracle) {
  const auto [x, y, n_] = build_xy(2);
  const double exact = exact_distance(x, y, kHalf, Metric::HellingerSq);
  const auto a = estimate_hellinger_sq(x, y, kHalf, 100000, 21);
  EXPECT_NEAR(a.value, exact, 4 * a.stderr_);
  const auto s = estimate_hellinger_sq(x, y, kHalf, 100000, 22, {}, HellingerForm::Symmetric);
  EXPECT_NEAR(s.value, exact, 4 * s.stderr_);
  EXPECT_LT(s.stderr_, a.stderr_);
  for (const auto& e : std::vector<EstimateWithCI>{a, s}) {
    EXPECT_GE(e.value, 0.0);
    EXPECT_LE(e.value, 2.0);
  }
}

TEST(EstimateTv, AveragedEstimatesConcentrateOnExactValue) {
  const auto x = BitString::parse("01101001"), y = BitString::parse("01011001");
  const double exact = exact_distance(x, y, kHalf, Metric::TV);
  double sum = 0.0, var = 0.0;
  const int m = 50;
  for (int i = 0; i < m; ++i) {
    const auto e = estimate_tv(x, y, kHalf, 400, derive_stream_seed(77, static_cast<std::uint64_t>(i)));
    sum += e.raw;
    var += e.stderr_ * e.stderr_;
  }
  EXPECT_NEAR(sum / m, exact, 4 * std::sqrt(var) / m);
}

TEST(EstimateTv, IndependentOfWorkerCount) {
  const auto [x, y, n_] = build_xy(6);
  for (auto backend : {CountBackend::ScaledDouble, CountBackend::BigInt}) {
    const auto one = estimate_tv(x, y, kHalf, 3000, 5, {1, backend});
    const auto four = estimate_tv(x, y, kHalf, 3000, 5, {4, backend});
    EXPECT_EQ(one.value, four.value);
    EXPECT_EQ(one.stderr_, four.stderr_);
    const auto h1 = estimate_hellinger_sq(x, y, kHalf, 3000, 5, {1, backend}, HellingerForm::Symmetric);
    const auto h3 = estimate_hellinger_sq(x, y, kHalf, 3000, 5, {3, backend}, HellingerForm::Symmetric);
    EXPECT_EQ(h1.value, h3.value);
  }
}

TEST(EstimateTv, BackendsAgree) {
  const auto [x, y, n_] = build_xy(40);
  const auto a = estimate_tv(x, y, ChannelParams(0.3), 2000, 8, {1, CountBackend::ScaledDouble});
  const auto b = estimate_tv(x, y, ChannelParams(0.3), 2000, 8, {1, CountBackend::BigInt});
  EXPECT_NEAR(a.raw, b.raw, 1e-12);
}

TEST(MakePair, Kinds) {
  EXPECT_EQ(make_pair(PairKind::XY, 3).left, build_xy(3).left);
  EXPECT_EQ(make_pair(PairKind::XYPrime, 3).right, build_xy_prime(3).right);
}

TEST(RateSweep, SingleNHasNoSlope) {
  RateSweepConfig cfg;
  cfg.ns = {2};
  cfg.samples = 2000;
  cfg.seed = 4;
  const auto r = rate_sweep(cfg);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_FALSE(r.slope.has_value());
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].experiment, "rate-sweep");
  EXPECT_EQ(r.rows[0].n, 2);
  EXPECT_EQ(r.rows[0].metric, "tv");
}

TEST(RateSweep, ReportsSlopeRow) {
  RateSweepConfig cfg;
  cfg.ns = {2, 4, 8};
  cfg.samples = 4000;
  cfg.seed = 4;
  const auto r = rate_sweep(cfg);
  ASSERT_TRUE(r.slope.has_value());
  EXPECT_LT(r.slope->slope, 0.0);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows.back().metric, "slope_tv");
  EXPECT_EQ(r.rows.back().estimate, r.slope->slope);
}

TEST(RateSweep, RejectsUnorderedGrid) {
  RateSweepConfig cfg;
  cfg.ns = {4, 2};
  EXPECT_THROW(rate_sweep(cfg), Error);
  cfg.ns = {};
  EXPECT_THROW(rate_sweep(cfg), Error);
}
