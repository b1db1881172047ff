#include <cmath>

#include <gtest/gtest.h>

#include "deltrace/stats.hpp"

using namespace deltrace;

TEST(Ols, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto fit = ols(x, y);
  ASSERT_TRUE(fit);
  EXPECT_NEAR(fit->slope, 2.0, 1e-14);
  EXPECT_NEAR(fit->intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit->slope_stderr, 0.0, 1e-12);
  EXPECT_EQ(fit->points, 4u);
}

TEST(Ols, Degenerate) {
  const std::vector<double> one{1}, same{2, 2};
  EXPECT_FALSE(ols(one, one));
  EXPECT_FALSE(ols(same, std::vector<double>{1, 3}));
}

TEST(Ols, SlopeStderr) {
  // Residuals (+1, -1, -1, +1) about slope 0: s^2 = 4/2, Sxx = 5.
  const std::vector<double> x{1, 2, 3, 4}, y{1, -1, -1, 1};
  const auto fit = ols(x, y);
  ASSERT_TRUE(fit);
  EXPECT_NEAR(fit->slope, 0.0, 1e-14);
  EXPECT_NEAR(fit->slope_stderr, std::sqrt(2.0 / 5.0), 1e-14);
}

TEST(LoglogFit, PowerLaw) {
  std::vector<double> x, y;
  for (double n : {8.0, 16.0, 32.0, 64.0}) {
    x.push_back(n);
    y.push_back(3.0 * std::pow(n, -0.75));
  }
  const auto fit = loglog_fit(x, y);
  ASSERT_TRUE(fit);
  EXPECT_NEAR(fit->slope, -0.75, 1e-12);
}

TEST(ChiSquare, PerfectFitAndPooling) {
  const std::vector<std::uint64_t> obs{250, 250, 500};
  const std::vector<double> probs{0.25, 0.25, 0.5};
  const auto r = chi_square_gof(obs, probs);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.dof, 2u);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);

  // Expected 90, 3, 3, 4: the three small cells pool into one of 10.
  const std::vector<std::uint64_t> sparse{90, 3, 3, 4};
  const std::vector<double> sprobs{0.9, 0.03, 0.03, 0.04};
  const auto pooled = chi_square_gof(sparse, sprobs);
  EXPECT_EQ(pooled.cells, 2u);
  EXPECT_EQ(pooled.dof, 1u);
  EXPECT_NEAR(pooled.statistic, 0.0, 1e-12);
}

TEST(ChiSquare, KnownPValue) {
  // Statistic 4 with one degree of freedom: p = erfc(sqrt(2)).
  const std::vector<std::uint64_t> obs{60, 40};
  const std::vector<double> probs{0.5, 0.5};
  const auto r = chi_square_gof(obs, probs);
  EXPECT_NEAR(r.statistic, 4.0, 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(2.0)), 1e-12);
}

TEST(Wilson, Intervals) {
  const auto half = wilson_interval(50, 100);
  EXPECT_NEAR(half.lo, 0.4038, 1e-4);
  EXPECT_NEAR(half.hi, 0.5962, 1e-4);
  const auto none = wilson_interval(0, 10);
  EXPECT_EQ(none.lo, 0.0);
  EXPECT_GT(none.hi, 0.0);
  const auto one = wilson_interval(0, 1);
  EXPECT_GT(one.hi - one.lo, 0.75);
}
