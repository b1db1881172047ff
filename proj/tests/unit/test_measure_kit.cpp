#include <cmath>

#include <gtest/gtest.h>

#include "deltrace/error.hpp"
#include "deltrace/measure_kit.hpp"
#include "inequality_suite.hpp"

using namespace deltrace;

namespace {

DiscreteMeasure<int> bern(double d) { return bernoulli_measure(d); }

}  // namespace

TEST(DiscreteMeasure, StoresOnlyPositiveMass) {
  DiscreteMeasure<int> m;
  m.add(1, 0.0);
  m.add(2, 0.25);
  m.add(2, 0.25);
  EXPECT_EQ(m.support_size(), 1u);
  EXPECT_DOUBLE_EQ(m.mass(2), 0.5);
  EXPECT_EQ(m.mass(7), 0.0);
  EXPECT_THROW(m.add(3, -0.1), Error);
  EXPECT_THROW(m.add(3, INFINITY), Error);
  EXPECT_FALSE(m.is_probability());
  EXPECT_TRUE(m.normalized().is_probability());
}

TEST(Tv, Basics) {
  EXPECT_EQ(tv(bern(0.3), bern(0.3)), 0.0);
  EXPECT_NEAR(tv(bern(0.0), bern(0.3)), 0.3, 1e-15);
  EXPECT_EQ(tv(DiscreteMeasure<int>::point_mass(1), DiscreteMeasure<int>::point_mass(2)), 1.0);
}

TEST(Tv, EqualsLargestEventGap) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto mu = suite::random_measure(rng, true, 10), nu = suite::random_measure(rng, true, 10);
    double best = 0.0;
    for (const auto& [k, v] : mu) best += std::max(0.0, v - nu.mass(k));
    EXPECT_NEAR(tv(mu, nu), best, 1e-12);
  }
}

TEST(HellingerSq, Basics) {
  EXPECT_EQ(hellinger_sq(bern(0.4), bern(0.4)), 0.0);
  EXPECT_NEAR(hellinger_sq(bern(0.0), bern(1.0)), 2.0, 1e-15);
  EXPECT_NEAR(hellinger_sq(bern(0.0), bern(0.19)), 0.2, 1e-12);
}

TEST(LinfRelativeDeviation, Basics) {
  EXPECT_EQ(linf_relative_deviation(bern(0.5), bern(0.5)).value, 0.0);
  EXPECT_NEAR(linf_relative_deviation(bern(0.6), bern(0.5)).value, 0.2, 1e-12);
  EXPECT_NEAR(linf_relative_deviation(bern(0.5), bern(0.0)).value, 0.5, 1e-12);
}

TEST(HellingerSqBound, Basics) {
  EXPECT_EQ(hellinger_sq_bound(bern(0.3), bern(0.3)), 0.0);
  EXPECT_NEAR(hellinger_sq_bound(bern(0.6), bern(0.5)), 0.04, 1e-12);
  EXPECT_NEAR(hellinger_sq(bern(0.6), bern(0.5)),
              std::pow(std::sqrt(0.6) - std::sqrt(0.5), 2) + std::pow(std::sqrt(0.4) - std::sqrt(0.5), 2), 1e-15);
  EXPECT_NEAR(hellinger_sq_bound(bern(0.5), bern(0.0)), 1.0, 1e-12);
  EXPECT_NEAR(hellinger_sq(bern(0.5), bern(0.0)), std::pow(1 - std::sqrt(0.5), 2) + 0.5, 1e-12);
}

TEST(Pushforward, Basics) {
  const auto m = bern(0.3);
  const auto id = pushforward(m, [](int k) { return k; });
  EXPECT_EQ(id.masses(), m.masses());
  const auto constant = pushforward(m, [](int) { return 9; });
  EXPECT_EQ(constant.support_size(), 1u);
  EXPECT_NEAR(constant.mass(9), 1.0, 1e-15);
  const auto flipped = pushforward(m, [](int k) { return 1 - k; });
  EXPECT_NEAR(flipped.mass(1), 0.7, 1e-15);
  EXPECT_NEAR(flipped.mass(0), 0.3, 1e-15);
}

TEST(Product, MassesMultiply) {
  const auto p = product(bern(0.25), bern(0.5));
  EXPECT_EQ(p.support_size(), 4u);
  EXPECT_DOUBLE_EQ(p.mass({1, 1}), 0.125);
  EXPECT_NEAR(p.total(), 1.0, 1e-15);
}

TEST(SamplesSufficient, Values) {
  EXPECT_EQ(samples_sufficient(0.1, 0.05), 738u);
  EXPECT_EQ(samples_sufficient(0.5, 0.1), 24u);
  std::uint64_t prev = UINT64_MAX;
  for (double d = 0.05; d <= 1.0; d += 0.05) {
    const auto m = samples_sufficient(d, 0.1);
    EXPECT_LE(m, prev);
    prev = m;
  }
  EXPECT_THROW(samples_sufficient(0.0, 0.1), Error);
}

TEST(SamplesLowerBound, Values) {
  EXPECT_EQ(samples_lower_bound_hellinger(0.01, std::exp(-1.0)), 11u);
  EXPECT_EQ(samples_lower_bound_hellinger(0.25, std::exp(-1.0)), 0u);
  EXPECT_EQ(samples_lower_bound_hellinger(0.1, 1.0), 0u);
  try {
    samples_lower_bound_hellinger(0.3, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolated);
  }
}

TEST(IndistinguishabilityFloor, Values) {
  EXPECT_EQ(indistinguishability_floor(0, bern(0.1), bern(0.7)), 1.0);
  EXPECT_EQ(indistinguishability_floor(50, bern(0.4), bern(0.4)), 1.0);
  EXPECT_NEAR(indistinguishability_floor(1, bern(0.0), bern(0.5)), 0.5, 1e-15);
  EXPECT_EQ(indistinguishability_floor(3, bern(0.0), bern(1.0)), 0.0);
}

TEST(IndistinguishabilityFloor, LowerBoundsProductOverlap) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto mu = suite::random_measure(rng, true, 4), nu = suite::random_measure(rng, true, 4);
    const auto mu2 = product(mu, mu), nu2 = product(nu, nu);
    EXPECT_LE(indistinguishability_floor(2, mu, nu), 1.0 - tv(mu2, nu2) + 1e-12);
  }
}

TEST(MeanGapBound, Values) {
  DiscreteMeasure<double> a = DiscreteMeasure<double>::point_mass(0.0);
  auto same = mean_gap_bound(a, a);
  EXPECT_EQ(same.lhs, 0.0);
  EXPECT_EQ(same.rhs, 0.0);

  auto apart = mean_gap_bound(a, DiscreteMeasure<double>::point_mass(0.5));
  EXPECT_NEAR(apart.lhs, 0.5, 1e-15);
  EXPECT_NEAR(apart.rhs, 4.0 * std::sqrt(std::log(2.0)), 1e-12);

  DiscreteMeasure<double> u{{0.0, 0.5}, {0.2, 0.5}}, v{{0.0, 0.4}, {0.2, 0.6}};
  auto g = mean_gap_bound(u, v);
  EXPECT_NEAR(g.lhs, 0.02, 1e-15);
  EXPECT_NEAR(g.tv, 0.1, 1e-15);
  EXPECT_NEAR(g.rhs, 0.4 * std::sqrt(std::log(20.0)), 1e-12);
  EXPECT_LE(g.lhs, g.rhs);
}

TEST(MeanGapBound, RejectsHeavyTails) {
  DiscreteMeasure<double> heavy{{0.0, 0.5}, {3.0, 0.5}};
  try {
    mean_gap_bound(heavy, DiscreteMeasure<double>::point_mass(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolated);
  }
}

TEST(InequalitySuite, NoViolationsOnRandomMeasures) {
  const auto tally = suite::run(300, 12345);
  for (const auto& [name, count] : tally.violations) EXPECT_EQ(count, 0u) << name;
}
