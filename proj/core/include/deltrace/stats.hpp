#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace deltrace {

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // zero with two points
  std::size_t points = 0;
};

// Least squares y = intercept + slope x. Empty when fewer than two points or
// all x coincide.
std::optional<OlsFit> ols(std::span<const double> xs, std::span<const double> ys);

// Fit of log y against log x.
std::optional<OlsFit> loglog_fit(std::span<const double> xs, std::span<const double> ys);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;  // after pooling
};

// Pearson goodness of fit of observed counts against cell probabilities.
// Cells with expected count below `min_expected` are pooled together (and with
// the next smallest cell if the pool is still too small).
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                               double min_expected = 5.0);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

}  // namespace deltrace
