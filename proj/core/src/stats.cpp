#include "deltrace/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "deltrace/error.hpp"
#include "deltrace/numeric.hpp"

namespace deltrace {

std::optional<OlsFit> ols(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size(), ErrorKind::InvalidParameter, "OLS needs paired samples");
  const std::size_t n = xs.size();
  if (n < 2) return std::nullopt;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  OlsFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - fit.intercept - fit.slope * xs[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

std::optional<OlsFit> loglog_fit(std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] > 0.0 && ys[i] > 0.0, ErrorKind::InvalidParameter, "log-log fit needs positive values");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  return ols(lx, ly);
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                               double min_expected) {
  require(observed.size() == probabilities.size(), ErrorKind::InvalidParameter,
          "chi-square needs one probability per cell");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  require(total > 0.0, ErrorKind::InvalidParameter, "chi-square needs at least one observation");

  struct Cell {
    double expected;
    double observed;
  };
  std::vector<Cell> cells;
  Cell pool{0.0, 0.0};
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probabilities[i] * total;
    const double o = static_cast<double>(observed[i]);
    if (e < min_expected) {
      pool.expected += e;
      pool.observed += o;
    } else {
      cells.push_back({e, o});
    }
  }
  if (pool.expected > 0.0 || pool.observed > 0.0) {
    if (pool.expected < min_expected && !cells.empty()) {
      auto smallest = std::min_element(cells.begin(), cells.end(),
                                       [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
      smallest->expected += pool.expected;
      smallest->observed += pool.observed;
    } else {
      cells.push_back(pool);
    }
  }

  ChiSquareResult out;
  out.cells = cells.size();
  for (const auto& c : cells) {
    if (c.expected > 0.0) {
      const double d = c.observed - c.expected;
      out.statistic += d * d / c.expected;
    } else if (c.observed > 0.0) {
      out.statistic = INFINITY;
    }
  }
  out.dof = cells.size() > 1 ? cells.size() - 1 : 0;
  if (out.dof == 0) {
    out.p_value = 1.0;
  } else if (std::isinf(out.statistic)) {
    out.p_value = 0.0;
  } else {
    out.p_value = boost::math::gamma_q(0.5 * static_cast<double>(out.dof), 0.5 * out.statistic);
  }
  return out;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace deltrace
