#include "deltrace/binomial_kit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "deltrace/error.hpp"
#include "deltrace/numeric.hpp"

namespace deltrace {

BinomialSpec::BinomialSpec(std::int64_t trials, double success) : n(trials), s(success) {
  require(trials >= 0, ErrorKind::InvalidParameter, "binomial trial count must be nonnegative");
  require(success > 0.0 && success < 1.0, ErrorKind::InvalidParameter,
          "binomial success probability must lie in (0, 1)");
}

double binom_pmf(const BinomialSpec& spec, std::int64_t k) {
  if (k < 0 || k > spec.n) return 0.0;
  if (spec.n == 0) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(spec.n), spec.s);
  return boost::math::pdf(dist, static_cast<double>(k));
}

double binom_log_pmf(const BinomialSpec& spec, std::int64_t k) {
  if (k < 0 || k > spec.n) return -INFINITY;
  const double n = static_cast<double>(spec.n);
  const double kk = static_cast<double>(k);
  return std::lgamma(n + 1) - std::lgamma(kk + 1) - std::lgamma(n - kk + 1) + kk * std::log(spec.s) +
         (n - kk) * std::log1p(-spec.s);
}

BoundCheck binom_shift_gap(const BinomialSpec& spec, std::int64_t k) {
  require(spec.n >= 1, ErrorKind::InvalidParameter, "shift gap needs n >= 1");
  require(k >= 0 && k <= spec.n, ErrorKind::InvalidParameter, "k must lie in [0, n]");
  const BinomialSpec prev(spec.n - 1, spec.s);
  const double pk = binom_pmf(spec, k);
  const double n = static_cast<double>(spec.n);
  return {std::fabs(pk - binom_pmf(prev, k)),
          std::fabs(n * spec.s - static_cast<double>(k)) / (n * (1.0 - spec.s)) * pk};
}

BoundCheck binom_tv_exact_and_bound(const BinomialSpec& spec) {
  require(spec.n >= 1, ErrorKind::InvalidParameter, "TV check needs n >= 1");
  const BinomialSpec prev(spec.n - 1, spec.s);
  CompensatedSum sum;
  for (std::int64_t k = 0; k <= spec.n; ++k) sum += std::fabs(binom_pmf(spec, k) - binom_pmf(prev, k));
  const double n = static_cast<double>(spec.n);
  return {0.5 * sum.value(), std::sqrt(spec.s / (4.0 * n * (1.0 - spec.s)))};
}

TailCheck binom_tail_check(const BinomialSpec& spec, double c) {
  require(spec.n >= 1, ErrorKind::InvalidParameter, "tail check needs n >= 1");
  require(c > 0.0, ErrorKind::InvalidParameter, "tail constant c must be positive");
  const double n = static_cast<double>(spec.n);
  const double centre = n * spec.s;
  TailCheck out;
  out.half_width = c * std::sqrt(n * std::log(n));
  out.degenerate = spec.n == 1;
  out.bound = 2.0 * std::pow(n, -2.0 * c * c);
  CompensatedSum tail;
  for (std::int64_t k = 0; k <= spec.n; ++k) {
    if (std::fabs(static_cast<double>(k) - centre) > out.half_width) tail += binom_pmf(spec, k);
  }
  out.tail = tail.value();
  return out;
}

double ratio_deviation(std::int64_t n, double s, double c0, RatioGrouping grouping) {
  require(c0 > 0.0, ErrorKind::InvalidParameter, "window constant must be positive");
  require(n >= 2, ErrorKind::DegenerateWindow, "ratio window is degenerate for n < 2 (log n vanishes)");
  const double nn = static_cast<double>(n);
  const double centre = nn * s;
  const double half = c0 * std::sqrt(nn * std::log(nn));
  const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(centre - half)));
  const auto hi = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::floor(centre + half)));
  require(lo <= hi, ErrorKind::DegenerateWindow, "ratio window contains no admissible k");

  const BinomialSpec cur(n, s), prev(n - 1, s);
  if (grouping == RatioGrouping::Atom) {
    // B_n(k)/B_{n-1}(k) = n(1-s)/(n-k) is monotone in k, so the extreme ratios
    // come from the window endpoints.
    auto log_f = [&](std::int64_t k) { return binom_log_pmf(cur, k) - binom_log_pmf(prev, k); };
    const double spread = log_f(hi) - log_f(lo);
    return std::max(std::fabs(std::expm1(spread)), std::fabs(std::expm1(-spread)));
  }

  // Level sets {k : |k - ns| = d}; at most two atoms each.
  std::map<double, std::pair<double, double>> levels;
  for (std::int64_t k = lo; k <= hi; ++k) {
    auto& [bn, bprev] = levels[std::fabs(static_cast<double>(k) - centre)];
    bn += binom_pmf(cur, k);
    bprev += binom_pmf(prev, k);
  }
  std::vector<double> f;
  f.reserve(levels.size());
  for (const auto& [d, masses] : levels) f.push_back(masses.first / masses.second);
  const auto [mn, mx] = std::minmax_element(f.begin(), f.end());
  return std::max(std::fabs(1.0 - *mx / *mn), std::fabs(1.0 - *mn / *mx));
}

}  // namespace deltrace
