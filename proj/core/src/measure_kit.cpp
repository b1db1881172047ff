#include "deltrace/measure_kit.hpp"

#include <algorithm>
#include <vector>

namespace deltrace {

std::uint64_t samples_sufficient(double delta, double epsilon) {
  require(delta > 0.0 && delta <= 1.0, ErrorKind::InvalidParameter, "delta must lie in (0, 1]");
  require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::InvalidParameter, "epsilon must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::ceil(2.0 / (delta * delta) * std::log(2.0 / epsilon)));
}

std::uint64_t samples_lower_bound_hellinger(double h2, double epsilon) {
  require(h2 > 0.0, ErrorKind::InvalidParameter, "squared Hellinger distance must be positive");
  require(h2 <= 0.25, ErrorKind::PreconditionViolated, "the bound needs squared Hellinger distance at most 1/4");
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorKind::InvalidParameter, "epsilon must lie in (0, 1]");
  return static_cast<std::uint64_t>(std::floor(std::log(1.0 / epsilon) / (9.0 * h2)));
}

double indistinguishability_floor(std::uint64_t m, double d) {
  require(d >= 0.0 && d <= 1.0, ErrorKind::InvalidParameter, "TV distance must lie in [0, 1]");
  if (m == 0 || d == 0.0) return 1.0;
  if (d == 1.0) return 0.0;
  const double alpha = -std::log1p(-d) / d;
  return std::exp(-alpha * static_cast<double>(m) * d);
}

bool satisfies_subgaussian_tail(const DiscreteMeasure<double>& law) {
  // P[|X| > r] is largest just below each atom magnitude a, where it equals
  // P[|X| >= a]; 2 exp(-r^2) is continuous there.
  std::vector<std::pair<double, double>> atoms;
  for (const auto& [value, mass] : law) atoms.emplace_back(std::fabs(value), mass);
  std::sort(atoms.begin(), atoms.end(), [](auto& a, auto& b) { return a.first > b.first; });
  CompensatedSum at_least;
  for (std::size_t i = 0; i < atoms.size();) {
    const double a = atoms[i].first;
    while (i < atoms.size() && atoms[i].first == a) at_least += atoms[i++].second;
    if (a > 0.0 && at_least.value() > 2.0 * std::exp(-a * a) * (1.0 + 1e-12)) return false;
  }
  return true;
}

MeanGap mean_gap_bound(const DiscreteMeasure<double>& mu, const DiscreteMeasure<double>& nu) {
  require(mu.is_probability(1e-9) && nu.is_probability(1e-9), ErrorKind::InvalidParameter,
          "mean gap bound needs probability laws");
  require(satisfies_subgaussian_tail(mu) && satisfies_subgaussian_tail(nu), ErrorKind::PreconditionViolated,
          "laws must satisfy P[|X| > r] <= 2 exp(-r^2)");
  CompensatedSum ex, ey;
  for (const auto& [v, m] : mu) ex += v * m;
  for (const auto& [v, m] : nu) ey += v * m;
  MeanGap out;
  out.tv = std::min(1.0, tv(mu, nu));
  out.lhs = std::fabs(ex.value() - ey.value());
  out.rhs = out.tv > 0.0 ? 4.0 * out.tv * std::sqrt(std::log(2.0 / out.tv)) : 0.0;
  return out;
}

}  // namespace deltrace
