#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "deltrace/error.hpp"
#include "deltrace/measure.hpp"
#include "deltrace/numeric.hpp"

namespace deltrace {

// sup over the support of nu of |mu(x)/nu(x) - 1|. Finite for finite supports.
struct RelDeviation {
  double value = 0.0;
};

// Half the l1 distance over the union of supports.
template <class Key>
double tv(const DiscreteMeasure<Key>& mu, const DiscreteMeasure<Key>& nu) {
  CompensatedSum sum;
  for_each_union(mu, nu, [&](const Key&, double a, double b) { sum += std::fabs(a - b); });
  return 0.5 * sum.value();
}

template <class Key>
double hellinger_sq(const DiscreteMeasure<Key>& mu, const DiscreteMeasure<Key>& nu) {
  CompensatedSum sum;
  for_each_union(mu, nu, [&](const Key&, double a, double b) {
    const double d = std::sqrt(a) - std::sqrt(b);
    sum += d * d;
  });
  return sum.value();
}

template <class Key>
RelDeviation linf_relative_deviation(const DiscreteMeasure<Key>& mu, const DiscreteMeasure<Key>& nu) {
  double worst = 0.0;
  for (const auto& [key, b] : nu) worst = std::max(worst, std::fabs(mu.mass(key) / b - 1.0));
  return {worst};
}

// mu-mass sitting where nu vanishes.
template <class Key>
double mass_off_support(const DiscreteMeasure<Key>& mu, const DiscreteMeasure<Key>& nu) {
  CompensatedSum sum;
  for (const auto& [key, a] : mu)
    if (!nu.contains(key)) sum += a;
  return sum.value();
}

// mu{nu = 0} + 2 |mu/nu - 1|_inf tv(mu, nu); always at least hellinger_sq(mu, nu).
template <class Key>
double hellinger_sq_bound(const DiscreteMeasure<Key>& mu, const DiscreteMeasure<Key>& nu) {
  return mass_off_support(mu, nu) + 2.0 * linf_relative_deviation(mu, nu).value * tv(mu, nu);
}

template <class Key, class Map>
auto pushforward(const DiscreteMeasure<Key>& mu, Map&& phi) {
  using Image = std::decay_t<decltype(phi(std::declval<const Key&>()))>;
  DiscreteMeasure<Image> out;
  for (const auto& [key, mass] : mu) out.add(phi(key), mass);
  return out;
}

template <class A, class B>
DiscreteMeasure<std::pair<A, B>> product(const DiscreteMeasure<A>& mu, const DiscreteMeasure<B>& nu) {
  DiscreteMeasure<std::pair<A, B>> out;
  for (const auto& [a, ma] : mu)
    for (const auto& [b, mb] : nu) out.add({a, b}, ma * mb);
  return out;
}

// ceil((2/delta^2) log(2/epsilon)) samples let the Hoeffding mean test separate
// two laws at TV distance delta with error at most epsilon.
std::uint64_t samples_sufficient(double delta, double epsilon);

// floor(log(1/epsilon) / (9 h2)); fewer samples leave 1 - tv(mu^m, nu^m) >= epsilon.
// Requires 0 < h2 <= 1/4.
std::uint64_t samples_lower_bound_hellinger(double h2, double epsilon);

// exp(-alpha m d) with alpha = -log(1 - d)/d, i.e. (1 - d)^m for d = tv(mu, nu).
double indistinguishability_floor(std::uint64_t m, double tv_distance);

template <class Key>
double indistinguishability_floor(std::uint64_t m, const DiscreteMeasure<Key>& mu,
                                  const DiscreteMeasure<Key>& nu) {
  require(mu.is_probability(1e-9) && nu.is_probability(1e-9), ErrorKind::InvalidParameter,
          "indistinguishability floor needs probability measures");
  return indistinguishability_floor(m, std::min(1.0, tv(mu, nu)));
}

struct MeanGap {
  double lhs = 0.0;  // |E X - E Y|
  double rhs = 0.0;  // 4 d sqrt(log(2/d)), zero when d = 0
  double tv = 0.0;
};

// Throws PreconditionViolated unless P[|X| > r] <= 2 exp(-r^2) for every r > 0
// under both laws.
MeanGap mean_gap_bound(const DiscreteMeasure<double>& mu, const DiscreteMeasure<double>& nu);

bool satisfies_subgaussian_tail(const DiscreteMeasure<double>& law);

}  // namespace deltrace
