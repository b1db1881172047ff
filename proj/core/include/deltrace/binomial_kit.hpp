#pragma once

#include <cstdint>

namespace deltrace {

struct BinomialSpec {
  std::int64_t n = 0;
  double s = 0.5;

  BinomialSpec(std::int64_t trials, double success);
};

double binom_pmf(const BinomialSpec& spec, std::int64_t k);
double binom_log_pmf(const BinomialSpec& spec, std::int64_t k);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

// lhs = |P[Bin(n,s)=k] - P[Bin(n-1,s)=k]| evaluated by direct subtraction;
// rhs = |ns - k| / (n(1-s)) * P[Bin(n,s)=k]. The two agree identically.
BoundCheck binom_shift_gap(const BinomialSpec& spec, std::int64_t k);

// lhs = tv(Bin(n,s), Bin(n-1,s)); rhs = sqrt(s / (4n(1-s))).
BoundCheck binom_tv_exact_and_bound(const BinomialSpec& spec);

struct TailCheck {
  double tail = 0.0;   // P[|X - ns| > c sqrt(n log n)], summed exactly
  double bound = 0.0;  // 2 n^{-2c^2}
  double half_width = 0.0;
  bool degenerate = false;  // n = 1: log n = 0 and the window is a single point
};

TailCheck binom_tail_check(const BinomialSpec& spec, double c);

enum class RatioGrouping { Atom, LevelSet };

// max |1 - B_n(k_l) B_{n-1}(k_r) / (B_{n-1}(k_l) B_n(k_r))| over k_l, k_r in the
// window |k - ns| <= C0 sqrt(n log n) (clipped to k <= n-1). LevelSet groups
// the atoms of equal |k - ns| before forming the ratio.
double ratio_deviation(std::int64_t n, double s, double c0, RatioGrouping grouping = RatioGrouping::Atom);

}  // namespace deltrace
