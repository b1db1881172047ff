#pragma once

#include <cmath>
#include <cstddef>

namespace deltrace {

// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  CompensatedSum& operator+=(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.carry_);
    return *this;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Running first and second moments of a sample, accumulated with compensation
// so that chunked reductions in a fixed order are reproducible.
struct MomentAccumulator {
  CompensatedSum sum;
  CompensatedSum sum_sq;
  std::size_t count = 0;

  void add(double x) noexcept {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  MomentAccumulator& operator+=(const MomentAccumulator& other) noexcept {
    sum += other.sum;
    sum_sq += other.sum_sq;
    count += other.count;
    return *this;
  }
  double mean() const noexcept { return count ? sum.value() / static_cast<double>(count) : 0.0; }
  // Unbiased sample variance, clamped at zero.
  double variance() const noexcept {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double m = sum.value() / n;
    const double v = (sum_sq.value() - n * m * m) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }
  double standard_error() const noexcept {
    return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

}  // namespace deltrace
