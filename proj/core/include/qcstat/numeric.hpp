#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace qcstat {

// Compensated (Neumaier) summation. Boltzmann sums mix terms spanning many
// orders of magnitude and the acceptance identities are checked at 1e-10,
// so plain accumulation is not enough.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
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

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// log(sum_i exp(x_i)); returns -inf for an empty range.
inline double log_sum_exp(std::span<const double> xs) noexcept {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : xs) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  CompensatedSum acc;
  for (double x : xs) acc += std::exp(x - top);
  return top + std::log(acc.value());
}

inline double log_add_exp(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (!std::isfinite(a)) return a;
  return a + std::log1p(std::exp(b - a));
}

// Log-spaced grid from `lo` to `hi` (inclusive) with roughly
// `per_decade` points per decade; the endpoints are always hit exactly.
std::vector<double> log_grid(double lo, double hi, int per_decade);

// Geometric sequence start, start*ratio, ... with `count` entries.
std::vector<double> geometric_sequence(double start, double ratio,
                                       std::size_t count);

}  // namespace qcstat
