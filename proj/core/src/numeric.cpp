#include "qcstat/numeric.hpp"

#include <algorithm>

#include "qcstat/error.hpp"

namespace qcstat {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
    throw ArgumentError("log_grid: need 0 < lo <= hi and per_decade >= 1");
  }
  if (hi == lo) return {lo};
  const double decades = std::log10(hi / lo);
  const auto intervals = static_cast<std::size_t>(
      std::max(1.0, std::round(decades * per_decade)));
  std::vector<double> grid(intervals + 1);
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) {
    grid[i] = std::exp(log_lo + step * static_cast<double>(i));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> geometric_sequence(double start, double ratio,
                                       std::size_t count) {
  if (!(start > 0.0) || !(ratio > 0.0)) {
    throw ArgumentError("geometric_sequence: start and ratio must be positive");
  }
  std::vector<double> seq(count);
  double value = start;
  for (auto& x : seq) {
    x = value;
    value *= ratio;
  }
  return seq;
}

}  // namespace qcstat
