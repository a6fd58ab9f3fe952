#include "qcstat/quadrature.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcstat/error.hpp"
#include "qcstat/numeric.hpp"

namespace qcstat {

double Estimate::relative_error() const noexcept {
  if (value == 0.0) return error == 0.0 ? 0.0 : INFINITY;
  return std::abs(error / value);
}

Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureOptions& options) {
  if (!(b >= a)) throw ArgumentError("integrate: need a <= b");
  if (a == b) return {0.0, 0.0};
  struct Piece {
    double a, b, value, error;
    unsigned depth;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto apply = [&](double lo, double hi, unsigned depth) {
    double error = 0.0;
    const double value = Rule::integrate(f, lo, hi, 0, 0.0, &error);
    if (!std::isfinite(value)) {
      throw IntegrabilityError("integrate: non-finite integral on [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
    }
    return Piece{lo, hi, value, error, depth};
  };
  // Pieces that may still be split live in the heap; the rest are settled.
  std::priority_queue<Piece> open;
  std::vector<Piece> settled;
  open.push(apply(a, b, 0));
  std::size_t intervals = 1;
  const auto totals = [&] {
    CompensatedSum value;
    double error = 0.0;
    for (const auto& p : settled) {
      value += p.value;
      error += p.error;
    }
    auto copy = open;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    return Estimate{value.value(), error};
  };
  Estimate total = totals();
  while (!open.empty() && intervals < options.max_intervals &&
         total.error > options.relative_tolerance * std::abs(total.value)) {
    const Piece worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= options.max_depth || !(mid > worst.a && mid < worst.b)) {
      settled.push_back(worst);
      continue;
    }
    const Piece left = apply(worst.a, mid, worst.depth + 1);
    const Piece right = apply(mid, worst.b, worst.depth + 1);
    total.value += left.value + right.value - worst.value;
    total.error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++intervals;
  }
  // Re-sum from scratch: the running update drifts by rounding.
  return totals();
}

Estimate integrate_piecewise(const std::function<double(double)>& f,
                             std::span<const double> breakpoints,
                             const QuadratureOptions& options) {
  if (breakpoints.size() < 2) {
    throw ArgumentError("integrate_piecewise: need at least two breakpoints");
  }
  CompensatedSum value;
  double error = 0.0;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const Estimate piece = integrate(f, breakpoints[i - 1], breakpoints[i], options);
    value += piece.value;
    error += piece.error;
  }
  return {value.value(), error};
}

}  // namespace qcstat
