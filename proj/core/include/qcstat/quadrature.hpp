#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qcstat {

// A value with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;

  double relative_error() const noexcept;
};

struct QuadratureOptions {
  double relative_tolerance = 1e-12;
  unsigned max_depth = 40;            // bisections of any one piece
  std::size_t max_intervals = 2000;   // total work bound
};

// Globally adaptive Gauss-Kronrod (15/31): the piece with the largest error
// estimate is bisected until the summed estimate meets the tolerance or the
// work bound is hit. The returned error is the summed Kronrod estimate;
// callers decide whether it is acceptable.
Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureOptions& options = {});

// Sum of integrate() over consecutive breakpoints (kinks, turning points).
Estimate integrate_piecewise(const std::function<double(double)>& f,
                             std::span<const double> breakpoints,
                             const QuadratureOptions& options = {});

}  // namespace qcstat
