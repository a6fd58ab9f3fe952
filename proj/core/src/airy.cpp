#include "qcstat/airy.hpp"

#include <cmath>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/constants/constants.hpp>

#include "qcstat/error.hpp"

namespace qcstat {

namespace {

constexpr std::size_t kNewtonBelow = 64;
// The series are asymptotic: for the first few zeros the higher terms make
// things worse, so Newton starts from the two-term approximation instead.
constexpr std::size_t kShortSeriesBelow = 4;

double series_t(double t, bool short_form) {
  const double s = 1.0 / (t * t);
  if (short_form) return std::cbrt(t * t) * (1.0 + s * 5.0 / 48.0);
  const double poly =
      1.0 +
      s * (5.0 / 48.0 +
           s * (-5.0 / 36.0 +
                s * (77125.0 / 82944.0 +
                     s * (-108056875.0 / 6967296.0 +
                          s * (162375596875.0 / 334430208.0)))));
  return std::cbrt(t * t) * poly;
}

double series_u(double t, bool short_form) {
  const double s = 1.0 / (t * t);
  if (short_form) return std::cbrt(t * t) * (1.0 - s * 7.0 / 48.0);
  const double poly =
      1.0 +
      s * (-7.0 / 48.0 +
           s * (35.0 / 288.0 +
                s * (-181223.0 / 207360.0 +
                     s * (18683371.0 / 1244160.0 +
                          s * (-91145884361.0 / 191102976.0)))));
  return std::cbrt(t * t) * poly;
}

}  // namespace

double airy_ai_zero(std::size_t k) {
  if (k == 0) throw ArgumentError("airy_ai_zero: index starts at 1");
  using boost::math::constants::pi;
  const double t = 3.0 * pi<double>() * (4.0 * static_cast<double>(k) - 1.0) / 8.0;
  double x = -series_t(t, k < kShortSeriesBelow);
  if (k < kNewtonBelow) {
    for (int i = 0; i < 8; ++i) {
      const double step = boost::math::airy_ai(x) / boost::math::airy_ai_prime(x);
      x -= step;
      if (std::abs(step) <= 1e-16 * std::abs(x)) break;
    }
  }
  return x;
}

double airy_ai_prime_zero(std::size_t k) {
  if (k == 0) throw ArgumentError("airy_ai_prime_zero: index starts at 1");
  using boost::math::constants::pi;
  const double t = 3.0 * pi<double>() * (4.0 * static_cast<double>(k) - 3.0) / 8.0;
  double x = -series_u(t, k < kShortSeriesBelow);
  if (k < kNewtonBelow) {
    for (int i = 0; i < 8; ++i) {
      // Ai''(x) = x Ai(x)
      const double step =
          boost::math::airy_ai_prime(x) / (x * boost::math::airy_ai(x));
      x -= step;
      if (std::abs(step) <= 1e-16 * std::abs(x)) break;
    }
  }
  return x;
}

}  // namespace qcstat
