#include "qcstat/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "qcstat/airy.hpp"
#include "qcstat/error.hpp"
#include "qcstat/numeric.hpp"
#include "qcstat/quadrature.hpp"
#include "qcstat/tridiagonal.hpp"

namespace qcstat {

namespace {

using boost::math::constants::pi;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_planck(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ArgumentError("Planck parameter h must be positive");
  }
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ArgumentError("inverse temperature beta must be positive");
  }
}

double ball_volume(int n, double radius) {
  const double half = 0.5 * n;
  return std::pow(pi<double>(), half) * std::pow(radius, n) /
         std::tgamma(half + 1.0);
}

double sphere_area(int n) {
  const double half = 0.5 * n;
  return 2.0 * std::pow(pi<double>(), half) / std::tgamma(half);
}

// log Gamma(s, x), the upper incomplete gamma function, without underflow.
double log_upper_gamma(double s, double x) {
  if (x <= 0.0) return std::lgamma(s);
  if (x < 40.0 || x < s + 1.0) {
    return std::log(boost::math::tgamma(s, x));
  }
  // Continued fraction (modified Lentz) for Gamma(s, x) e^x x^-s.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return -x + s * std::log(x) + std::log(h);
}

// Phase-space volume of {H <= E} divided by (2 pi h)^N.
double weyl_homogeneous(const Potential& p, double h, double energy) {
  const int n = p.dimension();
  const double nu = p.exponent();
  const double m = p.mass();
  const double r_max = std::pow(energy, 1.0 / nu);
  const auto f = [&](double r) {
    const double kinetic = energy - std::pow(r, nu);
    if (kinetic <= 0.0) return 0.0;
    return ball_volume(n, std::sqrt(2.0 * m * kinetic)) * std::pow(r, n - 1);
  };
  const Estimate radial = integrate(f, 0.0, r_max, {1e-9, 30});
  return sphere_area(n) * radial.value / std::pow(2.0 * pi<double>() * h, n);
}

double weyl_tabulated(const Potential& p, double h, double energy) {
  const double m = p.mass();
  const auto f = [&](double x) {
    const double kinetic = energy - p.at(x);
    return kinetic > 0.0 ? std::sqrt(2.0 * m * kinetic) : 0.0;
  };
  const auto& xs = p.sample_x();
  const Estimate action = integrate_piecewise(f, xs, {1e-9, 20});
  return action.value / (pi<double>() * h);
}

// Inverse of weyl_count in the energy.
double weyl_energy(const Potential& p, double h, double count) {
  double lo = 0.0;
  double hi = 1.0;
  while (weyl_count(p, h, hi) < count) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw ResourceError("weyl_energy: no energy reaches the count");
  }
  for (int i = 0; i < 80 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (weyl_count(p, h, mid) < count) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::size_t checked_count(double estimate, std::size_t cap) {
  if (!(estimate < static_cast<double>(cap))) {
    throw ResourceError("spectrum needs about " + std::to_string(estimate) +
                        " levels, above the cap of " + std::to_string(cap));
  }
  return static_cast<std::size_t>(std::ceil(estimate));
}

Spectrum solve_fd_sized(const Potential& potential, double h, std::size_t count,
                        const SolveOptions& options) {
  double top = weyl_energy(potential, h, static_cast<double>(count) + 2.0) * 1.05;
  for (int attempt = 0; attempt < 4; ++attempt) {
    FdGrid grid = auto_fd_grid(potential, h, top, options.fd_resolution);
    grid.points = std::max<std::size_t>({grid.points, 4 * count, 400});
    Spectrum spectrum = solve_fd_1d(potential, h, grid, count,
                                    {options.fd_extrapolate, options.fd_tolerance});
    const double reached = spectrum.levels().back();
    if (reached <= top * (1.0 + 1e-9)) return spectrum;
    top = reached * 1.05;
  }
  throw AccuracyError("finite-difference grid did not settle for the top level",
                      count);
}

}  // namespace

double log_partial_sum(std::span<const double> levels, double beta) {
  if (levels.empty()) return -kInf;
  const double shift = levels.front();
  CompensatedSum acc;
  for (double e : levels) {
    const double x = -beta * (e - shift);
    if (x < -745.0) break;
    acc += std::exp(x);
  }
  return -beta * shift + std::log(acc.value());
}

double log_partial_energy_sum(std::span<const double> levels, double beta) {
  if (levels.empty()) return -kInf;
  const double shift = levels.front();
  CompensatedSum acc;
  for (double e : levels) {
    const double x = -beta * (e - shift);
    if (x < -745.0) break;
    acc += e * std::exp(x);
  }
  return -beta * shift + std::log(acc.value());
}

std::string to_string(SpectrumSource source) {
  switch (source) {
    case SpectrumSource::AnalyticBox:
      return "analytic_box";
    case SpectrumSource::AnalyticHarmonic:
      return "analytic_harmonic";
    case SpectrumSource::AnalyticLinear:
      return "analytic_linear";
    case SpectrumSource::FiniteDifference:
      return "finite_difference";
    case SpectrumSource::Rescaled:
      return "rescaled";
    case SpectrumSource::Explicit:
      return "explicit";
  }
  return "unknown";
}

SpectrumSource parse_spectrum_source(std::string_view text) {
  for (auto s : {SpectrumSource::AnalyticBox, SpectrumSource::AnalyticHarmonic,
                 SpectrumSource::AnalyticLinear, SpectrumSource::FiniteDifference,
                 SpectrumSource::Rescaled, SpectrumSource::Explicit}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown spectrum source '" + std::string(text) + "'");
}

TailModel fit_tail(std::span<const double> levels) {
  const std::size_t m = levels.size();
  if (m < 8) throw ArgumentError("fit_tail: need at least 8 levels");
  const std::size_t first = (3 * m) / 4;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double k = static_cast<double>(m - first);
  for (std::size_t i = first; i < m; ++i) {
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(levels[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  const double slope = (k * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / k;
  return {slope, std::exp(intercept)};
}

Spectrum::Spectrum(std::vector<double> levels, double planck,
                   SpectrumSource source, std::vector<double> errors,
                   bool complete)
    : levels_(std::move(levels)),
      errors_(std::move(errors)),
      planck_(planck),
      source_(source),
      complete_(complete) {
  require_planck(planck_);
  if (levels_.empty()) throw ArgumentError("spectrum: no levels");
  if (!errors_.empty() && errors_.size() != levels_.size()) {
    throw ArgumentError("spectrum: one error estimate per level required");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!(levels_[i] > 0.0) || !std::isfinite(levels_[i])) {
      throw ArgumentError("spectrum: level " + std::to_string(i + 1) +
                          " is not strictly positive");
    }
    if (i > 0 && levels_[i] < levels_[i - 1]) {
      throw ArgumentError("spectrum: levels must be non-decreasing (level " +
                          std::to_string(i + 1) + ")");
    }
  }
  if (!complete_ && levels_.size() >= 8) tail_ = fit_tail(levels_);
}

Spectrum Spectrum::finite(std::vector<double> levels, double planck) {
  std::sort(levels.begin(), levels.end());
  return Spectrum(std::move(levels), planck, SpectrumSource::Explicit, {}, true);
}

std::vector<double> Spectrum::operator_eigenvalues(double mass) const {
  std::vector<double> out(levels_.size());
  const double factor = mass / (planck_ * planck_);
  std::transform(levels_.begin(), levels_.end(), out.begin(),
                 [factor](double e) { return factor * e; });
  return out;
}

Spectrum solve_box(std::span<const double> lengths, double mass, double h,
                   std::size_t count, std::size_t enumeration_cap) {
  require_planck(h);
  if (lengths.empty()) throw ArgumentError("solve_box: no lengths");
  for (double l : lengths) {
    if (!(l > 0.0)) throw ArgumentError("solve_box: lengths must be positive");
  }
  if (!(mass > 0.0)) throw ArgumentError("solve_box: mass must be positive");
  if (count == 0) throw ArgumentError("solve_box: count must be >= 1");

  const int dim = static_cast<int>(lengths.size());
  std::vector<double> inv_sq(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    inv_sq[i] = 1.0 / (lengths[i] * lengths[i]);
  }
  std::vector<double> sums;
  if (dim == 1) {
    sums.resize(count);
    for (std::size_t n = 1; n <= count; ++n) {
      sums[n - 1] = static_cast<double>(n * n) * inv_sq[0];
    }
  } else {
    // rest[i] = smallest contribution of axes i.. (all indices equal to 1).
    std::vector<double> rest(lengths.size() + 1, 0.0);
    for (std::size_t i = lengths.size(); i-- > 0;) rest[i] = rest[i + 1] + inv_sq[i];
    double volume = 1.0;
    for (double l : lengths) volume *= l;
    // Weyl estimate of the sum threshold holding `count` multi-indices.
    double threshold =
        std::pow(static_cast<double>(count) * std::pow(2.0, dim) /
                     (volume * ball_volume(dim, 1.0)),
                 2.0 / dim) * 1.2 + rest[0];
    for (;;) {
      sums.clear();
      std::size_t visited = 0;
      std::vector<long> index(lengths.size(), 1);
      // Odometer over multi-indices with partial sums kept below threshold.
      const auto recurse = [&](auto&& self, std::size_t axis, double partial) -> void {
        for (long n = 1;; ++n) {
          const double s = partial + static_cast<double>(n * n) * inv_sq[axis];
          if (s + rest[axis + 1] > threshold) break;
          if (++visited > enumeration_cap) {
            throw ResourceError("solve_box: multi-index enumeration exceeds cap of " +
                                std::to_string(enumeration_cap));
          }
          if (axis + 1 == lengths.size()) {
            sums.push_back(s);
          } else {
            self(self, axis + 1, s);
          }
        }
      };
      recurse(recurse, 0, 0.0);
      if (sums.size() >= count) break;
      threshold *= 1.5;
    }
    std::nth_element(sums.begin(), sums.begin() + static_cast<long>(count - 1),
                     sums.end());
    sums.resize(count);
    std::sort(sums.begin(), sums.end());
  }
  const double scale = h * h * pi<double>() * pi<double>() / (2.0 * mass);
  for (auto& s : sums) s *= scale;
  return Spectrum(std::move(sums), h, SpectrumSource::AnalyticBox);
}

Spectrum solve_harmonic(int dimension, double mass, double h, std::size_t count) {
  require_planck(h);
  if (dimension < 1) throw ArgumentError("solve_harmonic: dimension must be >= 1");
  if (!(mass > 0.0)) throw ArgumentError("solve_harmonic: mass must be positive");
  if (count == 0) throw ArgumentError("solve_harmonic: count must be >= 1");
  // V = r^2 = (m w^2 / 2) r^2
  const double omega = std::sqrt(2.0 / mass);
  std::vector<double> levels;
  levels.reserve(count);
  for (std::size_t k = 0; levels.size() < count; ++k) {
    // binom(k + N - 1, N - 1), computed incrementally in floating point
    double multiplicity = 1.0;
    for (int j = 1; j < dimension; ++j) {
      multiplicity *= static_cast<double>(k + static_cast<std::size_t>(j)) / j;
    }
    const double e = h * omega * (static_cast<double>(k) + 0.5 * dimension);
    const auto copies = static_cast<std::size_t>(std::llround(multiplicity));
    for (std::size_t c = 0; c < copies && levels.size() < count; ++c) {
      levels.push_back(e);
    }
  }
  return Spectrum(std::move(levels), h, SpectrumSource::AnalyticHarmonic);
}

Spectrum solve_linear(double mass, double h, std::size_t count) {
  require_planck(h);
  if (!(mass > 0.0)) throw ArgumentError("solve_linear: mass must be positive");
  if (count == 0) throw ArgumentError("solve_linear: count must be >= 1");
  const double scale = std::cbrt(h * h / (2.0 * mass));
  std::vector<double> levels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = i / 2 + 1;
    const double zero = (i % 2 == 0) ? airy_ai_prime_zero(k) : airy_ai_zero(k);
    levels[i] = -scale * zero;
  }
  return Spectrum(std::move(levels), h, SpectrumSource::AnalyticLinear);
}

FdGrid FdGrid::symmetric(double half_width, std::size_t points) {
  if (!(half_width > 0.0)) throw ArgumentError("FdGrid: half-width must be > 0");
  return {-half_width, half_width, points};
}

Spectrum solve_fd_1d(const Potential& potential, double h, const FdGrid& grid,
                     std::size_t count, const FdOptions& options) {
  require_planck(h);
  if (potential.dimension() != 1) {
    throw ArgumentError(
        "solve_fd_1d: only one-dimensional potentials are supported");
  }
  if (count == 0) throw ArgumentError("solve_fd_1d: count must be >= 1");
  if (!(grid.upper > grid.lower)) {
    throw ArgumentError("solve_fd_1d: grid needs lower < upper");
  }
  if (grid.points < 4 * count) {
    throw ArgumentError("solve_fd_1d: need points >= 4 * count (got " +
                        std::to_string(grid.points) + " points for " +
                        std::to_string(count) + " levels)");
  }
  if (potential.bounded()) {
    const double slack = 1e-12 * (potential.upper() - potential.lower());
    if (grid.lower < potential.lower() - slack ||
        grid.upper > potential.upper() + slack) {
      throw DomainError("solve_fd_1d: grid extends outside the potential's domain");
    }
  }
  const double m = potential.mass();

  const auto eigenvalues = [&](std::size_t points) {
    const double dx = (grid.upper - grid.lower) / static_cast<double>(points + 1);
    const double kinetic = h * h / (2.0 * m * dx * dx);
    std::vector<double> diag(points);
    std::vector<double> off(points - 1, -kinetic);
    for (std::size_t i = 0; i < points; ++i) {
      const double x = grid.lower + dx * static_cast<double>(i + 1);
      diag[i] = 2.0 * kinetic + potential.at(x);
    }
    return lowest_eigenvalues(SymmetricTridiagonal(std::move(diag), std::move(off)),
                              count);
  };

  const std::vector<double> coarse = eigenvalues(grid.points);
  const std::vector<double> fine = eigenvalues(2 * grid.points + 1);

  std::vector<double> levels(count);
  std::vector<double> errors(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double diff = std::abs(coarse[n] - fine[n]);
    if (options.extrapolate) {
      levels[n] = (4.0 * fine[n] - coarse[n]) / 3.0;
      errors[n] = diff / 3.0;
    } else {
      levels[n] = coarse[n];
      errors[n] = 4.0 * diff / 3.0;
    }
    if (!(errors[n] <= options.tolerance * std::abs(levels[n]))) {
      throw AccuracyError("solve_fd_1d: Richardson error estimate " +
                              std::to_string(errors[n]) + " at level " +
                              std::to_string(n + 1) + " exceeds tolerance",
                          n + 1);
    }
  }
  // Degenerate pairs can swap order after extrapolation by rounding.
  std::sort(levels.begin(), levels.end());
  return Spectrum(std::move(levels), h, SpectrumSource::FiniteDifference,
                  std::move(errors));
}

FdGrid auto_fd_grid(const Potential& potential, double h, double top_energy,
                    double resolution) {
  require_planck(h);
  if (!(top_energy > 0.0)) throw ArgumentError("auto_fd_grid: top energy must be > 0");
  if (!(resolution > 0.0)) throw ArgumentError("auto_fd_grid: resolution must be > 0");
  if (potential.dimension() != 1) {
    throw ArgumentError("auto_fd_grid: only one-dimensional potentials");
  }
  const double m = potential.mass();
  double lower = 0.0;
  double upper = 0.0;
  if (potential.bounded()) {
    lower = potential.lower();
    upper = potential.upper();
  } else {
    const double nu = potential.exponent();
    const double margin_wall = std::pow(1.25 * top_energy + 10.0, 1.0 / nu);
    const double turning = std::pow(top_energy, 1.0 / nu);
    // March outward from the turning point until the WKB exponent reaches 20.
    double x = turning;
    double exponent = 0.0;
    const double step = std::max(turning, 1.0) * 1e-3;
    while (exponent < 20.0 && x < 1e3 * std::max(turning, 1.0)) {
      const double mid = x + 0.5 * step;
      exponent += std::sqrt(2.0 * m * (std::pow(mid, nu) - top_energy)) / h * step;
      x += step;
    }
    const double wall = std::max(margin_wall, x);
    lower = -wall;
    upper = wall;
  }
  const double k_max = std::sqrt(2.0 * m * top_energy) / h;
  const double dx = resolution / k_max;
  const auto points = static_cast<std::size_t>(std::ceil((upper - lower) / dx));
  return {lower, upper, std::max<std::size_t>(points, 16)};
}

Spectrum rescale(const Spectrum& base, double h, double energy_exponent) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ArgumentError("rescale: h must be positive");
  }
  if (!(energy_exponent > 0.0)) {
    throw ArgumentError("rescale: energy exponent must be positive");
  }
  if (base.source() == SpectrumSource::Rescaled) {
    throw ArgumentError("rescale: base spectrum is already rescaled");
  }
  const double factor = std::pow(h / base.planck(), energy_exponent);
  Spectrum out = base;
  for (auto& e : out.levels_) e *= factor;
  for (auto& err : out.errors_) err *= factor;
  out.planck_ = h;
  out.source_ = SpectrumSource::Rescaled;
  if (out.tail_) out.tail_->prefactor *= factor;
  return out;
}

double log_tail_bound(const Spectrum& spectrum, double beta) {
  require_beta(beta);
  if (spectrum.complete()) return -kInf;
  if (spectrum.count() < 8 || !spectrum.tail_model()) {
    throw ArgumentError("tail_bound: need at least 8 levels");
  }
  const TailModel& tail = *spectrum.tail_model();
  if (!(tail.exponent > 0.0)) {
    throw ModelError("tail_bound: fitted growth exponent " +
                     std::to_string(tail.exponent) +
                     " is not positive; the spectrum does not grow");
  }
  const double s = 1.0 / tail.exponent;
  const double bc = beta * tail.prefactor;
  const double u0 = bc * std::pow(static_cast<double>(spectrum.count()), tail.exponent);
  return -std::log(tail.exponent) - s * std::log(bc) + log_upper_gamma(s, u0);
}

double tail_bound(const Spectrum& spectrum, double beta) {
  return std::exp(log_tail_bound(spectrum, beta));
}

double log_energy_tail_bound(const Spectrum& spectrum, double beta) {
  require_beta(beta);
  if (spectrum.complete()) return -kInf;
  if (spectrum.count() < 8 || !spectrum.tail_model()) {
    throw ArgumentError("tail_bound: need at least 8 levels");
  }
  const TailModel& tail = *spectrum.tail_model();
  if (!(tail.exponent > 0.0)) {
    throw ModelError("tail_bound: fitted growth exponent is not positive");
  }
  const double s = 1.0 / tail.exponent;
  const double bc = beta * tail.prefactor;
  const double u0 = bc * std::pow(static_cast<double>(spectrum.count()), tail.exponent);
  return -std::log(tail.exponent) - std::log(beta) - s * std::log(bc) +
         log_upper_gamma(1.0 + s, u0);
}

double weyl_count(const Potential& potential, double h, double energy) {
  require_planck(h);
  if (!(energy > 0.0)) return 0.0;
  const double m = potential.mass();
  switch (potential.kind()) {
    case PotentialKind::Box: {
      const int n = potential.dimension();
      return potential.volume() * ball_volume(n, std::sqrt(2.0 * m * energy)) /
             std::pow(2.0 * pi<double>() * h, n);
    }
    case PotentialKind::Homogeneous:
      return weyl_homogeneous(potential, h, energy);
    case PotentialKind::Tabulated:
      return weyl_tabulated(potential, h, energy);
  }
  return 0.0;
}

std::optional<double> energy_scaling_exponent(const Potential& potential) {
  switch (potential.kind()) {
    case PotentialKind::Box:
      return 2.0;
    case PotentialKind::Homogeneous:
      return scaling_exponents(potential.exponent()).energy;
    case PotentialKind::Tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

Spectrum solve(const Potential& potential, double h, std::size_t count,
               const SolveOptions& options) {
  require_planck(h);
  if (count == 0) throw ArgumentError("solve: count must be >= 1");
  if (count > options.level_cap) {
    throw ResourceError("solve: " + std::to_string(count) +
                        " levels exceed the cap of " +
                        std::to_string(options.level_cap));
  }
  switch (potential.kind()) {
    case PotentialKind::Box:
      return solve_box(potential.lengths(), potential.mass(), h, count);
    case PotentialKind::Homogeneous:
      if (potential.exponent() == 2.0) {
        return solve_harmonic(potential.dimension(), potential.mass(), h, count);
      }
      if (potential.dimension() != 1) {
        throw ArgumentError(
            "solve: homogeneous potentials with nu != 2 are supported in one "
            "dimension only");
      }
      if (potential.exponent() == 1.0) return solve_linear(potential.mass(), h, count);
      return solve_fd_sized(potential, h, count, options);
    case PotentialKind::Tabulated:
      return solve_fd_sized(potential, h, count, options);
  }
  throw ArgumentError("solve: unknown potential kind");
}

Spectrum solve_for_beta(const Potential& potential, double h, double beta,
                        const SolveOptions& options) {
  require_beta(beta);
  const double ground = solve(potential, h, 1, options).levels().front();
  // exp(-depth) leaves room for the density of states in front of the tail.
  const double depth = -std::log(options.tail_tolerance) + 10.0;
  const double cut = ground + depth / beta;
  std::size_t count =
      checked_count(1.1 * weyl_count(potential, h, cut) + 8.0, options.level_cap);
  count = std::max<std::size_t>(count, 8);
  const double log_tol = std::log(options.tail_tolerance);
  for (int attempt = 0; attempt < 6; ++attempt) {
    Spectrum spectrum = solve(potential, h, count, options);
    const double z_ratio =
        log_tail_bound(spectrum, beta) - log_partial_sum(spectrum.levels(), beta);
    const double e_ratio = log_energy_tail_bound(spectrum, beta) -
                           log_partial_energy_sum(spectrum.levels(), beta);
    if (z_ratio < log_tol && e_ratio < log_tol) return spectrum;
    count = checked_count(2.0 * static_cast<double>(count), options.level_cap);
  }
  throw TruncationError("solve_for_beta: tail did not fall below tolerance");
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  const auto old_precision = out.precision(17);
  out << "# h=" << spectrum.planck() << "\n";
  out << "# source=" << to_string(spectrum.source()) << "\n";
  if (spectrum.complete()) out << "# complete=true\n";
  out << "n,E\n";
  const auto levels = spectrum.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out << (i + 1) << "," << levels[i] << "\n";
  }
  out.precision(old_precision);
}

Spectrum read_spectrum_csv(std::istream& in) {
  std::string line;
  std::optional<double> planck;
  std::optional<SpectrumSource> source;
  bool complete = false;
  bool header = false;
  std::vector<double> levels;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string meta = line.substr(1);
      meta.erase(0, meta.find_first_not_of(' '));
      const auto eq = meta.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = meta.substr(0, eq);
      const std::string value = meta.substr(eq + 1);
      try {
        if (key == "h") planck = std::stod(value);
        if (key == "source") source = parse_spectrum_source(value);
        if (key == "complete") complete = (value == "true" || value == "1");
      } catch (const std::invalid_argument&) {
        throw ParseError("spectrum CSV line " + std::to_string(line_no) +
                         ": bad metadata value");
      }
      continue;
    }
    if (!header) {
      if (line != "n,E") {
        throw ParseError("spectrum CSV: expected header 'n,E', got '" + line + "'");
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("spectrum CSV line " + std::to_string(line_no) +
                       ": expected 'n,E'");
    }
    try {
      const long n = std::stol(line.substr(0, comma));
      if (n != static_cast<long>(levels.size()) + 1) {
        throw ParseError("spectrum CSV line " + std::to_string(line_no) +
                         ": level index out of sequence");
      }
      levels.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::invalid_argument&) {
      throw ParseError("spectrum CSV line " + std::to_string(line_no) +
                       ": not a number");
    }
  }
  if (!header) throw ParseError("spectrum CSV: missing header 'n,E'");
  if (!planck) throw ParseError("spectrum CSV: missing '# h=' metadata");
  if (!source) throw ParseError("spectrum CSV: missing '# source=' metadata");
  try {
    return Spectrum(std::move(levels), *planck, *source, {}, complete);
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("spectrum CSV: ") + e.what());
  }
}

}  // namespace qcstat
