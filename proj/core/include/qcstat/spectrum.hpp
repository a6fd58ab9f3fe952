#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcstat/potential.hpp"

namespace qcstat {

enum class SpectrumSource {
  AnalyticBox,
  AnalyticHarmonic,
  AnalyticLinear,  // V = |x|, from Airy zeros
  FiniteDifference,
  Rescaled,
  Explicit,        // user-supplied finite level set
};

std::string to_string(SpectrumSource source);
SpectrumSource parse_spectrum_source(std::string_view text);

// Power-law growth E_n ~ prefactor * n^exponent (n counted from 1).
struct TailModel {
  double exponent;
  double prefactor;
};

// Least-squares fit of log E_n against log n over the top quartile.
TailModel fit_tail(std::span<const double> levels);

// Ordered eigenvalues E_1 <= E_2 <= ... of the Schroedinger operator
// -(h^2 / 2m) Laplacian + V with Dirichlet boundary, computed at Planck
// parameter h. Degenerate levels are listed with multiplicity.
//
// A spectrum is either a truncation of an infinite sequence (the tail model
// bounds the omitted part) or `complete`, i.e. the full level set of a
// finite system with no tail at all.
class Spectrum {
 public:
  // `errors` holds absolute per-level error estimates, or is empty when the
  // levels are exact up to rounding.
  Spectrum(std::vector<double> levels, double planck, SpectrumSource source,
           std::vector<double> errors = {}, bool complete = false);

  // A finite level set, e.g. for the game or for Psi.
  static Spectrum finite(std::vector<double> levels, double planck = 1.0);

  std::span<const double> levels() const noexcept { return levels_; }
  std::size_t count() const noexcept { return levels_.size(); }
  double operator[](std::size_t i) const { return levels_[i]; }
  double planck() const noexcept { return planck_; }
  SpectrumSource source() const noexcept { return source_; }
  bool complete() const noexcept { return complete_; }
  std::span<const double> level_errors() const noexcept { return errors_; }
  bool has_level_errors() const noexcept { return !errors_.empty(); }

  // Only present for truncated spectra with at least 8 levels.
  const std::optional<TailModel>& tail_model() const noexcept { return tail_; }

  // lambda_n = (m / h^2) E_n: eigenvalues of -Laplacian/2 + (m/h^2) V.
  std::vector<double> operator_eigenvalues(double mass) const;

 private:
  friend Spectrum rescale(const Spectrum&, double, double);

  std::vector<double> levels_;
  std::vector<double> errors_;
  double planck_;
  SpectrumSource source_;
  bool complete_;
  std::optional<TailModel> tail_;
};

// Largest number of multi-indices the box enumeration may visit.
inline constexpr std::size_t kBoxEnumerationCap = 50'000'000;

// The `count` smallest levels (h^2 pi^2 / 2m) sum_i (n_i / L_i)^2.
Spectrum solve_box(std::span<const double> lengths, double mass, double h,
                   std::size_t count,
                   std::size_t enumeration_cap = kBoxEnumerationCap);

// V = r^2 in N dimensions: E = h w (k + N/2) with w = sqrt(2/m) and
// multiplicity binom(k + N - 1, N - 1).
Spectrum solve_harmonic(int dimension, double mass, double h, std::size_t count);

// V = |x| on the line: E = (h^2 / 2m)^(1/3) |z| with z the zeros of Ai'
// (even states) and Ai (odd states).
Spectrum solve_linear(double mass, double h, std::size_t count);

// Uniform grid with `points` interior unknowns on (lower, upper); the
// endpoints carry the Dirichlet condition.
struct FdGrid {
  double lower;
  double upper;
  std::size_t points;

  static FdGrid symmetric(double half_width, std::size_t points);
  double spacing() const noexcept {
    return (upper - lower) / static_cast<double>(points + 1);
  }
};

struct FdOptions {
  // Report the Richardson-extrapolated levels instead of the raw grid
  // eigenvalues.
  bool extrapolate = false;
  // Largest accepted error estimate, relative to the level.
  double tolerance = 1e-3;
};

// Lowest `count` eigenvalues of the second-order central-difference
// discretisation of -(h^2/2m) u'' + V u on `grid`. Every level carries an
// error estimate from one Richardson step against the grid with half the
// spacing: (4/3)|E_P - E_2P| for the raw value, |E_P - E_2P| / 3 for the
// extrapolated one. Throws AccuracyError naming the first level whose
// estimate exceeds the tolerance.
Spectrum solve_fd_1d(const Potential& potential, double h, const FdGrid& grid,
                     std::size_t count, const FdOptions& options = {});

// Grid for levels up to `top_energy`: the wall sits where V exceeds
// 1.25 * top_energy + 10 and where the WKB decay from the outermost turning
// point reaches exp(-20); the spacing resolves the largest classical
// wavenumber with k * dx = resolution.
FdGrid auto_fd_grid(const Potential& potential, double h, double top_energy,
                    double resolution = 0.08);

// base.levels * (h / base.planck)^energy_exponent, i.e. E_n(h) = phi(h) E_n
// with phi(h) = h^a for base computed at h = 1.
Spectrum rescale(const Spectrum& base, double h, double energy_exponent);

// Upper estimate of sum_{n > M} exp(-beta E_n) from the fitted tail model
// and the comparison with the integral from M to infinity. Zero (log: -inf)
// for complete spectra.
double log_tail_bound(const Spectrum& spectrum, double beta);
double tail_bound(const Spectrum& spectrum, double beta);

// Same for the energy-weighted tail sum_{n > M} E_n exp(-beta E_n).
double log_energy_tail_bound(const Spectrum& spectrum, double beta);

// log sum_n exp(-beta E_n) and log sum_n E_n exp(-beta E_n) over the given
// levels (sorted ascending), compensated and shifted by the ground level.
double log_partial_sum(std::span<const double> levels, double beta);
double log_partial_energy_sum(std::span<const double> levels, double beta);

// Semiclassical number of states below `energy`: phase-space volume of
// {H <= E} over (2 pi h)^N.
double weyl_count(const Potential& potential, double h, double energy);

// Exponent a with E_n(h) = h^a E_n(1) for the scaling families: 2 for the
// box, 2 nu / (2 + nu) for homogeneous potentials; none for tabulated.
std::optional<double> energy_scaling_exponent(const Potential& potential);

struct SolveOptions {
  double fd_resolution = 0.08;
  bool fd_extrapolate = true;
  double fd_tolerance = 1e-3;
  // Largest number of levels any solve may produce.
  std::size_t level_cap = 2'000'000;
  // Target for tail / partial sum when sizing spectra for a given beta.
  double tail_tolerance = 1e-10;
};

// Lowest `count` levels, analytic where a closed form exists (box, r^2,
// |x| in one dimension) and finite differences otherwise.
Spectrum solve(const Potential& potential, double h, std::size_t count,
               const SolveOptions& options = {});

// A spectrum long enough that the Boltzmann sums at inverse temperature
// `beta` (and every larger beta) have tail / partial sum below
// options.tail_tolerance.
Spectrum solve_for_beta(const Potential& potential, double h, double beta,
                        const SolveOptions& options = {});

// CSV with `# h=...`, `# source=...` (and `# complete=true` for finite
// systems) followed by the header `n,E`.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
Spectrum read_spectrum_csv(std::istream& in);

}  // namespace qcstat
