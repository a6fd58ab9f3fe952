#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcstat/potential.hpp"
#include "qcstat/quadrature.hpp"
#include "qcstat/spectrum.hpp"

namespace qcstat {

inline constexpr double kTailTolerance = 1e-10;

// sum_n exp(-beta E_n), kept in log space. tail_ratio bounds the omitted
// levels relative to the partial sum; level_error_ratio propagates the
// per-level error estimates of the spectrum (first order in beta * dE_n).
struct QuantumSum {
  double log_value = 0.0;
  double tail_ratio = 0.0;
  double level_error_ratio = 0.0;

  double value() const noexcept { return std::exp(log_value); }
  double relative_error() const noexcept { return tail_ratio + level_error_ratio; }
};

// Throws TruncationError when the tail bound is not below `tail_tolerance`
// relative to the partial sum.
QuantumSum z_quantum(const Spectrum& spectrum, double beta,
                     double tail_tolerance = kTailTolerance);

// (2 pi m / beta)^(N/2) * integral of exp(-beta V) over configuration space.
Estimate z_classical(const Potential& potential, double beta);

double mean_energy_quantum(const Spectrum& spectrum, double beta,
                           double tail_tolerance = kTailTolerance);
double mean_energy_classical(const Potential& potential, double beta);

struct QuantumEntropy {
  double value = 0.0;
  // log S, accurate even where S itself is below the resolution of
  // beta E_q + log Z_q.
  double log_value = 0.0;
  std::vector<double> probabilities;
};

QuantumEntropy entropy_quantum(const Spectrum& spectrum, double beta,
                               bool keep_probabilities = true,
                               double tail_tolerance = kTailTolerance);

// beta E_c + log Z_c - N log(2 pi h).
double entropy_classical(const Potential& potential, double beta, double h);

// Psi(lambda) = -lambda Phi'/Phi + log Phi with Phi = sum_n exp(-lambda E_n),
// the entropy of the Gibbs distribution at lambda, together with its
// derivative from the pair-sum formula
//   Psi' = -lambda sum_{n>m} (E_n - E_m)^2 exp(-lambda (E_n + E_m)) / Phi^2.
struct PsiValue {
  double value = 0.0;
  double derivative = 0.0;
};

PsiValue psi(std::span<const double> levels, double lambda);

struct ThermoPoint {
  double beta = 0.0;
  double planck = 0.0;
  int dimension = 1;
  QuantumSum z_quantum;
  Estimate z_classical;
  double e_quantum = 0.0;
  double e_classical = 0.0;
  double s_quantum = 0.0;
  double log_s_quantum = 0.0;
  double s_classical = 0.0;
  // First-order effect of the spectrum's level errors on E_q and S_q.
  double e_quantum_error = 0.0;
  double s_quantum_error = 0.0;
  std::vector<double> probabilities;

  // log((2 pi h)^N Z_q)
  double log_zq_scaled() const noexcept;
  double zq_scaled() const noexcept { return std::exp(log_zq_scaled()); }
};

ThermoPoint thermo_point(const Potential& potential, const Spectrum& spectrum,
                         double beta, bool keep_probabilities = false);

// Spectra and classical quantities for one potential over a (beta, h) grid.
// For the box and homogeneous families one spectrum at h = 1 is solved and
// rescaled by h^a, long enough for the smallest beta * h^a requested;
// tabulated potentials get one spectrum per h.
class ThermoModel {
 public:
  explicit ThermoModel(Potential potential, SolveOptions options = {});

  // A model whose levels are a fixed base spectrum (computed at
  // base.planck()) rescaled with exponent a.
  ThermoModel(Potential potential, Spectrum base, double energy_exponent);

  const Potential& potential() const noexcept { return potential_; }
  std::optional<double> energy_exponent() const noexcept { return exponent_; }

  // Solve whatever spectra the grid needs. Not thread-safe.
  void prepare(std::span<const double> betas, std::span<const double> hs);

  // Spectrum at h; throws ContractError if h was not prepared.
  Spectrum spectrum(double h) const;

  // Thread-safe once prepared; throws ContractError for uncovered points.
  ThermoPoint point(double beta, double h, bool keep_probabilities = false) const;

  // prepare() for the single point, then point().
  ThermoPoint at(double beta, double h, bool keep_probabilities = false);

 private:
  bool covers(double beta, double h) const;

  Potential potential_;
  SolveOptions options_;
  std::optional<double> exponent_;
  std::optional<Spectrum> base_;
  double base_lambda_ = 0.0;  // smallest beta h^a the base spectrum covers
  bool fixed_base_ = false;
  std::map<double, std::pair<double, Spectrum>> per_h_;  // h -> (min beta, spectrum)
};

// CSV header `beta,h,Zq_scaled,Zc,Eq,Ec,Sq,Sc`; a trailing `status` column is
// added when any row failed. Doubles carry 17 significant digits.
struct TableRow {
  double beta = 0.0;
  double h = 0.0;
  std::optional<ThermoPoint> point;
  std::string status = "ok";
};

void write_table_csv(std::ostream& out, std::span<const TableRow> rows);
void write_table_json(std::ostream& out, std::span<const TableRow> rows);

}  // namespace qcstat
