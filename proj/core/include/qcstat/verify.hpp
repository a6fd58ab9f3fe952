#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcstat/ensemble.hpp"

namespace qcstat {

enum class ClaimId {
  C1_1,       // (2 pi h)^N Z_q <= Z_c
  C1_2,       // E_q >= E_c
  C1_3_Z,     // (2 pi h)^N Z_q / Z_c -> 1 as beta -> 0
  C1_3_E,     // E_q / E_c -> 1 as beta -> 0
  T3_1,       // integral of E_q - E_c equals the log-ratio difference
  T4_1_beta,  // S_q decreasing in beta
  T4_1_h,     // S_q decreasing in h
  C4_1,       // h^N Z_q decreasing in h
  P4_1,       // d/dh (h^N Z_q) = h^(N-1) Z_q (N - a beta E_q)
  P4_3,       // sign(N - a beta E_q) = -sign(E_q - E_c)
  WEHRL_S,    // E, Z and S gaps close as h -> 0
};

std::string to_string(ClaimId id);

// Theorem-class claims must never be Violated; the others only gather
// evidence.
bool theorem_class(ClaimId id);

enum class Status { Holds, Violated, Inconclusive };

std::string to_string(Status status);

struct VerificationReport {
  ClaimId claim = ClaimId::C1_1;
  std::string model;
  std::vector<double> betas;
  std::vector<double> hs;
  Status status = Status::Inconclusive;
  // Smallest slack over the grid, in the claim's own normalisation
  // (relative for sums and energies, log-space for entropies);
  // negative means the inequality failed somewhere.
  double worst_margin = 0.0;
  // Largest numerical error bound among the points that enter the margin.
  double tolerance = 0.0;
  std::vector<std::string> notes;
};

// Holds iff margin > tolerance, Violated iff margin < -tolerance.
Status classify(double worst_margin, double tolerance);

struct Grid {
  std::vector<double> betas;
  std::vector<double> hs;
};

// 9 points per decade, beta in [1e-2, 10], h in [0.25, 4].
Grid default_grid();

VerificationReport check_c11(ThermoModel& model, const Grid& grid);
VerificationReport check_c12(ThermoModel& model, const Grid& grid);

struct AsymptoticReports {
  VerificationReport z;
  VerificationReport e;
};

// Ratios at fixed h along a beta sequence (any order; evaluated from large
// to small beta). Holds if the final |R - 1| < threshold and |R - 1| shrinks
// over the last four points. Never Violated: a miss is Inconclusive.
AsymptoticReports check_c13(ThermoModel& model, double h, std::span<const double> betas,
                            double threshold = 0.02);

// tau defaults to 1e-3 * beta when not positive.
VerificationReport check_t31(ThermoModel& model, double h, double beta, double tau = 0.0);

struct MonotonicityReports {
  VerificationReport beta;
  VerificationReport h;
};

MonotonicityReports check_t41(ThermoModel& model, const Grid& grid);

struct HomogeneousReports {
  VerificationReport c41;
  VerificationReport p41;
  VerificationReport p43;
};

HomogeneousReports check_c41_and_props(ThermoModel& model, double beta,
                                       std::span<const double> hs);

struct WehrlGaps {
  double h = 0.0;
  double energy = 0.0;   // |E_q / E_c - 1|
  double sum = 0.0;      // |(2 pi h)^N Z_q / Z_c - 1|
  double entropy = 0.0;  // |S_q - S_c|
};

// Gaps along a decreasing h sequence at fixed beta. Holds if all three
// final gaps are < threshold and shrink over the last four points.
VerificationReport check_wehrl(ThermoModel& model, double beta, std::span<const double> hs,
                               double threshold = 0.02,
                               std::vector<WehrlGaps>* gaps = nullptr);

void write_reports_json(std::ostream& out, std::span<const VerificationReport> reports);
void write_reports_table(std::ostream& out, std::span<const VerificationReport> reports);

}  // namespace qcstat
