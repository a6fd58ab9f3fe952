#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qcstat {

enum class PotentialKind { Box, Homogeneous, Tabulated };

std::string to_string(PotentialKind kind);

// Model families for the non-negative potential V of the Hamiltonian
// H(p, q) = |p|^2 / 2m + V(q). Units: Boltzmann constant k = 1, default
// mass m = 1.
//
//   Box          V == 0 on the rectangular well prod_i [0, L_i], Dirichlet walls.
//   Homogeneous  V(x) = |x|^nu on all of R^N (radially symmetric).
//   Tabulated    piecewise-linear V on [x_0, x_last] from (x, V) samples,
//                Dirichlet walls at the ends. One-dimensional.
//
// Immutable once constructed.
class Potential {
 public:
  static Potential box(std::vector<double> lengths, double mass = 1.0);
  static Potential homogeneous(int dimension, double exponent,
                               double mass = 1.0);
  static Potential tabulated(std::vector<double> x, std::vector<double> v,
                             double mass = 1.0);

  PotentialKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  double mass() const noexcept { return mass_; }

  // Box only.
  const std::vector<double>& lengths() const noexcept { return lengths_; }
  double volume() const;

  // Homogeneous only.
  double exponent() const;

  // Tabulated only.
  const std::vector<double>& sample_x() const noexcept { return x_; }
  const std::vector<double>& sample_v() const noexcept { return v_; }

  bool bounded() const noexcept { return kind_ != PotentialKind::Homogeneous; }

  // One-dimensional interval [lower, upper] of a bounded N = 1 domain.
  double lower() const;
  double upper() const;

  // V(x). Throws DomainError outside the closure of a Box, RangeError
  // outside the samples of a Tabulated potential.
  double operator()(std::span<const double> x) const;

  // V as a function of a scalar coordinate: the radius for Homogeneous,
  // the coordinate for one-dimensional Box/Tabulated.
  double at(double x) const;

  std::string describe() const;

 private:
  Potential() = default;

  PotentialKind kind_ = PotentialKind::Box;
  int dimension_ = 1;
  double mass_ = 1.0;
  double exponent_ = 0.0;
  std::vector<double> lengths_;
  std::vector<double> x_;
  std::vector<double> v_;
};

double evaluate(const Potential& potential, std::span<const double> x);

// Largest relative deviation from V(s x) = s^nu V(x) over all scales s and
// sample points x. Tabulated potentials carry no exponent, so the exponent
// under test must be supplied; for Homogeneous it defaults to its own.
double check_homogeneity(const Potential& potential,
                         std::span<const double> scales,
                         const std::vector<std::vector<double>>& samples,
                         std::optional<double> exponent = std::nullopt);

// The two exponents attached to V = r^nu. `substitution` solves
// 2 - 2s = s nu (the coordinate rescaling x = h^s y); `energy` is the
// exponent a in E_n(h) = h^a E_n(1). Never interchange them: the energy
// exponent is also the constant a with E_c = N / (a beta).
struct ScalingExponents {
  double substitution;
  double energy;
};

ScalingExponents scaling_exponents(double nu);

// Two-column CSV with header `x,V`; x strictly increasing, V >= 0.
Potential read_tabulated_csv(std::istream& in, double mass = 1.0);
Potential load_tabulated_csv(const std::string& path, double mass = 1.0);

}  // namespace qcstat
