#include "qcstat/ensemble.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "qcstat/error.hpp"
#include "qcstat/numeric.hpp"

namespace qcstat {

namespace {

using boost::math::constants::pi;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ArgumentError("inverse temperature beta must be positive and finite");
  }
}

// Boltzmann weights w_n = exp(-x_n), x_n = beta (E_n - E_1). Everything below
// is expressed through these shifted quantities so nothing underflows for
// large beta.
struct Moments {
  double shift = 0.0;          // E_1
  double log_weight = 0.0;     // log W, W = sum_n w_n
  double mean_excess = 0.0;    // sum_n (E_n - E_1) w_n / W
  double log_entropy = -kInf;  // log S
  double level_error_ratio = 0.0;
  std::size_t used = 0;        // levels with non-negligible weight
};

Moments boltzmann(const Spectrum& spectrum, double beta) {
  require_beta(beta);
  const auto levels = spectrum.levels();
  const auto errors = spectrum.level_errors();
  Moments m;
  m.shift = levels.front();

  CompensatedSum weight, excess, error;
  std::size_t ground = 0;
  std::vector<double> log_terms;   // log(x_n w_n) for excited levels
  std::vector<double> log_excited; // -x_n for excited levels
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double x = beta * (levels[i] - m.shift);
    if (x > 745.0) {
      // exp(-x) underflows, but log S must stay finite deep in the quantum
      // regime: keep the log-space terms until they are negligible.
      if (!log_excited.empty() && x > 40.0 - log_excited.front()) break;
      log_terms.push_back(std::log(x) - x);
      log_excited.push_back(-x);
      continue;
    }
    const double w = std::exp(-x);
    m.used = i + 1;
    weight += w;
    excess += (levels[i] - m.shift) * w;
    if (!errors.empty()) error += beta * errors[i] * w;
    if (x > 0.0) {
      log_terms.push_back(std::log(x) - x);
      log_excited.push_back(-x);
    } else {
      ++ground;
    }
  }
  const double w = weight.value();
  m.log_weight = std::log(w);
  m.mean_excess = excess.value() / w;
  m.level_error_ratio = error.value() / w;

  // S = sum_n x_n w_n / W + log W, both parts non-negative.
  const double log_first = log_sum_exp(log_terms) - m.log_weight;
  const double rest = log_sum_exp(log_excited);
  double log_log_w = -kInf;
  if (ground > 1) {
    log_log_w = std::log(m.log_weight);
  } else if (std::isfinite(rest)) {
    const double log_w = std::log1p(std::exp(rest));
    log_log_w = (rest < -700.0) ? rest : std::log(log_w);
  }
  m.log_entropy = log_add_exp(log_first, log_log_w);
  return m;
}

double log_z(const Moments& m, double beta) { return -beta * m.shift + m.log_weight; }

double check_tail(const Spectrum& spectrum, double beta, double log_partial,
                  double tolerance) {
  if (spectrum.complete()) return 0.0;
  const double ratio = std::exp(log_tail_bound(spectrum, beta) - log_partial);
  if (!(ratio < tolerance)) {
    throw TruncationError("Boltzmann tail / partial sum = " + std::to_string(ratio) +
                          " at beta = " + std::to_string(beta) + " with " +
                          std::to_string(spectrum.count()) +
                          " levels; solve more levels");
  }
  return ratio;
}

void check_energy_tail(const Spectrum& spectrum, double beta, double tolerance) {
  if (spectrum.complete()) return;
  const double ratio = std::exp(log_energy_tail_bound(spectrum, beta) -
                                log_partial_energy_sum(spectrum.levels(), beta));
  if (!(ratio < tolerance)) {
    throw TruncationError("energy-weighted tail / partial sum = " +
                          std::to_string(ratio) + " at beta = " +
                          std::to_string(beta) + "; solve more levels");
  }
}

double momentum_factor(const Potential& p, double beta) {
  return std::pow(2.0 * pi<double>() * p.mass() / beta, 0.5 * p.dimension());
}

double sphere_area(int n) {
  return 2.0 * std::pow(pi<double>(), 0.5 * n) / std::tgamma(0.5 * n);
}

// beta r^nu without overflow for huge nu.
double scaled_power(double beta, double r, double nu) {
  if (r <= 0.0) return 0.0;
  return std::exp(nu * std::log(r) + std::log(beta));
}

// integral_0^inf r^(N - 1 + shift) exp(-beta r^nu) dr by Gauss-Kronrod with
// breakpoints at decades of beta r^nu up to 50, plus the exact remainder
// Gamma(s, 50) / (nu beta^s), s = (N + shift) / nu.
Estimate radial_moment(int n, double nu, double beta, double shift) {
  const double power = n - 1 + shift;
  const auto f = [&](double r) {
    const double t = scaled_power(beta, r, nu);
    if (t > 700.0) return 0.0;
    const double base = power == 0.0 ? 1.0 : std::pow(r, power);
    return base * std::exp(-t);
  };
  // Break where beta r^nu passes through the decades of the exponential's
  // fall-off; for large nu it is a near-step that one rule would miss.
  std::vector<double> breaks{0.0};
  for (double t : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 5.0, 50.0}) {
    const double r = std::pow(t / beta, 1.0 / nu);
    if (r > breaks.back()) breaks.push_back(r);
  }
  Estimate inner = integrate_piecewise(f, breaks, {1e-13, 50});
  const double s = (n + shift) / nu;
  const double tail =
      boost::math::tgamma(s, 50.0) / (nu * std::pow(beta, s));
  inner.value += tail;
  return inner;
}

double radial_closed_form(int n, double nu, double beta, double shift) {
  const double s = (n + shift) / nu;
  return std::tgamma(s) / (nu * std::pow(beta, s));
}

void cross_check(double quadrature, double closed, double tolerance,
                 const char* what) {
  const double rel = std::abs(quadrature - closed) / std::abs(closed);
  if (!(rel <= tolerance)) {
    throw AccuracyError(std::string(what) + ": quadrature and closed form differ by " +
                            std::to_string(rel) + " relative",
                        0);
  }
}

struct TabulatedIntegrals {
  Estimate weight;  // integral exp(-beta V)
  Estimate energy;  // integral V exp(-beta V)
};

TabulatedIntegrals tabulated_integrals(const Potential& p, double beta) {
  const auto& xs = p.sample_x();
  const QuadratureOptions opts{1e-10, 15};
  TabulatedIntegrals out;
  out.weight = integrate_piecewise([&](double x) { return std::exp(-beta * p.at(x)); },
                                   xs, opts);
  out.energy = integrate_piecewise(
      [&](double x) {
        const double v = p.at(x);
        return v * std::exp(-beta * v);
      },
      xs, opts);
  if (!(out.weight.value > 0.0) || !std::isfinite(out.weight.value)) {
    throw IntegrabilityError("configuration integral of exp(-beta V) is not finite");
  }
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

QuantumSum z_quantum(const Spectrum& spectrum, double beta, double tail_tolerance) {
  const Moments m = boltzmann(spectrum, beta);
  QuantumSum out;
  out.log_value = log_z(m, beta);
  out.tail_ratio = check_tail(spectrum, beta, out.log_value, tail_tolerance);
  out.level_error_ratio = m.level_error_ratio;
  return out;
}

Estimate z_classical(const Potential& potential, double beta) {
  require_beta(beta);
  const double factor = momentum_factor(potential, beta);
  switch (potential.kind()) {
    case PotentialKind::Box:
      return {factor * potential.volume(), 0.0};
    case PotentialKind::Homogeneous: {
      const int n = potential.dimension();
      const double nu = potential.exponent();
      const Estimate radial = radial_moment(n, nu, beta, 0.0);
      cross_check(radial.value, radial_closed_form(n, nu, beta, 0.0), 1e-8,
                  "z_classical");
      const double scale = factor * sphere_area(n);
      return {scale * radial.value, scale * radial.error};
    }
    case PotentialKind::Tabulated: {
      const Estimate w = tabulated_integrals(potential, beta).weight;
      return {factor * w.value, factor * w.error};
    }
  }
  throw ArgumentError("z_classical: unknown potential kind");
}

double mean_energy_quantum(const Spectrum& spectrum, double beta,
                           double tail_tolerance) {
  const Moments m = boltzmann(spectrum, beta);
  check_tail(spectrum, beta, log_z(m, beta), tail_tolerance);
  check_energy_tail(spectrum, beta, tail_tolerance);
  return m.shift + m.mean_excess;
}

double mean_energy_classical(const Potential& potential, double beta) {
  require_beta(beta);
  const int n = potential.dimension();
  const double kinetic = 0.5 * n / beta;
  switch (potential.kind()) {
    case PotentialKind::Box:
      return kinetic;
    case PotentialKind::Homogeneous: {
      const double nu = potential.exponent();
      const double closed = n * (2.0 + nu) / (2.0 * nu * beta);
      const double weight = radial_moment(n, nu, beta, 0.0).value;
      const double energy = radial_moment(n, nu, beta, nu).value;
      cross_check(kinetic + energy / weight, closed, 1e-8, "mean_energy_classical");
      return closed;
    }
    case PotentialKind::Tabulated: {
      const TabulatedIntegrals t = tabulated_integrals(potential, beta);
      return kinetic + t.energy.value / t.weight.value;
    }
  }
  throw ArgumentError("mean_energy_classical: unknown potential kind");
}

QuantumEntropy entropy_quantum(const Spectrum& spectrum, double beta,
                               bool keep_probabilities, double tail_tolerance) {
  const Moments m = boltzmann(spectrum, beta);
  check_tail(spectrum, beta, log_z(m, beta), tail_tolerance);
  QuantumEntropy out;
  out.log_value = m.log_entropy;
  out.value = std::exp(m.log_entropy);
  if (keep_probabilities) {
    const auto levels = spectrum.levels();
    out.probabilities.resize(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
      out.probabilities[i] =
          std::exp(-beta * (levels[i] - m.shift) - m.log_weight);
    }
  }
  return out;
}

double entropy_classical(const Potential& potential, double beta, double h) {
  if (!(h > 0.0)) throw ArgumentError("entropy_classical: h must be positive");
  return beta * mean_energy_classical(potential, beta) +
         std::log(z_classical(potential, beta).value) -
         potential.dimension() * std::log(2.0 * pi<double>() * h);
}

PsiValue psi(std::span<const double> levels, double lambda) {
  if (levels.empty()) throw ArgumentError("psi: need at least one level");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("psi: lambda must be positive");
  }
  const double low = *std::min_element(levels.begin(), levels.end());
  std::vector<double> w(levels.size());
  CompensatedSum phi, moment;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    w[i] = std::exp(-lambda * (levels[i] - low));
    phi += w[i];
    moment += (levels[i] - low) * w[i];
  }
  const double p = phi.value();
  CompensatedSum pairs;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = levels[n] - levels[k];
      pairs += d * d * w[n] * w[k];
    }
  }
  // Shifting all levels by `low` leaves Psi unchanged.
  return {lambda * moment.value() / p + std::log(p), -lambda * pairs.value() / (p * p)};
}

double ThermoPoint::log_zq_scaled() const noexcept {
  return dimension * std::log(2.0 * pi<double>() * planck) + z_quantum.log_value;
}

ThermoPoint thermo_point(const Potential& potential, const Spectrum& spectrum,
                         double beta, bool keep_probabilities) {
  const Moments m = boltzmann(spectrum, beta);
  ThermoPoint t;
  t.beta = beta;
  t.planck = spectrum.planck();
  t.dimension = potential.dimension();
  t.z_quantum.log_value = log_z(m, beta);
  t.z_quantum.tail_ratio = check_tail(spectrum, beta, t.z_quantum.log_value, kTailTolerance);
  t.z_quantum.level_error_ratio = m.level_error_ratio;
  check_energy_tail(spectrum, beta, kTailTolerance);
  t.e_quantum = m.shift + m.mean_excess;
  t.log_s_quantum = m.log_entropy;
  t.s_quantum = std::exp(m.log_entropy);
  const auto errors = spectrum.level_errors();
  if (!errors.empty()) {
    // dE_q/dE_n = P_n (1 - beta (E_n - E_q)), dS_q/dE_n = -beta^2 P_n (E_n - E_q)
    const auto levels = spectrum.levels();
    CompensatedSum de, ds;
    for (std::size_t i = 0; i < m.used; ++i) {
      const double p = std::exp(-beta * (levels[i] - m.shift) - m.log_weight);
      const double spread = beta * std::abs(levels[i] - t.e_quantum);
      de += p * errors[i] * (1.0 + spread);
      ds += p * errors[i] * beta * spread;
    }
    t.e_quantum_error = de.value();
    t.s_quantum_error = ds.value();
  }
  if (keep_probabilities) {
    t.probabilities = entropy_quantum(spectrum, beta, true).probabilities;
  }
  t.z_classical = z_classical(potential, beta);
  t.e_classical = mean_energy_classical(potential, beta);
  t.s_classical = beta * t.e_classical + std::log(t.z_classical.value) -
                  t.dimension * std::log(2.0 * pi<double>() * t.planck);
  return t;
}

ThermoModel::ThermoModel(Potential potential, SolveOptions options)
    : potential_(std::move(potential)),
      options_(options),
      exponent_(energy_scaling_exponent(potential_)) {}

ThermoModel::ThermoModel(Potential potential, Spectrum base, double energy_exponent)
    : potential_(std::move(potential)),
      exponent_(energy_exponent),
      base_(std::move(base)),
      fixed_base_(true) {}

void ThermoModel::prepare(std::span<const double> betas, std::span<const double> hs) {
  if (betas.empty() || hs.empty()) return;
  for (double b : betas) {
    if (!(b > 0.0)) throw ArgumentError("prepare: beta must be positive");
  }
  for (double h : hs) {
    if (!(h > 0.0)) throw ArgumentError("prepare: h must be positive");
  }
  const double beta_min = *std::min_element(betas.begin(), betas.end());
  if (fixed_base_) return;
  if (exponent_) {
    const double h_min = *std::min_element(hs.begin(), hs.end());
    const double h_max = *std::max_element(hs.begin(), hs.end());
    // beta h^a is smallest at the smallest h (a > 0).
    const double lambda = beta_min * std::pow(std::min(h_min, h_max), *exponent_);
    if (!base_ || lambda < base_lambda_) {
      base_ = solve_for_beta(potential_, 1.0, lambda, options_);
      base_lambda_ = lambda;
    }
    return;
  }
  for (double h : hs) {
    auto it = per_h_.find(h);
    if (it == per_h_.end() || beta_min < it->second.first) {
      per_h_.insert_or_assign(
          h, std::make_pair(beta_min, solve_for_beta(potential_, h, beta_min, options_)));
    }
  }
}

bool ThermoModel::covers(double beta, double h) const {
  if (exponent_) {
    if (!base_) return false;
    if (fixed_base_) return true;
    return beta * std::pow(h, *exponent_) >= base_lambda_ * (1.0 - 1e-12);
  }
  const auto it = per_h_.find(h);
  return it != per_h_.end() && beta >= it->second.first;
}

Spectrum ThermoModel::spectrum(double h) const {
  if (exponent_) {
    if (!base_) throw ContractError("ThermoModel: no spectrum prepared");
    return rescale(*base_, h, *exponent_);
  }
  const auto it = per_h_.find(h);
  if (it == per_h_.end()) {
    throw ContractError("ThermoModel: h = " + format_double(h) + " not prepared");
  }
  return it->second.second;
}

ThermoPoint ThermoModel::point(double beta, double h, bool keep_probabilities) const {
  if (!covers(beta, h)) {
    throw ContractError("ThermoModel: (beta, h) = (" + format_double(beta) + ", " +
                        format_double(h) + ") outside the prepared grid");
  }
  return thermo_point(potential_, spectrum(h), beta, keep_probabilities);
}

ThermoPoint ThermoModel::at(double beta, double h, bool keep_probabilities) {
  const double b[] = {beta};
  const double hh[] = {h};
  prepare(b, hh);
  return point(beta, h, keep_probabilities);
}

void write_table_csv(std::ostream& out, std::span<const TableRow> rows) {
  const bool with_status = std::any_of(rows.begin(), rows.end(),
                                       [](const TableRow& r) { return !r.point; });
  out << "beta,h,Zq_scaled,Zc,Eq,Ec,Sq,Sc";
  if (with_status) out << ",status";
  out << "\n";
  for (const auto& row : rows) {
    out << format_double(row.beta) << ',' << format_double(row.h);
    if (row.point) {
      const ThermoPoint& p = *row.point;
      for (double v : {p.zq_scaled(), p.z_classical.value, p.e_quantum, p.e_classical,
                       p.s_quantum, p.s_classical}) {
        out << ',' << format_double(v);
      }
    } else {
      out << ",,,,,,";
    }
    if (with_status) out << ',' << row.status;
    out << "\n";
  }
}

void write_table_json(std::ostream& out, std::span<const TableRow> rows) {
  // Same columns as the CSV: status only appears when some row failed.
  const bool any_failed =
      std::any_of(rows.begin(), rows.end(), [](const TableRow& r) { return !r.point; });
  nlohmann::json array = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j;
    j["beta"] = row.beta;
    j["h"] = row.h;
    if (row.point) {
      const ThermoPoint& p = *row.point;
      j["Zq_scaled"] = p.zq_scaled();
      j["Zc"] = p.z_classical.value;
      j["Eq"] = p.e_quantum;
      j["Ec"] = p.e_classical;
      j["Sq"] = p.s_quantum;
      j["Sc"] = p.s_classical;
    }
    if (any_failed) j["status"] = row.status;
    array.push_back(std::move(j));
  }
  out << array.dump(2) << "\n";
}

}  // namespace qcstat
