#include "qcstat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qcstat/error.hpp"

namespace qcstat {

namespace {

void require_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ArgumentError("mass must be positive and finite");
  }
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" +
                     field + "'");
  }
  if (used != field.size()) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": trailing characters in '" + field + "'");
  }
  return value;
}

}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Box:
      return "box";
    case PotentialKind::Homogeneous:
      return "homogeneous";
    case PotentialKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

Potential Potential::box(std::vector<double> lengths, double mass) {
  require_mass(mass);
  if (lengths.empty()) throw ArgumentError("box: need at least one length");
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw ArgumentError("box: lengths must be positive and finite");
    }
  }
  Potential p;
  p.kind_ = PotentialKind::Box;
  p.dimension_ = static_cast<int>(lengths.size());
  p.mass_ = mass;
  p.lengths_ = std::move(lengths);
  return p;
}

Potential Potential::homogeneous(int dimension, double exponent, double mass) {
  require_mass(mass);
  if (dimension < 1) throw ArgumentError("homogeneous: dimension must be >= 1");
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw ArgumentError("homogeneous: exponent nu must be positive (nu > 0)");
  }
  Potential p;
  p.kind_ = PotentialKind::Homogeneous;
  p.dimension_ = dimension;
  p.mass_ = mass;
  p.exponent_ = exponent;
  return p;
}

Potential Potential::tabulated(std::vector<double> x, std::vector<double> v,
                               double mass) {
  require_mass(mass);
  if (x.size() != v.size()) {
    throw ArgumentError("tabulated: x and V sample counts differ");
  }
  if (x.size() < 2) throw ArgumentError("tabulated: need at least two samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i])) {
      throw ArgumentError("tabulated: samples must be finite");
    }
    if (v[i] < 0.0) {
      throw ArgumentError("tabulated: V must be non-negative (sample " +
                          std::to_string(i) + ")");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw ArgumentError("tabulated: x must be strictly increasing (sample " +
                          std::to_string(i) + ")");
    }
  }
  Potential p;
  p.kind_ = PotentialKind::Tabulated;
  p.dimension_ = 1;
  p.mass_ = mass;
  p.x_ = std::move(x);
  p.v_ = std::move(v);
  return p;
}

double Potential::volume() const {
  if (kind_ != PotentialKind::Box) {
    throw ArgumentError("volume: defined for box potentials only");
  }
  double vol = 1.0;
  for (double l : lengths_) vol *= l;
  return vol;
}

double Potential::exponent() const {
  if (kind_ != PotentialKind::Homogeneous) {
    throw ArgumentError("exponent: defined for homogeneous potentials only");
  }
  return exponent_;
}

double Potential::lower() const {
  if (kind_ == PotentialKind::Box && dimension_ == 1) return 0.0;
  if (kind_ == PotentialKind::Tabulated) return x_.front();
  throw ArgumentError("lower: defined for one-dimensional bounded domains");
}

double Potential::upper() const {
  if (kind_ == PotentialKind::Box && dimension_ == 1) return lengths_.front();
  if (kind_ == PotentialKind::Tabulated) return x_.back();
  throw ArgumentError("upper: defined for one-dimensional bounded domains");
}

double Potential::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension_) {
    throw ArgumentError("evaluate: point has dimension " +
                        std::to_string(x.size()) + ", potential has " +
                        std::to_string(dimension_));
  }
  switch (kind_) {
    case PotentialKind::Box:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0 && x[i] <= lengths_[i])) {
          throw DomainError("evaluate: point outside the box");
        }
      }
      return 0.0;
    case PotentialKind::Homogeneous: {
      double r2 = 0.0;
      for (double xi : x) r2 += xi * xi;
      return std::pow(std::sqrt(r2), exponent_);
    }
    case PotentialKind::Tabulated:
      return at(x[0]);
  }
  return 0.0;
}

double Potential::at(double x) const {
  switch (kind_) {
    case PotentialKind::Box:
      if (dimension_ != 1) {
        throw ArgumentError("at: scalar evaluation needs a one-dimensional box");
      }
      if (!(x >= 0.0 && x <= lengths_.front())) {
        throw DomainError("evaluate: point outside the box");
      }
      return 0.0;
    case PotentialKind::Homogeneous:
      return std::pow(std::abs(x), exponent_);
    case PotentialKind::Tabulated: {
      if (!(x >= x_.front() && x <= x_.back())) {
        throw RangeError("evaluate: x outside the tabulated range");
      }
      auto it = std::upper_bound(x_.begin(), x_.end(), x);
      if (it == x_.end()) return v_.back();
      const auto i = static_cast<std::size_t>(it - x_.begin());
      const double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
      return v_[i - 1] + t * (v_[i] - v_[i - 1]);
    }
  }
  return 0.0;
}

std::string Potential::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_) << "(N=" << dimension_;
  switch (kind_) {
    case PotentialKind::Box:
      os << ", L=(";
      for (std::size_t i = 0; i < lengths_.size(); ++i) {
        os << (i ? "," : "") << lengths_[i];
      }
      os << ")";
      break;
    case PotentialKind::Homogeneous:
      os << ", nu=" << exponent_;
      break;
    case PotentialKind::Tabulated:
      os << ", samples=" << x_.size() << ", x=[" << x_.front() << ","
         << x_.back() << "]";
      break;
  }
  os << ", m=" << mass_ << ")";
  return os.str();
}

double evaluate(const Potential& potential, std::span<const double> x) {
  return potential(x);
}

double check_homogeneity(const Potential& potential,
                         std::span<const double> scales,
                         const std::vector<std::vector<double>>& samples,
                         std::optional<double> exponent) {
  if (samples.empty() || scales.empty()) {
    throw ArgumentError("check_homogeneity: empty sample set");
  }
  double nu = 0.0;
  switch (potential.kind()) {
    case PotentialKind::Box:
      throw ArgumentError("check_homogeneity: box potentials carry no exponent");
    case PotentialKind::Homogeneous:
      nu = exponent.value_or(potential.exponent());
      break;
    case PotentialKind::Tabulated:
      if (!exponent) {
        throw ArgumentError(
            "check_homogeneity: tabulated potentials need an exponent to test");
      }
      nu = *exponent;
      break;
  }
  constexpr double floor = 1e-300;
  double worst = 0.0;
  std::vector<double> scaled;
  for (double s : scales) {
    if (!(s > 0.0)) throw ArgumentError("check_homogeneity: scales must be > 0");
    for (const auto& x : samples) {
      scaled.assign(x.begin(), x.end());
      for (auto& xi : scaled) xi *= s;
      const double expected = std::pow(s, nu) * potential(x);
      const double actual = potential(scaled);
      worst = std::max(worst, std::abs(actual - expected) /
                                  std::max(std::abs(expected), floor));
    }
  }
  return worst;
}

ScalingExponents scaling_exponents(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw ArgumentError("scaling_exponents: nu must be positive");
  }
  const double substitution = 2.0 / (2.0 + nu);
  return {substitution, 2.0 * nu / (2.0 + nu)};
}

Potential read_tabulated_csv(std::istream& in, double mass) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> xs;
  std::vector<double> vs;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : text) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != "x,V") {
        throw ParseError("tabulated CSV: expected header 'x,V', got '" + text +
                         "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected two comma-separated columns");
    }
    xs.push_back(parse_number(trim(text.substr(0, comma)), line_no));
    vs.push_back(parse_number(trim(text.substr(comma + 1)), line_no));
  }
  if (!header_seen) throw ParseError("tabulated CSV: missing header 'x,V'");
  try {
    return Potential::tabulated(std::move(xs), std::move(vs), mass);
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("tabulated CSV: ") + e.what());
  }
}

Potential load_tabulated_csv(const std::string& path, double mass) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open potential file '" + path + "'");
  return read_tabulated_csv(in, mass);
}

}  // namespace qcstat
