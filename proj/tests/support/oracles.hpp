#pragma once

// Reference computations used only by the tests. They are deliberately the
// slow, obvious versions: direct sums, dense matrices, finite differences.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double direct_z(const std::vector<double>& levels, double beta) {
  double z = 0.0;
  for (double e : levels) z += std::exp(-beta * e);
  return z;
}

inline double direct_energy(const std::vector<double>& levels, double beta) {
  double num = 0.0, den = 0.0;
  for (double e : levels) {
    num += e * std::exp(-beta * e);
    den += std::exp(-beta * e);
  }
  return num / den;
}

inline double direct_entropy(const std::vector<double>& levels, double beta) {
  const double z = direct_z(levels, beta);
  double s = 0.0;
  for (double e : levels) {
    const double p = std::exp(-beta * e) / z;
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

inline std::vector<double> box_levels(double length, double mass, double h, int count) {
  std::vector<double> out;
  for (int n = 1; n <= count; ++n) {
    const double k = n * std::numbers::pi / length;
    out.push_back(h * h * k * k / (2.0 * mass));
  }
  return out;
}

// Five-point central difference.
inline double derivative(const std::function<double(double)>& f, double x, double step) {
  return (-f(x + 2 * step) + 8 * f(x + step) - 8 * f(x - step) + f(x - 2 * step)) /
         (12.0 * step);
}

inline std::vector<double> dense_eigenvalues(const std::vector<double>& d,
                                             const std::vector<double>& e) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = d[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

inline double dense_det(const std::vector<double>& r, double a) {
  const auto k = static_cast<Eigen::Index>(r.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(k, k, a);
  for (Eigen::Index i = 0; i < k; ++i) m(i, i) = r[i];
  return m.fullPivLu().determinant();
}

inline double relative(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

}  // namespace oracle
