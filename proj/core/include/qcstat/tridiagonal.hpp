#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace qcstat {

// Real symmetric tridiagonal matrix: diagonal d_0..d_{n-1} and
// off-diagonal e_0..e_{n-2}.
class SymmetricTridiagonal {
 public:
  SymmetricTridiagonal(std::vector<double> diagonal,
                       std::vector<double> off_diagonal);

  std::size_t size() const noexcept { return diagonal_.size(); }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }
  const std::vector<double>& off_diagonal() const noexcept { return off_; }

  // Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
  std::size_t count_below(double x) const;

  // Interval containing the whole spectrum.
  std::pair<double, double> gershgorin_bounds() const;

 private:
  friend class TridiagonalEigensolver;

  std::vector<double> diagonal_;
  std::vector<double> off_;
  std::vector<double> off_sq_;
  double pivot_min_ = 0.0;
};

// The `count` smallest eigenvalues in ascending order, each to roughly
// machine precision relative to the matrix norm. Eigenvalues are isolated by
// Sturm-count bisection and polished by safeguarded Newton steps on the
// characteristic polynomial; isolated eigenvalues are refined in parallel.
std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& matrix,
                                       std::size_t count);

}  // namespace qcstat
