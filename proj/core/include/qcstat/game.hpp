#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcstat {

// Levels E_1..E_K, multiplier lambda = -beta <= 0 and unnormalised positive
// weights p_1..p_K. Probabilities are P_n = p_n / Z with Z = sum_n p_n.
class GameState {
 public:
  GameState(std::vector<double> levels, double lambda, std::vector<double> weights);

  std::span<const double> levels() const noexcept { return levels_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double lambda() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return levels_.size(); }

  double z() const noexcept { return z_; }
  // Z_k = Z - p_k (0-based k).
  double z_partial(std::size_t k) const;
  std::vector<double> probabilities() const;

 private:
  std::vector<double> levels_;
  std::vector<double> weights_;
  double lambda_;
  double z_;
};

struct Compromise {
  double f = 0.0;        // lambda E + S
  double energy = 0.0;   // E = sum_n E_n P_n
  double entropy = 0.0;  // S = -sum_n P_n log P_n
};

Compromise compromise(const GameState& state);

// dF/dp_k = lambda (E_k / Z - sum_n E_n p_n / Z^2) - log p_k / Z
//           + sum_n p_n log p_n / Z^2
std::vector<double> gradient(const GameState& state);

// p_n = exp(lambda E_n).
std::vector<double> stationary_point(std::span<const double> levels, double lambda);

// Hessian of F at the stationary point: -Z_k / (p_k Z^2) on the diagonal,
// 1 / Z^2 elsewhere. Throws ContractError when the state's probabilities are
// not the Gibbs distribution to 1e-10 relative.
Eigen::MatrixXd hessian(const GameState& state);

// -a f'(a) + f(a) with f(x) = prod_i (r_i - x): the determinant of the matrix
// with diagonal r and every off-diagonal entry equal to a.
double structured_det(std::span<const double> diagonal, double off_value);

struct MinorReport {
  // For k = 1..k_max: the closed form
  //   H_k = (-Z)^-k (1 - sum_{n<=k} p_n / Z) / prod_{n<=k} p_n,
  // the determinant of the leading k x k block of hessian() by LU, and
  // sgn(H_k) from the closed form.
  std::vector<double> closed_form;
  std::vector<double> direct;
  std::vector<int> signs;
};

// Leading principal minors at the stationary point. Requires distinct
// levels, lambda < 0 and 1 <= k_max < K; k_max >= K throws ContractError
// because the full Hessian is singular along the ray c p.
MinorReport principal_minor_signs(std::span<const double> levels, double lambda,
                                  std::size_t k_max);

struct AscentOptions {
  // Step along the natural gradient in log-weight coordinates; a step of 1
  // lands on the maximiser in one move.
  double step = 0.5;
  std::size_t max_iterations = 100'000;
  // Stop once max_k |log(P_k / Gibbs_k)| is below tolerance * max(1, |lambda E_k|).
  double tolerance = 1e-13;
};

struct AscentStep {
  std::size_t iteration = 0;
  double f = 0.0;              // evaluated as log Z - KL(P || Gibbs)
  double gradient_norm = 0.0;  // Euclidean norm of dF/dp
};

struct AscentResult {
  std::vector<double> weights;
  std::size_t iterations = 0;
  std::vector<AscentStep> trace;
};

// Gradient ascent on F in log-weights u_k = log p_k with the scale fixed by
// renormalising to sum_k p_k = sum_k exp(lambda E_k) after every step.
// Backtracks until F does not decrease. Throws ConvergenceError after
// max_iterations.
AscentResult ascend(std::span<const double> levels, double lambda,
                    std::vector<double> initial, const AscentOptions& options = {});

void write_trace_csv(std::ostream& out, std::span<const AscentStep> trace);

// Total-variation distance between two probability vectors.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace qcstat
