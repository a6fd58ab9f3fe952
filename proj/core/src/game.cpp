#include "qcstat/game.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

#include "qcstat/error.hpp"
#include "qcstat/numeric.hpp"

namespace qcstat {

namespace {

void require_levels(std::span<const double> levels) {
  if (levels.empty()) throw ArgumentError("game: need at least one level");
  for (double e : levels) {
    if (!std::isfinite(e)) throw ArgumentError("game: levels must be finite");
  }
}

void require_lambda(double lambda, bool strict) {
  if (!std::isfinite(lambda)) throw ArgumentError("game: lambda must be finite");
  if (strict ? !(lambda < 0.0) : !(lambda <= 0.0)) {
    throw ArgumentError(strict ? "game: lambda = -beta must be negative"
                               : "game: lambda = -beta must not be positive");
  }
}

double sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc += x;
  return acc.value();
}

std::vector<double> softmax(std::span<const double> u) {
  const double norm = log_sum_exp(u);
  std::vector<double> p(u.size());
  std::transform(u.begin(), u.end(), p.begin(),
                 [norm](double x) { return std::exp(x - norm); });
  return p;
}

double norm2(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc += x * x;
  return std::sqrt(acc.value());
}

}  // namespace

GameState::GameState(std::vector<double> levels, double lambda,
                     std::vector<double> weights)
    : levels_(std::move(levels)), weights_(std::move(weights)), lambda_(lambda) {
  require_levels(levels_);
  require_lambda(lambda_, false);
  if (weights_.size() != levels_.size()) {
    throw ArgumentError("game: " + std::to_string(levels_.size()) + " levels but " +
                        std::to_string(weights_.size()) + " weights");
  }
  for (double p : weights_) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw DomainError("game: weights must be positive and finite");
    }
  }
  z_ = sum(weights_);
}

double GameState::z_partial(std::size_t k) const {
  CompensatedSum acc;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (j != k) acc += weights_[j];
  }
  return acc.value();
}

std::vector<double> GameState::probabilities() const {
  std::vector<double> out(weights_.size());
  std::transform(weights_.begin(), weights_.end(), out.begin(),
                 [this](double p) { return p / z_; });
  return out;
}

Compromise compromise(const GameState& state) {
  const auto levels = state.levels();
  const auto p = state.probabilities();
  CompensatedSum energy, entropy;
  for (std::size_t i = 0; i < p.size(); ++i) {
    energy += levels[i] * p[i];
    entropy += -p[i] * std::log(p[i]);
  }
  Compromise c;
  c.energy = energy.value();
  c.entropy = entropy.value();
  c.f = state.lambda() * c.energy + c.entropy;
  return c;
}

std::vector<double> gradient(const GameState& state) {
  const auto levels = state.levels();
  const auto p = state.weights();
  const double z = state.z();
  const double lambda = state.lambda();
  CompensatedSum a, b;
  for (std::size_t i = 0; i < p.size(); ++i) {
    a += levels[i] * p[i];
    b += p[i] * std::log(p[i]);
  }
  const double z2 = z * z;
  std::vector<double> g(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    g[k] = lambda * (levels[k] / z - a.value() / z2) - std::log(p[k]) / z +
           b.value() / z2;
  }
  return g;
}

std::vector<double> stationary_point(std::span<const double> levels, double lambda) {
  require_levels(levels);
  require_lambda(lambda, false);
  std::vector<double> p(levels.size());
  std::transform(levels.begin(), levels.end(), p.begin(),
                 [lambda](double e) { return std::exp(lambda * e); });
  return p;
}

Eigen::MatrixXd hessian(const GameState& state) {
  const auto levels = state.levels();
  const auto p = state.weights();
  const std::size_t k = p.size();

  const auto gibbs = softmax([&] {
    std::vector<double> u(k);
    for (std::size_t i = 0; i < k; ++i) u[i] = state.lambda() * levels[i];
    return u;
  }());
  const auto prob = state.probabilities();
  for (std::size_t i = 0; i < k; ++i) {
    if (!(std::abs(prob[i] / gibbs[i] - 1.0) <= 1e-10)) {
      throw ContractError("hessian: weights are not the stationary point exp(lambda E_n)");
    }
  }

  const double z = state.z();
  const double z2 = z * z;
  Eigen::MatrixXd h = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(k),
                                                static_cast<Eigen::Index>(k), 1.0 / z2);
  for (std::size_t i = 0; i < k; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h(ii, ii) = -state.z_partial(i) / (p[i] * z2);
  }
  return h;
}

double structured_det(std::span<const double> diagonal, double off_value) {
  if (diagonal.empty()) throw ArgumentError("structured_det: need k >= 1");
  const double a = off_value;
  double f = 1.0;
  for (double r : diagonal) f *= r - a;
  // f'(a) = -sum_i prod_{j != i} (r_j - a), written out so r_i == a is safe.
  double derivative = 0.0;
  for (std::size_t i = 0; i < diagonal.size(); ++i) {
    double term = 1.0;
    for (std::size_t j = 0; j < diagonal.size(); ++j) {
      if (j != i) term *= diagonal[j] - a;
    }
    derivative -= term;
  }
  return -a * derivative + f;
}

MinorReport principal_minor_signs(std::span<const double> levels, double lambda,
                                  std::size_t k_max) {
  require_levels(levels);
  require_lambda(lambda, true);
  if (std::set<double>(levels.begin(), levels.end()).size() != levels.size()) {
    throw ArgumentError("principal_minor_signs: levels must be distinct");
  }
  const std::size_t total = levels.size();
  if (k_max == 0) throw ArgumentError("principal_minor_signs: k_max must be >= 1");
  if (k_max >= total) {
    throw ContractError("principal_minor_signs: k_max = " + std::to_string(k_max) +
                        " must be below K = " + std::to_string(total) +
                        "; the K x K Hessian is singular along the scale ray");
  }
  const auto p = stationary_point(levels, lambda);
  const GameState state({levels.begin(), levels.end()}, lambda, p);
  const Eigen::MatrixXd h = hessian(state);
  const double z = state.z();

  MinorReport out;
  CompensatedSum partial;
  double log_prod = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    partial += p[k - 1];
    log_prod += std::log(p[k - 1]);
    const double gap = 1.0 - partial.value() / z;
    const double magnitude = std::exp(-static_cast<double>(k) * std::log(z) +
                                      std::log(gap) - log_prod);
    const int sign = (k % 2 == 0) ? 1 : -1;
    out.closed_form.push_back(sign * magnitude);
    out.signs.push_back(gap > 0.0 ? sign : 0);
    const auto kk = static_cast<Eigen::Index>(k);
    out.direct.push_back(h.topLeftCorner(kk, kk).partialPivLu().determinant());
  }
  return out;
}

AscentResult ascend(std::span<const double> levels, double lambda,
                    std::vector<double> initial, const AscentOptions& options) {
  require_levels(levels);
  require_lambda(lambda, true);
  if (initial.size() != levels.size()) {
    throw ArgumentError("ascend: one initial weight per level required");
  }
  for (double p : initial) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw DomainError("ascend: initial weights must be positive");
    }
  }
  if (!(options.step > 0.0)) throw ArgumentError("ascend: step must be positive");

  const std::size_t k = levels.size();
  std::vector<double> target(k);
  for (std::size_t i = 0; i < k; ++i) target[i] = lambda * levels[i];
  const double log_scale = log_sum_exp(target);

  std::vector<double> u(k);
  for (std::size_t i = 0; i < k; ++i) u[i] = std::log(initial[i]);
  const auto renormalise = [&](std::vector<double>& v) {
    const double shift = log_scale - log_sum_exp(v);
    for (auto& x : v) x += shift;
  };
  const auto weights_of = [](std::span<const double> v) {
    std::vector<double> w(v.size());
    std::transform(v.begin(), v.end(), w.begin(), [](double x) { return std::exp(x); });
    return w;
  };
  // Near the top lambda E + S is flat to rounding and cannot rank two
  // nearby states. The same quantity written as F = log Z - KL(P || Gibbs)
  // can: KL is a sum of non-negative terms, each accurate to a relative
  // 1e-8 or so even when the state is 1e-8 from Gibbs.
  // r_i = log(P_i / G_i); with v renormalised this is just v_i - lambda E_i.
  const auto log_ratios = [&](std::span<const double> v) {
    std::vector<double> r(k);
    for (std::size_t i = 0; i < k; ++i) r[i] = v[i] - target[i];
    return r;
  };
  const auto divergence = [&](std::span<const double> r) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < k; ++i) {
      // G_i (t log t - t + 1) with t = e^r
      const double phi = r[i] * std::exp(r[i]) - std::expm1(r[i]);
      acc += std::exp(target[i] - log_scale) * phi;
    }
    return std::max(acc.value(), 0.0);
  };
  double scale = 1.0;
  for (double t : target) scale = std::max(scale, std::abs(t));
  renormalise(u);

  AscentResult result;
  auto r = log_ratios(u);
  double kl = divergence(r);
  for (std::size_t iter = 0;; ++iter) {
    const GameState state(std::vector<double>(levels.begin(), levels.end()), lambda,
                          weights_of(u));
    double worst = 0.0;
    for (double x : r) worst = std::max(worst, std::abs(x));
    const double grad_norm = norm2(gradient(state));
    result.trace.push_back({iter, log_scale - kl, grad_norm});
    if (worst < options.tolerance * scale) break;
    if (iter >= options.max_iterations) {
      throw ConvergenceError("ascend: no convergence after " +
                                 std::to_string(options.max_iterations) + " iterations",
                             grad_norm);
    }

    // Natural-gradient direction lambda E_i - log P_i - F, which is -r_i up
    // to a constant that the renormalisation removes.
    bool accepted = false;
    for (double eta = options.step; eta > 1e-12; eta *= 0.5) {
      std::vector<double> trial(k);
      for (std::size_t i = 0; i < k; ++i) trial[i] = u[i] - eta * r[i];
      renormalise(trial);
      const auto r_trial = log_ratios(trial);
      const double kl_trial = divergence(r_trial);
      if (kl_trial <= kl) {
        u = std::move(trial);
        r = r_trial;
        kl = kl_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Nothing measurable left to gain; only acceptable at the top.
      if (worst < 1e-8) break;
      throw ConvergenceError("ascend: line search failed", grad_norm);
    }
    ++result.iterations;
  }
  result.weights = weights_of(u);
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const AscentStep> trace) {
  const auto old = out.precision(17);
  out << "iter,F,grad_norm\n";
  for (const auto& s : trace) {
    out << s.iteration << ',' << s.f << ',' << s.gradient_norm << '\n';
  }
  out.precision(old);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ArgumentError("total_variation: size mismatch");
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc.value();
}

}  // namespace qcstat
