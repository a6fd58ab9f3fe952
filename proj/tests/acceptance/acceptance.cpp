// One line per acceptance criterion: "PASS n: ..." or "FAIL n: ...", followed
// by indented detail lines. Exit status counts failures other than the ones
// named with --known-failing (which are still printed as FAIL).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "qcstat/ensemble.hpp"
#include "qcstat/game.hpp"
#include "qcstat/numeric.hpp"
#include "qcstat/spectrum.hpp"
#include "qcstat/verify.hpp"

using namespace qcstat;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok    " : "MISS  ") + what);
  }
  void info(const std::string& what) { details.push_back("      " + what); }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::string describe(const VerificationReport& r) {
  return to_string(r.claim) + " " + to_string(r.status) + " on " + r.model +
         fmt(", worst margin %.3g, tolerance %.3g", r.worst_margin, r.tolerance);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Potential> c11_models() {
  return {Potential::box({1.0}), Potential::homogeneous(1, 1.0),
          Potential::homogeneous(1, 2.0), Potential::homogeneous(1, 4.0)};
}

Outcome sum_inequality() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid = default_grid();
  for (const auto& pot : c11_models()) {
    ThermoModel model(pot);
    const auto r = check_c11(model, grid);
    o.require(r.status == Status::Holds, describe(r));
  }
  const double t = seconds_since(t0);
  o.require(t < 120.0, fmt("runtime %.1f s (limit 120 s)", t));
  return o;
}

Outcome high_temperature_limit() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  ThermoModel box(Potential::box({1.0}));
  const auto betas = geometric_sequence(1.0, 0.5, 9);
  const auto r = check_c13(box, 1.0, betas);
  for (const auto* rep : {&r.z, &r.e}) {
    o.require(rep->status == Status::Holds, describe(*rep));
    for (const auto& n : rep->notes) o.info(n);
  }
  const double t = seconds_since(t0);
  o.require(t < 60.0, fmt("runtime %.1f s (limit 60 s)", t));

  // Where the 2% threshold is actually reached at h = 1.
  const auto longer = geometric_sequence(1.0, 0.5, 17);
  box.prepare(longer, std::vector<double>{1.0});
  for (double beta : longer) {
    const auto p = box.point(beta, 1.0);
    const double rz = std::abs(p.zq_scaled() / p.z_classical.value - 1.0);
    const double re = std::abs(p.e_quantum / p.e_classical - 1.0);
    if (beta <= 1.0 / 256) {
      o.info(fmt("extended sweep: beta = 2^%.0f  |R_Z - 1| = %.4f  |R_E - 1| = %.4f",
                 std::log2(beta), rz, re));
    }
  }
  return o;
}

Outcome energy_gap_integral() {
  Outcome o;
  for (const auto& pot : {Potential::box({1.0}), Potential::homogeneous(1, 2.0)}) {
    ThermoModel model(pot);
    const auto r = check_t31(model, 1.0, 1.0, 1e-3);
    o.require(r.status == Status::Holds, describe(r));
    for (const auto& n : r.notes) o.info(n);
  }
  return o;
}

Outcome entropy_monotonicity() {
  Outcome o;
  std::mt19937_64 rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 7;
    const auto levels = oracle::uniform(rng, k, 0.05, 5.0);
    const double lambda = oracle::uniform(rng, 1, 0.1, 2.0)[0];
    const auto f = [&](double l) { return psi(levels, l).value; };
    const double fd = oracle::derivative(f, lambda, 1e-3);
    worst = std::max(worst, oracle::relative(psi(levels, lambda).derivative, fd));
  }
  o.require(worst < 1e-7,
            fmt("Psi' closed form vs finite differences, 100 level sets: worst relative %.2e",
                worst));

  const Grid grid = default_grid();
  for (const auto& pot : {Potential::box({1.0}), Potential::homogeneous(1, 2.0),
                          Potential::homogeneous(1, 4.0)}) {
    ThermoModel model(pot);
    const auto r = check_t41(model, grid);
    o.require(r.beta.status == Status::Holds, describe(r.beta));
    o.require(r.h.status == Status::Holds, describe(r.h));
  }
  return o;
}

Outcome homogeneous_propositions() {
  Outcome o;
  ThermoModel osc(Potential::homogeneous(1, 2.0));
  const auto r = check_c41_and_props(osc, 1.0, log_grid(0.5, 4.0, 9));
  for (const auto* rep : {&r.p41, &r.p43, &r.c41}) {
    o.require(rep->status == Status::Holds, describe(*rep));
    for (const auto& n : rep->notes) o.info(n);
  }
  return o;
}

Outcome semiclassical_gaps() {
  Outcome o;
  ThermoModel box(Potential::box({1.0}));
  std::vector<WehrlGaps> gaps;
  const auto r = check_wehrl(box, 1.0, geometric_sequence(1.0, 0.5, 7), 0.02, &gaps);
  o.require(r.status == Status::Holds, describe(r));
  for (const auto& g : gaps) {
    o.info(fmt("h = %-9.6g", g.h) + fmt(" energy %.5f  sum %.5f  entropy %.5f", g.energy, g.sum,
                                        g.entropy));
  }
  o.require(!gaps.empty() && gaps.back().entropy < 0.02,
            fmt("|S_q - S_c| = %.5f at the endpoint (limit 0.02)", gaps.back().entropy));
  return o;
}

Outcome game_checks() {
  Outcome o;
  std::mt19937_64 rng(97);

  double grad_worst = 0.0, station_worst = 0.0, hess_worst = 0.0, null_worst = 0.0,
         log_z_worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 7;
    const auto e = oracle::uniform(rng, k, 0.0, 5.0);
    const auto p = oracle::uniform(rng, k, 0.05, 3.0);
    const double lambda = -oracle::uniform(rng, 1, 0.1, 2.0)[0];
    const auto g = gradient(GameState(e, lambda, p));
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto f = [&](double x) {
        auto q = p;
        q[i] = x;
        return compromise(GameState(e, lambda, q)).f;
      };
      diff = std::max(diff, std::abs(g[i] - oracle::derivative(f, p[i], 1e-4)));
      scale = std::max(scale, std::abs(g[i]));
    }
    grad_worst = std::max(grad_worst, diff / scale);

    const auto s = stationary_point(e, lambda);
    const GameState top(e, lambda, s);
    for (double gi : gradient(top)) station_worst = std::max(station_worst, std::abs(gi));
    const auto h = hessian(top);
    Eigen::MatrixXd fd(h.rows(), h.cols());
    for (std::size_t j = 0; j < k; ++j) {
      const auto col = [&](double x, std::size_t i) {
        auto q = s;
        q[j] = x;
        return gradient(GameState(e, lambda, q))[i];
      };
      for (std::size_t i = 0; i < k; ++i) {
        fd(i, j) = oracle::derivative([&](double x) { return col(x, i); }, s[j], 1e-4 * s[j]);
      }
    }
    hess_worst = std::max(hess_worst, (h - fd).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff());
    const Eigen::Map<const Eigen::VectorXd> sv(s.data(), static_cast<Eigen::Index>(k));
    null_worst = std::max(null_worst, (h * sv).norm() / (h.norm() * sv.norm()));
    std::vector<double> u(k);
    for (std::size_t i = 0; i < k; ++i) u[i] = lambda * e[i];
    log_z_worst = std::max(log_z_worst, std::abs(compromise(top).f - log_sum_exp(u)));
  }
  o.require(grad_worst < 1e-7,
            fmt("gradient vs finite differences, 100 states: worst relative %.2e", grad_worst));
  o.require(station_worst < 1e-12,
            fmt("gradient at the stationary point: largest component %.2e", station_worst));
  o.require(hess_worst < 1e-5,
            fmt("Hessian vs finite differences: worst relative %.2e", hess_worst));
  o.require(null_worst < 1e-10, fmt("|H p| / (|H| |p|) worst %.2e", null_worst));
  o.require(log_z_worst < 1e-12,
            fmt("F at the stationary point vs log sum exp(lambda E): worst %.2e", log_z_worst));

  bool signs_ok = true;
  double minor_worst = 0.0;
  for (std::size_t total = 2; total <= 8; ++total) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto e = oracle::uniform(rng, total, 0.1, 5.0);
      const double lambda = -oracle::uniform(rng, 1, 0.1, 2.0)[0];
      const auto m = principal_minor_signs(e, lambda, total - 1);
      for (std::size_t k = 0; k < m.signs.size(); ++k) {
        signs_ok = signs_ok && m.signs[k] == ((k + 1) % 2 == 0 ? 1 : -1) &&
                   (m.direct[k] > 0) == (m.signs[k] > 0);
        minor_worst = std::max(minor_worst, oracle::relative(m.closed_form[k], m.direct[k]));
      }
    }
  }
  o.require(signs_ok, "minor signs are (-1)^k for k < K, K = 2..8 (70 level sets)");
  o.require(minor_worst < 1e-9,
            fmt("closed-form minors vs LU determinants: worst relative %.2e", minor_worst));

  const auto e = oracle::uniform(rng, 6, 0.1, 5.0);
  const double lambda = -1.3;
  const auto gibbs = GameState(e, lambda, stationary_point(e, lambda)).probabilities();
  double tv_worst = 0.0;
  for (int start = 0; start < 20; ++start) {
    const auto r = ascend(e, lambda, oracle::uniform(rng, 6, 0.01, 10.0));
    tv_worst = std::max(tv_worst,
                        total_variation(GameState(e, lambda, r.weights).probabilities(), gibbs));
  }
  o.require(tv_worst < 1e-8, fmt("ascent from 20 random starts: worst TV to Gibbs %.2e", tv_worst));
  return o;
}

Outcome spectrum_oracles() {
  Outcome o;
  const auto box = Potential::box({1.0});
  const double exact = pi * pi / 2;
  const double e4000 = solve_fd_1d(box, 1.0, {0.0, 1.0, 4000}, 1)[0];
  o.require(std::abs(e4000 - exact) < 1e-5,
            fmt("finite-difference box E_1 at P = 4000: error %.2e", e4000 - exact));
  const double ep = std::abs(solve_fd_1d(box, 1.0, {0.0, 1.0, 500}, 1)[0] - exact);
  const double e2p = std::abs(solve_fd_1d(box, 1.0, {0.0, 1.0, 1001}, 1)[0] - exact);
  o.require(std::abs(ep / e2p - 4.0) < 0.5,
            fmt("error ratio between P = 500 and 2P: %.4f (want 4 +- 0.5)", ep / e2p));

  const auto osc = Potential::homogeneous(1, 2.0);
  FdOptions opts;
  opts.extrapolate = true;
  const auto fd_ground = [&](double h) {
    return solve_fd_1d(osc, h, auto_fd_grid(osc, h, 1.0 * h), 1, opts)[0];
  };
  const double base = fd_ground(1.0);
  for (double h : {0.5, 2.0}) {
    const double ratio = fd_ground(h) / base;
    o.require(std::abs(ratio / h - 1.0) < 1e-4,
              fmt("oscillator E_1(h) / E_1(1) at h = %g: %.8f", h, ratio));
  }
  return o;
}

Outcome determinant_identity() {
  Outcome o;
  std::mt19937_64 rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + trial % 6;
    const auto r = oracle::uniform(rng, k, -5.0, 5.0);
    const double a = oracle::uniform(rng, 1, -3.0, 3.0)[0];
    worst = std::max(worst, oracle::relative(structured_det(r, a), oracle::dense_det(r, a)));
  }
  o.require(worst < 1e-10,
            fmt("structured vs dense determinants, 50 instances: worst relative %.2e", worst));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-failing") == 0 && i + 1 < argc) {
      known.insert(std::atoi(argv[++i]));
    }
  }
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "(2 pi h)^N Z_q <= Z_c on the default grid, box and nu = 1, 2, 4", sum_inequality},
      {2, "box ratios within 2% of 1 at beta = 1/256, h = 1", high_temperature_limit},
      {3, "energy-gap integral identity, box and nu = 2", energy_gap_integral},
      {4, "Psi' closed form; S_q decreasing in beta and h", entropy_monotonicity},
      {5, "h-derivative identity, sign equivalence, h Z_q decreasing (nu = 2)",
       homogeneous_propositions},
      {6, "semiclassical gaps close, box, beta = 1, h -> 1/64", semiclassical_gaps},
      {7, "compromise function: gradient, Hessian, minors, ascent", game_checks},
      {8, "finite-difference box and oscillator scaling", spectrum_oracles},
      {9, "structured determinant", determinant_identity},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.push_back(std::string("MISS  exception: ") + e.what());
    }
    std::printf("%s %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                seconds_since(t0));
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    if (!o.pass && !known.count(c.id)) ++unexpected;
    if (o.pass && known.count(c.id)) std::printf("    (listed as known-failing but passed)\n");
  }
  std::printf("%d unexpected failure(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
