#include "qcstat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "qcstat/error.hpp"
#include "qcstat/numeric.hpp"
#include "qcstat/parallel.hpp"

namespace qcstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Rounding floor for quantities assembled from compensated sums, logs and
// exponentials.
constexpr double kRounding = 1e-13;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Evaluated {
  double beta = 0.0;
  double h = 0.0;
  std::optional<ThermoPoint> point;
  std::string error;
};

// Points for every (beta, h), beta-major. Numerical failures are recorded
// per point; validation errors propagate.
std::vector<Evaluated> evaluate(ThermoModel& model, std::span<const double> betas,
                                std::span<const double> hs, std::string* prepare_error) {
  try {
    model.prepare(betas, hs);
  } catch (const NumericalError& e) {
    if (prepare_error) *prepare_error = e.what();
    return {};
  }
  std::vector<Evaluated> out(betas.size() * hs.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    for (std::size_t j = 0; j < hs.size(); ++j) {
      out[i * hs.size() + j].beta = betas[i];
      out[i * hs.size() + j].h = hs[j];
    }
  }
  parallel_for(out.size(), [&](std::size_t k) {
    try {
      out[k].point = model.point(out[k].beta, out[k].h);
    } catch (const NumericalError& e) {
      out[k].error = e.what();
    }
  });
  return out;
}

VerificationReport start(ClaimId id, const ThermoModel& model,
                         std::span<const double> betas, std::span<const double> hs) {
  VerificationReport r;
  r.claim = id;
  r.model = model.potential().describe();
  r.betas.assign(betas.begin(), betas.end());
  r.hs.assign(hs.begin(), hs.end());
  return r;
}

// Record failures; a grid with failed points can not Hold.
void note_failures(VerificationReport& r, std::span<const Evaluated> points) {
  std::size_t failed = 0;
  for (const auto& p : points) {
    if (p.point) continue;
    if (failed < 5) {
      r.notes.push_back("point beta=" + fmt(p.beta) + ", h=" + fmt(p.h) +
                        " failed: " + p.error);
    }
    ++failed;
  }
  if (failed > 0) {
    r.notes.push_back(std::to_string(failed) + " of " + std::to_string(points.size()) +
                      " points failed");
    if (r.status == Status::Holds) r.status = Status::Inconclusive;
  }
}

VerificationReport prepare_failed(VerificationReport r, const std::string& why) {
  r.status = Status::Inconclusive;
  r.worst_margin = std::numeric_limits<double>::quiet_NaN();
  r.notes.push_back("spectrum preparation failed: " + why);
  return r;
}

// Pointwise inequality margin_i > 0 with error bound err_i.
VerificationReport pointwise(
    VerificationReport r, std::span<const Evaluated> points,
    const std::function<std::pair<double, double>(const ThermoPoint&)>& margin) {
  double worst = kInf;
  double tol = 0.0;
  const Evaluated* where = nullptr;
  for (const auto& p : points) {
    if (!p.point) continue;
    const auto [m, err] = margin(*p.point);
    tol = std::max(tol, err);
    if (m < worst) {
      worst = m;
      where = &p;
    }
  }
  r.worst_margin = worst;
  r.tolerance = tol;
  r.status = where ? classify(worst, tol) : Status::Inconclusive;
  if (where) {
    r.notes.push_back("worst at beta=" + fmt(where->beta) + ", h=" + fmt(where->h));
  }
  note_failures(r, points);
  return r;
}

// Strict decrease of a sequence with per-entry error bounds.
struct Trend {
  double worst = kInf;
  double tolerance = 0.0;
  std::size_t worst_index = 0;
};

Trend decreasing(std::span<const double> values, std::span<const double> errors) {
  Trend t;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double m = values[i] - values[i + 1];
    t.tolerance = std::max(t.tolerance, errors[i] + errors[i + 1]);
    if (m < t.worst || std::isnan(m)) {
      t.worst = m;
      t.worst_index = i;
    }
  }
  return t;
}

bool shrinking_tail(std::span<const double> gaps, std::size_t last) {
  if (gaps.size() < 2) return false;
  const std::size_t first = gaps.size() > last ? gaps.size() - last : 0;
  for (std::size_t i = first; i + 1 < gaps.size(); ++i) {
    if (!(gaps[i + 1] < gaps[i])) return false;
  }
  return true;
}

// Least-squares slope of log y against log x.
double log_log_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double sum_error(const ThermoPoint& p) {
  return p.z_quantum.relative_error() + p.z_classical.relative_error() + kRounding;
}

std::vector<double> sorted(std::span<const double> xs, bool descending) {
  std::vector<double> v(xs.begin(), xs.end());
  if (descending) {
    std::sort(v.begin(), v.end(), std::greater<>());
  } else {
    std::sort(v.begin(), v.end());
  }
  return v;
}

}  // namespace

std::string to_string(ClaimId id) {
  switch (id) {
    case ClaimId::C1_1: return "C1_1";
    case ClaimId::C1_2: return "C1_2";
    case ClaimId::C1_3_Z: return "C1_3_Z";
    case ClaimId::C1_3_E: return "C1_3_E";
    case ClaimId::T3_1: return "T3_1";
    case ClaimId::T4_1_beta: return "T4_1_beta";
    case ClaimId::T4_1_h: return "T4_1_h";
    case ClaimId::C4_1: return "C4_1";
    case ClaimId::P4_1: return "P4_1";
    case ClaimId::P4_3: return "P4_3";
    case ClaimId::WEHRL_S: return "WEHRL_S";
  }
  return "unknown";
}

bool theorem_class(ClaimId id) {
  switch (id) {
    case ClaimId::C1_1:
    case ClaimId::C1_3_Z:
    case ClaimId::T3_1:
    case ClaimId::T4_1_beta:
    case ClaimId::T4_1_h:
    case ClaimId::P4_1:
    case ClaimId::P4_3:
      return true;
    default:
      return false;
  }
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Holds: return "Holds";
    case Status::Violated: return "Violated";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

Status classify(double worst_margin, double tolerance) {
  if (worst_margin > tolerance) return Status::Holds;
  if (worst_margin < -tolerance) return Status::Violated;
  return Status::Inconclusive;
}

Grid default_grid() { return {log_grid(1e-2, 10.0, 9), log_grid(0.25, 4.0, 9)}; }

VerificationReport check_c11(ThermoModel& model, const Grid& grid) {
  auto r = start(ClaimId::C1_1, model, grid.betas, grid.hs);
  std::string why;
  const auto points = evaluate(model, grid.betas, grid.hs, &why);
  if (points.empty()) return prepare_failed(r, why);
  // 1 - (2 pi h)^N Z_q / Z_c
  return pointwise(std::move(r), points, [](const ThermoPoint& p) {
    const double m = -std::expm1(p.log_zq_scaled() - std::log(p.z_classical.value));
    return std::make_pair(m, sum_error(p));
  });
}

VerificationReport check_c12(ThermoModel& model, const Grid& grid) {
  auto r = start(ClaimId::C1_2, model, grid.betas, grid.hs);
  std::string why;
  const auto points = evaluate(model, grid.betas, grid.hs, &why);
  if (points.empty()) return prepare_failed(r, why);
  // (E_q - E_c) / E_c
  return pointwise(std::move(r), points, [](const ThermoPoint& p) {
    const double m = (p.e_quantum - p.e_classical) / p.e_classical;
    const double err = p.e_quantum_error / p.e_classical +
                       2.0 * p.z_quantum.tail_ratio + kRounding;
    return std::make_pair(m, err);
  });
}

AsymptoticReports check_c13(ThermoModel& model, double h, std::span<const double> betas,
                            double threshold) {
  const auto bs = sorted(betas, true);
  const double hs[] = {h};
  AsymptoticReports out{start(ClaimId::C1_3_Z, model, bs, hs),
                        start(ClaimId::C1_3_E, model, bs, hs)};
  if (bs.empty()) throw ArgumentError("check_c13: empty beta sequence");
  std::string why;
  const auto points = evaluate(model, bs, hs, &why);
  if (points.empty()) {
    return {prepare_failed(out.z, why), prepare_failed(out.e, why)};
  }

  std::vector<double> dz, de, ez, ee;
  bool complete = true;
  for (const auto& p : points) {
    if (!p.point) {
      complete = false;
      continue;
    }
    const ThermoPoint& t = *p.point;
    dz.push_back(std::abs(std::expm1(t.log_zq_scaled() - std::log(t.z_classical.value))));
    de.push_back(std::abs(t.e_quantum / t.e_classical - 1.0));
    ez.push_back(sum_error(t));
    ee.push_back(t.e_quantum_error / t.e_classical + 2.0 * t.z_quantum.tail_ratio +
                 kRounding);
  }

  const auto finish = [&](VerificationReport& r, const std::vector<double>& dev,
                          const std::vector<double>& err, const char* name) {
    if (dev.empty()) {
      r.status = Status::Inconclusive;
      note_failures(r, points);
      return;
    }
    r.worst_margin = threshold - dev.back();
    r.tolerance = err.back();
    const bool monotone = shrinking_tail(dev, 4);
    const bool met = r.worst_margin > r.tolerance;
    r.status = (monotone && met && complete) ? Status::Holds : Status::Inconclusive;
    r.notes.push_back(std::string("final |") + name + " - 1| = " + fmt(dev.back()) +
                      " at beta=" + fmt(bs.back()) + " (threshold " + fmt(threshold) +
                      ")");
    std::vector<double> used_betas;
    for (const auto& p : points) {
      if (p.point) used_betas.push_back(p.beta);
    }
    r.notes.push_back("log-log slope of |" + std::string(name) + " - 1| against beta: " +
                      fmt(log_log_slope(used_betas, dev)));
    r.notes.push_back(monotone ? "|R - 1| shrinks over the last four points"
                               : "|R - 1| is not monotone over the last four points");
    std::string seq = "|R - 1| sequence:";
    for (double d : dev) seq += " " + fmt(d);
    r.notes.push_back(seq);
    note_failures(r, points);
  };
  finish(out.z, dz, ez, "R_Z");
  finish(out.e, de, ee, "R_E");
  return out;
}

VerificationReport check_t31(ThermoModel& model, double h, double beta, double tau) {
  if (!(beta > 0.0)) throw ArgumentError("check_t31: beta must be positive");
  if (tau <= 0.0) tau = 1e-3 * beta;
  if (tau > beta) throw ArgumentError("check_t31: need tau <= beta");
  const double bs[] = {tau, beta};
  const double hs[] = {h};
  auto r = start(ClaimId::T3_1, model, bs, hs);
  r.notes.push_back("tau = " + fmt(tau));
  if (tau == beta) {
    r.worst_margin = 1e-3;
    r.tolerance = 0.0;
    r.status = Status::Holds;
    r.notes.push_back("empty interval: both sides are 0");
    return r;
  }
  try {
    model.prepare(bs, hs);
    const auto log_ratio = [&](double b) {
      const ThermoPoint p = model.point(b, h);
      return std::log(p.z_classical.value) - p.log_zq_scaled();
    };
    const double rhs = log_ratio(beta) - log_ratio(tau);
    // gamma = e^s spreads the decades evenly.
    const Estimate lhs = integrate(
        [&](double s) {
          const double g = std::exp(s);
          const ThermoPoint p = model.point(g, h);
          return (p.e_quantum - p.e_classical) * g;
        },
        std::log(tau), std::log(beta), {1e-10, 30});
    const double identity = 1e-3 * std::max(1.0, std::abs(rhs)) - std::abs(lhs.value - rhs);
    const double positivity = lhs.value + 1e-3;
    r.worst_margin = std::min(identity, positivity);
    r.tolerance = lhs.error + kRounding * std::max(1.0, std::abs(rhs));
    r.status = classify(r.worst_margin, r.tolerance);
    r.notes.push_back("LHS (integral of E_q - E_c) = " + fmt(lhs.value));
    r.notes.push_back("RHS (log-ratio difference) = " + fmt(rhs));
    r.notes.push_back("|LHS - RHS| = " + fmt(std::abs(lhs.value - rhs)));
  } catch (const NumericalError& e) {
    r.status = Status::Inconclusive;
    r.worst_margin = std::numeric_limits<double>::quiet_NaN();
    r.notes.push_back(std::string("evaluation failed: ") + e.what());
  }
  return r;
}

MonotonicityReports check_t41(ThermoModel& model, const Grid& grid) {
  if (!model.energy_exponent()) {
    throw ArgumentError("check_t41: needs a family with E_n(h) = phi(h) E_n");
  }
  const auto bs = sorted(grid.betas, false);
  const auto hs = sorted(grid.hs, false);
  MonotonicityReports out{start(ClaimId::T4_1_beta, model, bs, hs),
                          start(ClaimId::T4_1_h, model, bs, hs)};
  std::string why;
  const auto points = evaluate(model, bs, hs, &why);
  if (points.empty()) return {prepare_failed(out.beta, why), prepare_failed(out.h, why)};

  const std::size_t nb = bs.size();
  const std::size_t nh = hs.size();
  std::vector<double> log_s(points.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> err(points.size(), 0.0);
  bool vacuous = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!points[k].point) continue;
    const ThermoPoint& p = *points[k].point;
    log_s[k] = p.log_s_quantum;
    if (!std::isfinite(p.log_s_quantum)) vacuous = true;
    err[k] = (p.s_quantum > 0.0 ? p.s_quantum_error / p.s_quantum : 0.0) +
             2.0 * p.z_quantum.tail_ratio + kRounding;
  }

  const auto run = [&](VerificationReport& r, bool along_beta) {
    Trend overall;
    std::string where;
    const std::size_t outer = along_beta ? nh : nb;
    const std::size_t inner = along_beta ? nb : nh;
    for (std::size_t o = 0; o < outer; ++o) {
      std::vector<double> v(inner), e(inner);
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t k = along_beta ? i * nh + o : o * nh + i;
        v[i] = log_s[k];
        e[i] = err[k];
      }
      const Trend t = decreasing(v, e);
      overall.tolerance = std::max(overall.tolerance, t.tolerance);
      if (t.worst < overall.worst || std::isnan(t.worst)) {
        overall.worst = t.worst;
        where = along_beta ? "h=" + fmt(hs[o]) + ", beta=" + fmt(bs[t.worst_index])
                           : "beta=" + fmt(bs[o]) + ", h=" + fmt(hs[t.worst_index]);
      }
    }
    r.worst_margin = overall.worst;
    r.tolerance = overall.tolerance;
    r.status = std::isnan(overall.worst) ? Status::Inconclusive
                                         : classify(overall.worst, overall.tolerance);
    r.notes.push_back("margin is the drop in log S_q between neighbours; worst at " +
                      where);
    if (vacuous) {
      r.status = Status::Inconclusive;
      r.notes.push_back("S_q = 0 at some point (single level): monotonicity is vacuous");
    }
    note_failures(r, points);
  };
  run(out.beta, true);
  run(out.h, false);
  return out;
}

HomogeneousReports check_c41_and_props(ThermoModel& model, double beta,
                                       std::span<const double> hs_in) {
  const Potential& pot = model.potential();
  if (pot.kind() != PotentialKind::Homogeneous) {
    throw ArgumentError("check_c41_and_props: needs V = r^nu");
  }
  if (!(beta > 0.0)) throw ArgumentError("check_c41_and_props: beta must be positive");
  const auto hs = sorted(hs_in, false);
  const double bs[] = {beta};
  HomogeneousReports out{start(ClaimId::C4_1, model, bs, hs),
                         start(ClaimId::P4_1, model, bs, hs),
                         start(ClaimId::P4_3, model, bs, hs)};
  const int n = pot.dimension();
  const double a = scaling_exponents(pot.exponent()).energy;
  constexpr double delta = 1e-4;

  std::vector<double> all;
  for (double h : hs) {
    for (double f : {1.0 - 2 * delta, 1.0 - delta, 1.0, 1.0 + delta, 1.0 + 2 * delta}) {
      all.push_back(h * f);
    }
  }
  try {
    model.prepare(bs, all);
  } catch (const NumericalError& e) {
    return {prepare_failed(out.c41, e.what()), prepare_failed(out.p41, e.what()),
            prepare_failed(out.p43, e.what())};
  }

  struct Row {
    double log_g = 0.0;  // log(h^N Z_q)
    double g_err = 0.0;
    double residual = 0.0;
    double fd_err = 0.0;
    double sign_margin = 0.0;
    double sign_err = 0.0;
    std::string error;
  };
  std::vector<Row> rows(hs.size());
  parallel_for(hs.size(), [&](std::size_t i) {
    const double h = hs[i];
    Row& row = rows[i];
    try {
      const ThermoPoint p = model.point(beta, h);
      const auto log_g = [&](double hh) {
        return n * std::log(hh) + model.point(beta, hh).z_quantum.log_value;
      };
      row.log_g = n * std::log(h) + p.z_quantum.log_value;
      row.g_err = p.z_quantum.relative_error() + kRounding;
      const double g = std::exp(row.log_g);
      const auto central = [&](double d) {
        const double up = std::exp(log_g(h * (1 + d)) - row.log_g);
        const double down = std::exp(log_g(h * (1 - d)) - row.log_g);
        return g * (up - down) / (2 * d * h);
      };
      const double fd1 = central(delta);
      const double fd2 = central(2 * delta);
      const double rhs = std::exp((n - 1) * std::log(h) + p.z_quantum.log_value) *
                         (n - a * beta * p.e_quantum);
      row.residual = std::abs(fd1 - rhs) / std::abs(rhs);
      row.fd_err = std::abs(fd1 - fd2) / 3.0 / std::abs(rhs) + row.g_err;

      const double lhs_term = n - a * beta * p.e_quantum;
      const double gap = p.e_quantum - p.e_classical;
      const double size = std::min(std::abs(lhs_term) / n, std::abs(gap) / p.e_classical);
      const bool agree = (lhs_term > 0) == (gap < 0) && lhs_term != 0 && gap != 0;
      row.sign_margin = agree ? size : -size;
      row.sign_err = a * beta * p.e_quantum_error / n + p.e_quantum_error / p.e_classical +
                     kRounding;
    } catch (const NumericalError& e) {
      row.error = e.what();
    }
  });

  std::vector<Evaluated> failed_points;
  std::vector<double> log_g, g_err;
  double worst_residual = 0.0, residual_tol = 0.0;
  double worst_sign = kInf, sign_tol = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].error.empty()) {
      failed_points.push_back({beta, hs[i], std::nullopt, rows[i].error});
      continue;
    }
    log_g.push_back(rows[i].log_g);
    g_err.push_back(rows[i].g_err);
    worst_residual = std::max(worst_residual, rows[i].residual);
    residual_tol = std::max(residual_tol, rows[i].fd_err);
    worst_sign = std::min(worst_sign, rows[i].sign_margin);
    sign_tol = std::max(sign_tol, rows[i].sign_err);
  }
  const bool any = !log_g.empty();

  const Trend t = decreasing(log_g, g_err);
  out.c41.worst_margin = t.worst;
  out.c41.tolerance = t.tolerance;
  out.c41.status = any ? classify(t.worst, t.tolerance) : Status::Inconclusive;
  out.c41.notes.push_back("margin is the drop in log(h^N Z_q) between neighbouring h");

  out.p41.worst_margin = 1e-5 - worst_residual;
  out.p41.tolerance = residual_tol;
  out.p41.status = any ? classify(out.p41.worst_margin, residual_tol) : Status::Inconclusive;
  out.p41.notes.push_back("largest relative residual of the derivative identity: " +
                          fmt(worst_residual) + " (bound 1e-5)");

  out.p43.worst_margin = worst_sign;
  out.p43.tolerance = sign_tol;
  out.p43.status = any ? classify(worst_sign, sign_tol) : Status::Inconclusive;
  out.p43.notes.push_back(
      "margin is min(|N - a beta E_q| / N, |E_q - E_c| / E_c), negated where the signs "
      "disagree");

  for (auto* r : {&out.c41, &out.p41, &out.p43}) note_failures(*r, failed_points);
  return out;
}

VerificationReport check_wehrl(ThermoModel& model, double beta, std::span<const double> hs_in,
                               double threshold, std::vector<WehrlGaps>* gaps_out) {
  const auto hs = sorted(hs_in, true);
  const double bs[] = {beta};
  auto r = start(ClaimId::WEHRL_S, model, bs, hs);
  std::string why;
  const auto points = evaluate(model, bs, hs, &why);
  if (points.empty()) return prepare_failed(r, why);

  std::vector<double> ge, gz, gs;
  std::vector<WehrlGaps> gaps;
  double consistency = 0.0;
  double final_err = 0.0;
  for (const auto& p : points) {
    if (!p.point) continue;
    const ThermoPoint& t = *p.point;
    const double log_rz = t.log_zq_scaled() - std::log(t.z_classical.value);
    WehrlGaps g{p.h, std::abs(t.e_quantum / t.e_classical - 1.0), std::abs(std::expm1(log_rz)),
                std::abs(t.s_quantum - t.s_classical)};
    // The entropy gap from the energy and sum gaps alone.
    const double composed = beta * (t.e_quantum - t.e_classical) + log_rz;
    consistency = std::max(consistency, std::abs((t.s_quantum - t.s_classical) - composed));
    ge.push_back(g.energy);
    gz.push_back(g.sum);
    gs.push_back(g.entropy);
    gaps.push_back(g);
    final_err = std::max({sum_error(t), t.e_quantum_error / t.e_classical + kRounding,
                          t.s_quantum_error + kRounding});
  }
  if (gaps_out) *gaps_out = gaps;
  if (gaps.empty()) {
    r.status = Status::Inconclusive;
    note_failures(r, points);
    return r;
  }
  const double worst_final = std::max({ge.back(), gz.back(), gs.back()});
  r.worst_margin = threshold - worst_final;
  r.tolerance = final_err;
  const bool monotone =
      shrinking_tail(ge, 4) && shrinking_tail(gz, 4) && shrinking_tail(gs, 4);
  const bool consistent = consistency < 1e-10;
  r.status = (monotone && consistent && r.worst_margin > r.tolerance &&
              gaps.size() == points.size())
                 ? Status::Holds
                 : Status::Inconclusive;
  r.notes.push_back("final gaps at h=" + fmt(hs.back()) + ": energy " + fmt(ge.back()) +
                    ", sum " + fmt(gz.back()) + ", entropy " + fmt(gs.back()));
  r.notes.push_back(monotone ? "all three gaps shrink over the last four points"
                             : "some gap does not shrink over the last four points");
  r.notes.push_back("entropy gap recomputed from the energy and sum gaps differs by " +
                    fmt(consistency));
  note_failures(r, points);
  return r;
}

void write_reports_json(std::ostream& out, std::span<const VerificationReport> reports) {
  nlohmann::json array = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["claim_id"] = to_string(r.claim);
    j["model"] = r.model;
    j["grid"] = {{"beta", r.betas}, {"h", r.hs}};
    j["status"] = to_string(r.status);
    j["worst_margin"] = r.worst_margin;
    j["tolerance"] = r.tolerance;
    j["notes"] = r.notes;
    array.push_back(std::move(j));
  }
  out << array.dump(2) << "\n";
}

void write_reports_table(std::ostream& out, std::span<const VerificationReport> reports) {
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-13s %-14s %-12s %s\n", "claim", "status",
                "worst_margin", "tolerance", "model");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-10s %-13s %-14.6g %-12.3g %s\n",
                  to_string(r.claim).c_str(), to_string(r.status).c_str(), r.worst_margin,
                  r.tolerance, r.model.c_str());
    out << line;
    for (const auto& note : r.notes) out << "    " << note << "\n";
  }
}

}  // namespace qcstat
