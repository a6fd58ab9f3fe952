#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qcstat/ensemble.hpp"
#include "qcstat/error.hpp"
#include "qcstat/game.hpp"
#include "qcstat/numeric.hpp"
#include "qcstat/parallel.hpp"
#include "qcstat/verify.hpp"

namespace qcstat::cli {

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Run `write` against the configured output file, or `out` if there is none.
void emit(const RunConfig& config, std::ostream& out,
          const std::function<void(std::ostream&)>& write) {
  const std::string path = resolve_output(config);
  if (path.empty()) {
    write(out);
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream file(path);
  if (!file) throw ArgumentError("cannot write output file '" + path + "'");
  write(file);
}

std::vector<double> or_default(const std::vector<double>& given, std::vector<double> fallback) {
  return given.empty() ? fallback : given;
}

std::vector<double> read_levels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open levels file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find("n,E") != std::string::npos) {
    std::istringstream s(text);
    const Spectrum spectrum = read_spectrum_csv(s);
    return {spectrum.levels().begin(), spectrum.levels().end()};
  }
  std::vector<double> levels;
  std::istringstream s(text);
  std::string token;
  while (s >> token) {
    if (token.front() == '#') {
      std::getline(s, token);
      continue;
    }
    try {
      levels.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw ParseError("levels file: '" + token + "' is not a number");
    }
  }
  return levels;
}

// Uniform double in [0, 1) from the top 53 bits; unlike the standard
// distributions this is the same on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Potential potential = make_potential(config);
    const double h = config.hs.empty() ? 1.0 : config.hs.front();
    if (config.hs.size() > 1) err << "spectrum: using the first h only\n";
    const Spectrum spectrum = solve(potential, h, config.count, make_solve_options(config));
    emit(config, out, [&](std::ostream& o) { write_spectrum_csv(o, spectrum); });
    return kExitOk;
  } catch (const Error& e) {
    // Solver failures are reported as usage errors: the request (model,
    // count, cap) has to change for the solve to succeed.
    err << "spectrum: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_table(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Potential potential = make_potential(config);
  const Grid defaults = default_grid();
  const auto betas = or_default(config.betas, defaults.betas);
  const auto hs = or_default(config.hs, defaults.hs);
  ThermoModel model(potential, make_solve_options(config));

  std::vector<TableRow> rows(betas.size() * hs.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    for (std::size_t j = 0; j < hs.size(); ++j) {
      rows[i * hs.size() + j].beta = betas[i];
      rows[i * hs.size() + j].h = hs[j];
    }
  }
  std::string prepare_error;
  try {
    model.prepare(betas, hs);
  } catch (const NumericalError& e) {
    prepare_error = e.what();
  }
  const double n = potential.dimension();
  parallel_for(rows.size(), [&](std::size_t k) {
    TableRow& row = rows[k];
    if (!prepare_error.empty()) {
      row.status = "failed: " + prepare_error;
      return;
    }
    try {
      ThermoPoint p = model.point(row.beta, row.h);
      const double log_2pih = n * std::log(2.0 * M_PI * row.h);
      const double sq = row.beta * p.e_quantum + p.log_zq_scaled() - log_2pih;
      const double sc = row.beta * p.e_classical + std::log(p.z_classical.value) - log_2pih;
      if (std::abs(sq - p.s_quantum) > 1e-10 || std::abs(sc - p.s_classical) > 1e-10) {
        row.status = "failed: entropy identity off by " +
                     number(std::max(std::abs(sq - p.s_quantum), std::abs(sc - p.s_classical)));
        return;
      }
      row.point = std::move(p);
    } catch (const NumericalError& e) {
      row.status = std::string("failed: ") + e.what();
    }
  });

  std::size_t failed = 0;
  for (const auto& row : rows) {
    if (row.point) continue;
    if (failed++ == 0) err << "table: beta=" << row.beta << " h=" << row.h << " " << row.status << "\n";
  }
  for (auto& row : rows) {
    // Commas would break the CSV column.
    std::replace(row.status.begin(), row.status.end(), ',', ';');
  }
  emit(config, out, [&](std::ostream& o) {
    if (config.format == "json") {
      write_table_json(o, rows);
    } else {
      write_table_csv(o, rows);
    }
  });
  if (failed > 0) {
    err << "table: " << failed << " of " << rows.size() << " rows failed\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::string> claims = config.claims;
  if (claims.empty()) claims = {"c11", "c12", "c13", "t31", "t41", "c41", "wehrl"};
  const Potential potential = make_potential(config);
  ThermoModel model(potential, make_solve_options(config));

  Grid grid = default_grid();
  if (!config.betas.empty()) grid.betas = config.betas;
  if (!config.hs.empty()) grid.hs = config.hs;
  const double h = config.hs.empty() ? 1.0 : config.hs.front();
  const double beta = config.betas.empty() ? 1.0 : config.betas.front();

  std::vector<VerificationReport> reports;
  for (const auto& claim : claims) {
    if (claim == "c11") {
      reports.push_back(check_c11(model, grid));
    } else if (claim == "c12") {
      reports.push_back(check_c12(model, grid));
    } else if (claim == "c13") {
      const auto betas = or_default(config.betas, geometric_sequence(1.0, 0.5, 9));
      auto r = check_c13(model, h, betas);
      reports.push_back(std::move(r.z));
      reports.push_back(std::move(r.e));
    } else if (claim == "t31") {
      const double top = config.betas.empty()
                             ? 1.0
                             : *std::max_element(config.betas.begin(), config.betas.end());
      reports.push_back(check_t31(model, h, top, config.tau));
    } else if (claim == "t41") {
      auto r = check_t41(model, grid);
      reports.push_back(std::move(r.beta));
      reports.push_back(std::move(r.h));
    } else if (claim == "c41") {
      const auto hs = or_default(config.hs, log_grid(0.5, 4.0, 9));
      auto r = check_c41_and_props(model, beta, hs);
      reports.push_back(std::move(r.c41));
      reports.push_back(std::move(r.p41));
      reports.push_back(std::move(r.p43));
    } else if (claim == "wehrl") {
      const auto hs = or_default(config.hs, geometric_sequence(1.0, 0.5, 7));
      reports.push_back(check_wehrl(model, beta, hs));
    } else {
      throw ArgumentError("unknown claim '" + claim + "'");
    }
  }

  const std::string path = resolve_output(config);
  if (config.format == "json" && path.empty()) {
    write_reports_json(out, reports);
  } else {
    write_reports_table(out, reports);
    if (!path.empty()) emit(config, out, [&](std::ostream& o) { write_reports_json(o, reports); });
  }

  bool violated = false;
  for (const auto& r : reports) {
    if (theorem_class(r.claim) && r.status == Status::Violated) {
      err << "verify: theorem-class claim " << to_string(r.claim) << " violated\n";
      violated = true;
    }
  }
  return violated ? kExitViolation : kExitOk;
}

int cmd_game(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<double> levels = config.levels;
  if (levels.empty() && !config.potential_file.empty()) {
    levels = read_levels_file(config.potential_file);
  }
  if (levels.empty()) throw ArgumentError("game: --levels (or a levels file) is required");
  const double lambda = config.lambda;

  const auto p = stationary_point(levels, lambda);
  const GameState state(levels, lambda, p);
  const Compromise c = compromise(state);
  std::vector<double> exponents(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) exponents[i] = lambda * levels[i];

  std::ostringstream summary;
  summary << "# K = " << levels.size() << ", lambda = " << number(lambda) << "\n";
  summary << "# P =";
  for (double x : state.probabilities()) summary << ' ' << number(x);
  summary << "\n# F = " << number(c.f) << "\n";
  summary << "# E = " << number(c.energy) << ", S = " << number(c.entropy) << "\n";
  summary << "# log sum exp(lambda E) = " << number(log_sum_exp(exponents)) << "\n";
  if (config.minors > 0) {
    const MinorReport m = principal_minor_signs(levels, lambda, config.minors);
    summary << "# minor signs = ";
    for (std::size_t k = 0; k < m.signs.size(); ++k) {
      if (k) summary << ',';
      summary << (m.signs[k] > 0 ? '+' : (m.signs[k] < 0 ? '-' : '0'));
    }
    summary << "\n# minors (closed form) =";
    for (double v : m.closed_form) summary << ' ' << number(v);
    summary << "\n# minors (determinant) =";
    for (double v : m.direct) summary << ' ' << number(v);
    summary << "\n";
  }
  out << summary.str();

  if (config.ascend) {
    std::mt19937_64 rng(config.seed);
    std::vector<double> start(levels.size());
    for (auto& w : start) w = std::exp(4.0 * unit(rng) - 2.0);
    const AscentResult result = ascend(levels, lambda, start);
    const auto final_p = GameState(levels, lambda, result.weights).probabilities();
    out << "# ascent: " << result.iterations << " iterations, TV to Gibbs = "
        << number(total_variation(final_p, state.probabilities())) << "\n";
    emit(config, out, [&](std::ostream& o) { write_trace_csv(o, result.trace); });
  }
  (void)err;
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qcstat: quantum and classical statistical sums, side by side"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
  };
  const Command commands[] = {
      {"spectrum", "Write the lowest levels as n,E CSV", cmd_spectrum},
      {"table", "Tabulate Z, E and S over a (beta, h) grid", cmd_table},
      {"verify", "Check the inequalities and limits on grids", cmd_verify},
      {"game", "Gibbs point, Hessian minors and ascent for a level set", cmd_game},
  };
  // key -> raw text, filled by whichever subcommand runs
  std::map<std::string, std::string> given;
  std::string config_path;
  std::string threads;
  bool ascend_flag = false;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  std::map<std::string, CLI::Option*> options;
  for (const auto& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    // --h is Planck's constant here, so help is long-form only.
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--config", config_path, "key = value config file (flags override it)");
    sub->add_option("--threads", threads, "worker threads (default: QCSTAT_THREADS or all cores)");
    for (const auto& key : config_keys()) {
      if (key == "ascend") continue;
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      auto* opt = sub->add_option("--" + flag, given[key], key)->allow_extra_args(false);
      options[std::string(command.name) + "/" + key] = opt;
    }
    sub->add_flag("--ascend", ascend_flag, "run the ascent and write its trace");
    subs.emplace_back(sub, &command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // help() already descends into the parsed subcommand.
      const bool all = dynamic_cast<const CLI::CallForAllHelp*>(&e) != nullptr;
      out << app.help("", all ? CLI::AppFormatMode::All : CLI::AppFormatMode::Normal);
      return kExitOk;
    }
    err << "qcstat: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    for (const auto& [sub, command] : subs) {
      if (!sub->parsed()) continue;
      if (!threads.empty()) {
        const long n = std::strtol(threads.c_str(), nullptr, 10);
        if (n < 1) throw ArgumentError("--threads must be a positive integer");
        setenv("QCSTAT_THREADS", threads.c_str(), 1);
      }
      RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
      for (const auto& key : config_keys()) {
        if (key == "ascend") continue;
        if (options.at(std::string(command->name) + "/" + key)->count() > 0) {
          set_key(config, key, given[key]);
        }
      }
      if (ascend_flag) config.ascend = true;
      return command->fn(config, out, err);
    }
  } catch (const ValidationError& e) {
    err << "qcstat: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "qcstat: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "qcstat: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qcstat::cli
