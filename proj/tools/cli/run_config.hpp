#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcstat/potential.hpp"
#include "qcstat/spectrum.hpp"

namespace qcstat::cli {

// Everything a run needs. The same keys appear in config files
// (`key = value`, one per line, `#` comments) and as `--key value` flags;
// flags win.
//
//   model            box | homogeneous | tabulated
//   N                dimension
//   nu               exponent of V = r^nu
//   L                box side lengths, comma separated (one per dimension,
//                    or a single value used for every axis)
//   m                mass
//   potential_file   CSV with header x,V for tabulated models
//   h, beta          grids: comma lists or log:lo:hi:per_decade
//   count            number of levels for `spectrum`
//   level_cap        largest spectrum any solve may produce
//   tail_tol         tail / partial-sum target when sizing spectra
//   fd_resolution    k * dx at the top level for finite differences
//   tau              lower limit of the energy-gap integral (claim t31)
//   claims           verify selection: c11,c12,c13,t31,t41,c41,wehrl or all
//   levels, lambda,
//   minors, ascend   game inputs
//   format           csv | json (verify also prints its table)
//   output           output file; relative paths go under QCSTAT_OUTPUT_DIR
//   seed             random seed for game starts
struct RunConfig {
  std::string model = "box";
  int dimension = 1;
  double nu = 2.0;
  std::vector<double> lengths{1.0};
  double mass = 1.0;
  std::string potential_file;
  std::vector<double> hs;
  std::vector<double> betas;
  std::size_t count = 10;
  std::size_t level_cap = 2'000'000;
  double tail_tolerance = 1e-10;
  double fd_resolution = 0.08;
  double tau = 0.0;
  std::vector<std::string> claims;
  std::vector<double> levels;
  double lambda = -1.0;
  std::size_t minors = 0;
  bool ascend = false;
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

// Sets one key from its text form; throws ParseError for unknown keys or
// malformed values and ArgumentError for out-of-range ones.
void set_key(RunConfig& config, std::string_view key, std::string_view value);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Config-file text with every key; grids are written out as explicit lists
// with 17 significant digits, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Keys accepted by set_key, in serialisation order.
const std::vector<std::string>& config_keys();

// "0.1,1,10" or "log:0.01:10:9".
std::vector<double> parse_grid(std::string_view text);

Potential make_potential(const RunConfig& config);
SolveOptions make_solve_options(const RunConfig& config);

// `output` resolved against QCSTAT_OUTPUT_DIR; empty means stdout.
std::string resolve_output(const RunConfig& config);

}  // namespace qcstat::cli
