#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace qcstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitViolation = 4;

// Each command writes its primary output to `out` (or the configured output
// file) and diagnostics to `err`, and returns the process exit code.
int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_table(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_game(const RunConfig& config, std::ostream& out, std::ostream& err);

// The whole command line: `qcstat <spectrum|table|verify|game> [--config file]
// [--key value ...]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcstat::cli
