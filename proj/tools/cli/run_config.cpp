#include "run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcstat/error.hpp"
#include "qcstat/numeric.hpp"

namespace qcstat::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || errno == ERANGE) {
    throw ParseError(std::string(key) + ": '" + text + "' is not a number");
  }
  return v;
}

long long to_integer(std::string_view key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (text.empty() || end != begin + text.size() || errno == ERANGE) {
    throw ParseError(std::string(key) + ": '" + text + "' is not an integer");
  }
  return v;
}

std::size_t to_count(std::string_view key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < 0) throw ArgumentError(std::string(key) + " must not be negative");
  return static_cast<std::size_t>(v);
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
  return out;
}

bool to_bool(std::string_view key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParseError(std::string(key) + ": '" + text + "' is not a boolean");
}

void require_positive(std::string_view key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(key) + " must be positive (got " + std::to_string(v) + ")");
  }
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += number(xs[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += xs[i];
  }
  return out;
}

const std::vector<std::string> kClaims = {"c11", "c12", "c13", "t31", "t41", "c41", "wehrl"};

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "model",  "N",         "nu",       "L",      "m",      "potential_file",
      "h",      "beta",      "count",    "level_cap", "tail_tol", "fd_resolution",
      "tau",    "claims",    "levels",   "lambda", "minors", "ascend",
      "format", "output",    "seed"};
  return keys;
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string t = trim(text);
  if (t.rfind("log:", 0) == 0) {
    const auto parts = split(std::string_view(t).substr(4), ':');
    if (parts.size() != 3) {
      throw ParseError("grid '" + t + "': expected log:lo:hi:per_decade");
    }
    const double lo = to_double("grid", parts[0]);
    const double hi = to_double("grid", parts[1]);
    const long long per = to_integer("grid", parts[2]);
    return log_grid(lo, hi, static_cast<int>(per));
  }
  auto values = to_list("grid", t);
  if (values.empty()) throw ArgumentError("grid must not be empty");
  for (double v : values) require_positive("grid value", v);
  return values;
}

void set_key(RunConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key(key_in);
  const std::string value = trim(value_in);
  if (key == "model") {
    if (value != "box" && value != "homogeneous" && value != "tabulated") {
      throw ArgumentError("model must be box, homogeneous or tabulated (got '" + value + "')");
    }
    c.model = value;
  } else if (key == "N") {
    const long long n = to_integer(key, value);
    if (n < 1 || n > 16) throw ArgumentError("N must be between 1 and 16");
    c.dimension = static_cast<int>(n);
  } else if (key == "nu") {
    const double nu = to_double(key, value);
    if (!(nu > 0.0)) throw ArgumentError("nu must be positive (got " + value + ")");
    c.nu = nu;
  } else if (key == "L") {
    auto l = to_list(key, value);
    if (l.empty()) throw ArgumentError("L must list at least one length");
    for (double x : l) require_positive("L", x);
    c.lengths = std::move(l);
  } else if (key == "m") {
    const double m = to_double(key, value);
    require_positive("m", m);
    c.mass = m;
  } else if (key == "potential_file") {
    c.potential_file = value;
  } else if (key == "h") {
    c.hs = value.empty() ? std::vector<double>{} : parse_grid(value);
  } else if (key == "beta") {
    c.betas = value.empty() ? std::vector<double>{} : parse_grid(value);
  } else if (key == "count") {
    c.count = to_count(key, value);
    if (c.count == 0) throw ArgumentError("count must be at least 1");
  } else if (key == "level_cap") {
    c.level_cap = to_count(key, value);
    if (c.level_cap == 0) throw ArgumentError("level_cap must be at least 1");
  } else if (key == "tail_tol") {
    c.tail_tolerance = to_double(key, value);
    require_positive("tail_tol", c.tail_tolerance);
  } else if (key == "fd_resolution") {
    c.fd_resolution = to_double(key, value);
    require_positive("fd_resolution", c.fd_resolution);
  } else if (key == "tau") {
    c.tau = to_double(key, value);
    if (c.tau < 0.0) throw ArgumentError("tau must not be negative");
  } else if (key == "claims") {
    std::vector<std::string> claims;
    for (const auto& item : split(value, ',')) {
      if (item.empty()) continue;
      if (item == "all") {
        claims.insert(claims.end(), kClaims.begin(), kClaims.end());
        continue;
      }
      if (std::find(kClaims.begin(), kClaims.end(), item) == kClaims.end()) {
        throw ArgumentError("unknown claim '" + item +
                            "' (expected c11, c12, c13, t31, t41, c41, wehrl or all)");
      }
      claims.push_back(item);
    }
    c.claims = std::move(claims);
  } else if (key == "levels") {
    c.levels = to_list(key, value);
  } else if (key == "lambda") {
    c.lambda = to_double(key, value);
  } else if (key == "minors") {
    c.minors = to_count(key, value);
  } else if (key == "ascend") {
    c.ascend = to_bool(key, value);
  } else if (key == "format") {
    if (value != "csv" && value != "json") {
      throw ArgumentError("format must be csv or json (got '" + value + "')");
    }
    c.format = value;
  } else if (key == "output") {
    c.output = value;
  } else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ArgumentError("seed must not be negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    try {
      set_key(c, key, std::string_view(t).substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "model = " << c.model << "\n";
  out << "N = " << c.dimension << "\n";
  out << "nu = " << number(c.nu) << "\n";
  out << "L = " << join(c.lengths) << "\n";
  out << "m = " << number(c.mass) << "\n";
  out << "potential_file = " << c.potential_file << "\n";
  out << "h = " << join(c.hs) << "\n";
  out << "beta = " << join(c.betas) << "\n";
  out << "count = " << c.count << "\n";
  out << "level_cap = " << c.level_cap << "\n";
  out << "tail_tol = " << number(c.tail_tolerance) << "\n";
  out << "fd_resolution = " << number(c.fd_resolution) << "\n";
  out << "tau = " << number(c.tau) << "\n";
  out << "claims = " << join(c.claims) << "\n";
  out << "levels = " << join(c.levels) << "\n";
  out << "lambda = " << number(c.lambda) << "\n";
  out << "minors = " << c.minors << "\n";
  out << "ascend = " << (c.ascend ? "true" : "false") << "\n";
  out << "format = " << c.format << "\n";
  out << "output = " << c.output << "\n";
  out << "seed = " << c.seed << "\n";
  return out.str();
}

Potential make_potential(const RunConfig& c) {
  if (c.model == "box") {
    std::vector<double> lengths = c.lengths;
    if (lengths.size() == 1 && c.dimension > 1) {
      lengths.assign(static_cast<std::size_t>(c.dimension), lengths.front());
    }
    if (static_cast<int>(lengths.size()) != c.dimension) {
      throw ArgumentError("L lists " + std::to_string(lengths.size()) +
                          " lengths for N = " + std::to_string(c.dimension));
    }
    return Potential::box(std::move(lengths), c.mass);
  }
  if (c.model == "homogeneous") return Potential::homogeneous(c.dimension, c.nu, c.mass);
  if (c.potential_file.empty()) {
    throw ArgumentError("tabulated model needs potential_file");
  }
  if (c.dimension != 1) throw ArgumentError("tabulated potentials are one-dimensional");
  return load_tabulated_csv(c.potential_file, c.mass);
}

SolveOptions make_solve_options(const RunConfig& c) {
  SolveOptions o;
  o.level_cap = c.level_cap;
  o.tail_tolerance = c.tail_tolerance;
  o.fd_resolution = c.fd_resolution;
  return o;
}

std::string resolve_output(const RunConfig& c) {
  if (c.output.empty() || c.output == "-") return {};
  std::filesystem::path p(c.output);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("QCSTAT_OUTPUT_DIR"); dir && *dir) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p.string();
}

}  // namespace qcstat::cli
