#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gapbound/banding.hpp"
#include "gapbound/errors.hpp"

namespace gapbound::cli {

enum class Experiment { two_level, four_level, random_banded, pxp };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::two_level: return "two_level";
    case Experiment::four_level: return "four_level";
    case Experiment::random_banded: return "random_banded";
    case Experiment::pxp: return "pxp";
  }
  return "?";
}

inline Experiment experiment_from_string(const std::string& s) {
  if (s == "two_level") return Experiment::two_level;
  if (s == "four_level") return Experiment::four_level;
  if (s == "random_banded") return Experiment::random_banded;
  if (s == "pxp") return Experiment::pxp;
  fail(errc::config_error, "unknown experiment '" + s + "' (see list-experiments)");
}

struct GridConfig {
  double t_start = 0.0;
  double t_end = -1.0;   // required
  int n_points = -1;     // required
};

struct ExperimentConfig {
  Experiment experiment = Experiment::two_level;
  double delta0 = -1.0;
  double omega = -1.0;
  std::vector<double> delta0_log10;  // pxp sweep, log10 values
  std::uint64_t seed = 1;
  int length = -1;  // chain length for pxp
  int n_bands = 3;
  int levels_per_band = 4;
  double gap_ratio = 10.0;
  GridConfig grid;
  std::optional<banding::BandSelector> band;  // default: the model's natural band
  std::string output_dir = "out";
  std::string certificates = "auto";  // on | off | auto (off above dim 512)
  double slack_c = 4.0;               // remainder-bound slack constant
  double bound_slack = 8.0;           // linear-bound slack constant
  double horizon_factor = 0.1;        // fraction of d0/||V||^2 kept for bound checks
};

struct Diagnostic {
  bool fatal = false;
  std::string message;
};

/// ||V|| implied by the configured model parameters.
inline double configured_norm_v(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::two_level:
    case Experiment::four_level: return c.omega > 0 ? c.omega / 2.0 : -1.0;
    case Experiment::random_banded: return 1.0;
    case Experiment::pxp: return (c.omega > 0 && c.length > 0) ? c.length * c.omega / 2.0 : -1.0;
  }
  return -1.0;
}

inline std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  std::vector<Diagnostic> out;
  auto fatal = [&](const std::string& m) { out.push_back({true, m}); };
  auto warn = [&](const std::string& m) { out.push_back({false, m}); };

  const bool needs_delta0 = c.experiment == Experiment::two_level || c.experiment == Experiment::four_level;
  if (needs_delta0 && c.delta0 <= 0) fatal("missing or non-positive field: delta0");
  if ((c.experiment == Experiment::two_level || c.experiment == Experiment::four_level ||
       c.experiment == Experiment::pxp) &&
      c.omega <= 0)
    fatal("missing or non-positive field: omega");
  if (c.experiment == Experiment::random_banded) {
    if (c.n_bands < 2) fatal("n_bands must be >= 2");
    if (c.levels_per_band < 1) fatal("levels_per_band must be >= 1");
    if (c.gap_ratio <= 2.0) fatal("gap_ratio must exceed 2");
  }
  if (c.experiment == Experiment::pxp) {
    if (c.length <= 0) fatal("missing field: L");
    if (c.length > 14) fatal("L = " + std::to_string(c.length) + " exceeds the dense-diagonalization budget (14)");
    if (c.delta0_log10.empty() && c.delta0 <= 0) fatal("missing field: delta0 (or delta0_log10 sweep)");
  }
  if (c.grid.t_end <= c.grid.t_start) fatal("missing or invalid field: grid.t_end");
  if (c.grid.n_points < 2) fatal("missing or invalid field: grid.n_points (need >= 2)");
  if (c.certificates != "on" && c.certificates != "off" && c.certificates != "auto")
    fatal("certificates must be on, off or auto");

  const double norm_v = configured_norm_v(c);
  double min_delta0 = c.delta0;
  if (c.experiment == Experiment::random_banded) min_delta0 = c.gap_ratio;  // nominal gap in units of ||V||
  if (c.experiment == Experiment::pxp && !c.delta0_log10.empty()) {
    min_delta0 = std::pow(10.0, c.delta0_log10.front());
    for (double lg : c.delta0_log10) min_delta0 = std::min(min_delta0, std::pow(10.0, lg));
  }
  if (norm_v > 0 && min_delta0 > 0 && min_delta0 < 10.0 * norm_v)
    warn("delta0 < 10||V||: asymptotic bound checks disabled");
  return out;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      fail(errc::config_error, "cannot parse number '" + item + "'");
    }
  }
  return out;
}

}  // namespace detail

/// Flat key = value file with [grid] and [band] sections; returns dotted keys.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "band")
        fail(errc::config_error, path + ":" + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::config_error, path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) fail(errc::config_error, path + ":" + std::to_string(line_no) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = value;
  }
  return kv;
}

/// Applies dotted key/value pairs onto a config. Unknown keys are an error.
inline void apply_key_values(ExperimentConfig& c, const std::map<std::string, std::string>& kv) {
  auto to_double = [](const std::string& k, const std::string& v) {
    try {
      return std::stod(v);
    } catch (...) {
      fail(errc::config_error, "field " + k + ": cannot parse '" + v + "'");
    }
  };
  auto to_int = [](const std::string& k, const std::string& v) {
    try {
      return std::stoi(v);
    } catch (...) {
      fail(errc::config_error, "field " + k + ": cannot parse '" + v + "'");
    }
  };
  banding::BandSelector band;
  bool band_seen = false;
  for (const auto& [key, value] : kv) {
    if (key == "experiment") c.experiment = experiment_from_string(value);
    else if (key == "delta0") c.delta0 = to_double(key, value);
    else if (key == "omega") c.omega = to_double(key, value);
    else if (key == "delta0_log10") c.delta0_log10 = detail::parse_double_list(value);
    else if (key == "seed") {
      try {
        c.seed = static_cast<std::uint64_t>(std::stoull(value));
      } catch (...) {
        fail(errc::config_error, "field seed: cannot parse '" + value + "'");
      }
    }
    else if (key == "L") c.length = to_int(key, value);
    else if (key == "n_bands") c.n_bands = to_int(key, value);
    else if (key == "levels_per_band") c.levels_per_band = to_int(key, value);
    else if (key == "gap_ratio") c.gap_ratio = to_double(key, value);
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "certificates") c.certificates = value;
    else if (key == "slack_c") c.slack_c = to_double(key, value);
    else if (key == "bound_slack") c.bound_slack = to_double(key, value);
    else if (key == "horizon_factor") c.horizon_factor = to_double(key, value);
    else if (key == "grid.t_start") c.grid.t_start = to_double(key, value);
    else if (key == "grid.t_end") c.grid.t_end = to_double(key, value);
    else if (key == "grid.n_points") c.grid.n_points = to_int(key, value);
    else if (key == "band.kind") {
      band_seen = true;
      if (value == "index_range") band.kind = banding::BandKind::index_range;
      else if (value == "energy_window") band.kind = banding::BandKind::energy_window;
      else if (value == "zero_subspace") band.kind = banding::BandKind::zero_subspace;
      else fail(errc::config_error, "band.kind must be index_range, energy_window or zero_subspace");
    } else if (key == "band.lo") {
      band_seen = true;
      band.ilo = to_int(key, value);
      band.elo = to_double(key, value);
    } else if (key == "band.hi") {
      band_seen = true;
      band.ihi = to_int(key, value);
      band.ehi = to_double(key, value);
    } else {
      fail(errc::config_error, "unknown config key '" + key + "'");
    }
  }
  if (band_seen) c.band = band;
}

}  // namespace gapbound::cli
