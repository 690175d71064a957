#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gapbound/dynamics.hpp"
#include "gapbound/errors.hpp"

namespace gapbound::cli {

/// 17 significant decimal digits: enough to round-trip any double exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes a trace as `t,epsilon,bound,term_S,term_L,term_SH1`. Columns not
/// carried by the trace are written as empty fields.
inline void write_trace_csv(const dynamics::ErrorTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical output on every platform
  if (!out) fail(errc::io_error, "cannot open " + path.string() + " for writing");
  out << "t,epsilon,bound,term_S,term_L,term_SH1\n";
  const std::size_t n = trace.times.size();
  const bool has_bound = trace.bound.size() == n;
  const bool has_terms = trace.term_s.size() == n;
  for (std::size_t i = 0; i < n; ++i) {
    out << format_double(trace.times[i]) << ',' << format_double(trace.epsilon[i]) << ',';
    if (has_bound) out << format_double(trace.bound[i]);
    out << ',';
    if (has_terms) out << format_double(trace.term_s[i]);
    out << ',';
    if (has_terms) out << format_double(trace.term_l[i]);
    out << ',';
    if (has_terms) out << format_double(trace.term_sh1[i]);
    out << '\n';
  }
  if (!out) fail(errc::io_error, "write failed for " + path.string());
}

/// Columns t plus one rescaled trace per gap value.
inline void write_rescaled_csv(const std::vector<double>& times, const std::vector<double>& delta0_values,
                               const std::vector<std::vector<double>>& rescaled,
                               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open " + path.string() + " for writing");
  out << "t";
  for (double d : delta0_values) out << ",rescaled_d0_" << format_double(d);
  out << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << format_double(times[i]);
    for (const auto& r : rescaled) out << ',' << format_double(r[i]);
    out << '\n';
  }
  if (!out) fail(errc::io_error, "write failed for " + path.string());
}

}  // namespace gapbound::cli
