#pragma once

#include <stdexcept>
#include <string>

namespace gapbound {

enum class errc {
  invalid_argument,
  non_finite,
  dimension_mismatch,
  non_convergence,
  not_hermitian,
  not_anti_hermitian,
  empty_band,
  not_isolated,
  band_overlap,
  not_block_diagonal,
  zero_gap,
  regime_violation,
  dimension_budget_exceeded,
  grid_too_coarse,
  no_jump,
  window_too_narrow,
  grid_mismatch,
  no_transition,
  identity_violation,
  config_error,
  io_error,
};

inline const char* to_string(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::non_finite: return "non_finite";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::non_convergence: return "non_convergence";
    case errc::not_hermitian: return "not_hermitian";
    case errc::not_anti_hermitian: return "not_anti_hermitian";
    case errc::empty_band: return "empty_band";
    case errc::not_isolated: return "not_isolated";
    case errc::band_overlap: return "band_overlap";
    case errc::not_block_diagonal: return "not_block_diagonal";
    case errc::zero_gap: return "zero_gap";
    case errc::regime_violation: return "regime_violation";
    case errc::dimension_budget_exceeded: return "dimension_budget_exceeded";
    case errc::grid_too_coarse: return "grid_too_coarse";
    case errc::no_jump: return "no_jump";
    case errc::window_too_narrow: return "window_too_narrow";
    case errc::grid_mismatch: return "grid_mismatch";
    case errc::no_transition: return "no_transition";
    case errc::identity_violation: return "identity_violation";
    case errc::config_error: return "config_error";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

/// Library-wide exception type carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace gapbound
