#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gapbound/banding.hpp"
#include "gapbound/linalg.hpp"
#include "gapbound/models.hpp"
#include "gapbound/swt.hpp"

namespace gapbound::dynamics {

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  int n_points = 0;
  std::vector<double> times;

  static TimeGrid uniform(double t_start, double t_end, int n_points) {
    if (n_points < 2) fail(errc::invalid_argument, "TimeGrid: need at least 2 points");
    if (!(t_end > t_start)) fail(errc::invalid_argument, "TimeGrid: t_end must exceed t_start");
    TimeGrid g;
    g.t_start = t_start;
    g.t_end = t_end;
    g.n_points = n_points;
    g.times.resize(n_points);
    const double dt = (t_end - t_start) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) g.times[i] = t_start + i * dt;
    g.times.back() = t_end;
    return g;
  }

  double dt() const { return (t_end - t_start) / (n_points - 1); }
};

struct TraceMeta {
  std::string model;
  double delta0 = 0.0;
  double omega = 0.0;
  double norm_v = 0.0;
  double norm_v_star = -1.0;
  std::uint64_t seed = 0;
  int length = 0;
  int band_dim = 0;
  double delta = 0.0;  // block spectral gap when known
};

/// Sampled error dynamics; `bound` and the decomposition terms are filled by
/// the operations that compute them and stay empty otherwise.
struct ErrorTrace {
  std::vector<double> times;
  std::vector<double> epsilon;
  std::vector<double> bound;
  std::vector<double> term_s, term_l, term_sh1;
  double identity_defect = 0.0;  // max |eps_direct - eps_rewritten| when decomposed
  TraceMeta meta;
};

namespace detail {

inline TraceMeta make_meta(const models::ModelInstance& model, const banding::BandPartition& part) {
  TraceMeta meta;
  meta.model = model.meta.name;
  meta.delta0 = model.meta.measured_gap > 0 ? model.meta.measured_gap : model.meta.delta0;
  meta.omega = model.meta.omega;
  meta.norm_v = model.meta.norm_v;
  meta.norm_v_star = model.meta.norm_v_star;
  meta.seed = model.meta.seed;
  meta.length = model.meta.length;
  meta.band_dim = static_cast<int>(part.band_dim());
  return meta;
}

/// Columns of `m` scaled by e^{+i w_j t}.
inline ComplexMatrix scale_cols_phase(const ComplexMatrix& m, const RealVector& w, double t) {
  ComplexMatrix out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double phi = w(j) * t;
    out.col(j) *= Complex(std::cos(phi), std::sin(phi));
  }
  return out;
}

}  // namespace detail

/// Exact error trace eps(t) = ||P(e^{iHt} O e^{-iHt} - e^{iH_P t} O e^{-iH_P t})P||.
///
/// Both conjugations are evaluated in their band compression: the full-space
/// sandwich P M P and its band block B^dag M B share every nonzero singular
/// value, and e^{iH_P t} acts as the identity on the complement, so the H_P
/// term reduces to the band-restricted evolution. One spectral decomposition
/// of H and one of the band block serve the whole grid.
inline ErrorTrace error_trace(const models::ModelInstance& model, const banding::BandPartition& part,
                              const TimeGrid& grid) {
  const Eigen::Index n = model.h0.dim();
  if (part.dim() != n || model.observable.rows() != n)
    fail(errc::dimension_mismatch, "error_trace: model and partition dimensions disagree");

  const HermitianOperator h(ComplexMatrix(model.h0.matrix + model.v.matrix));
  const SpectralDecomposition spec_h = eig_hermitian(h);
  const ComplexMatrix& b = part.isometry_p;
  const ComplexMatrix k_band = b.adjoint() * spec_h.eigenvectors;  // B^dag W

  const HermitianOperator hp_band(ComplexMatrix(b.adjoint() * h.matrix * b));
  const SpectralDecomposition spec_p = eig_hermitian(hp_band);
  const ComplexMatrix ob = b.adjoint() * model.observable * b;
  const ComplexMatrix ob_p = spec_p.eigenvectors.adjoint() * ob * spec_p.eigenvectors;

  const bool reduced = model.obs_minus_isometry.size() != 0;
  ComplexMatrix o_tilde;   // W^dag O W (generic route)
  ComplexMatrix y_tilde;   // W^dag Y  (reflection route, O = 1 - 2 Y Y^dag)
  ComplexMatrix k_gram;    // K K^dag, time independent
  if (reduced) {
    y_tilde = spec_h.eigenvectors.adjoint() * model.obs_minus_isometry;
    k_gram = k_band * k_band.adjoint();
  } else {
    o_tilde = spec_h.eigenvectors.adjoint() * model.observable * spec_h.eigenvectors;
  }

  ErrorTrace trace;
  trace.times = grid.times;
  trace.epsilon.resize(grid.times.size());
  trace.meta = detail::make_meta(model, part);

  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    const double t = grid.times[i];
    const ComplexMatrix kt = detail::scale_cols_phase(k_band, spec_h.eigenvalues, t);
    ComplexMatrix x;
    if (reduced) {
      const ComplexMatrix z = kt * y_tilde;
      x = k_gram - 2.0 * (z * z.adjoint());
    } else {
      x = kt * o_tilde * kt.adjoint();
    }
    const ComplexMatrix up_t = detail::scale_cols_phase(spec_p.eigenvectors, spec_p.eigenvalues, t);
    const ComplexMatrix y = up_t * ob_p * up_t.adjoint();
    trace.epsilon[i] = operator_norm(ComplexMatrix(x - y));
  }
  return trace;
}

/// The linear-in-t asymptotic bound 4||V||/d0 + 2||V||^2 t / d0 with its
/// validity horizon t_max = d0/||V||^2 and the large-gap regime flag.
struct BoundSeries {
  std::vector<double> values;
  double intercept = 0.0;
  double slope = 0.0;
  double t_max = 0.0;
  bool in_regime = false;
};

inline BoundSeries asymptotic_bound(double norm_v, double delta0, const TimeGrid& grid) {
  if (delta0 <= 0) fail(errc::invalid_argument, "asymptotic_bound: delta0 must be positive");
  BoundSeries out;
  out.intercept = 4.0 * norm_v / delta0;
  out.slope = 2.0 * norm_v * norm_v / delta0;
  out.t_max = norm_v > 0 ? delta0 / (norm_v * norm_v) : std::numeric_limits<double>::infinity();
  out.in_regime = delta0 >= 10.0 * norm_v;
  out.values.reserve(grid.times.size());
  for (double t : grid.times) out.values.push_back(out.intercept + out.slope * t);
  return out;
}

/// Closed-form error of the driven two-level atom,
/// eps(t) = (d0 w / D^2) |1 - cos(D t)| with D = sqrt(d0^2 + w^2).
inline double analytic_two_level(double delta0, double omega, double t) {
  const double d = std::hypot(delta0, omega);
  return delta0 * omega / (d * d) * std::abs(1.0 - std::cos(d * t));
}

/// Closed-form error of the half-driven pair,
/// eps(t) = |[cos(D t/2) + i (d0/D) sin(D t/2)]^2 - e^{i d0 t}|.
inline double analytic_four_level(double delta0, double omega, double t) {
  const double d = std::hypot(delta0, omega);
  const Complex amp(std::cos(d * t / 2.0), delta0 / d * std::sin(d * t / 2.0));
  const Complex phase(std::cos(delta0 * t), std::sin(delta0 * t));
  return std::abs(amp * amp - phase);
}

/// Rewritten error and its triangle decomposition. For every grid point the
/// rewritten value
///   eps(t) = ||P [S_H1(t)^dag L(t) S O S^dag L(t)^dag S_H1(t) - O] P||,
/// with L(t) = e^{-i H1 t} e^{i (H1 + V') t} and
/// S_H1(t) = e^{-i H1 t} S e^{i H1 t}, is checked against the direct
/// evaluation (exact identity); the three conjugation distances are recorded.
inline ErrorTrace error_decomposition(const models::ModelInstance& model, const banding::BandPartition& part,
                                      const swt::SwtResult& swt_result, const TimeGrid& grid) {
  if (!part.blocks) fail(errc::invalid_argument, "error_decomposition: partition carries no V blocks");
  const Eigen::Index n = model.h0.dim();
  const ComplexMatrix& o = model.observable;
  const ComplexMatrix& s = swt_result.rotation;
  const ComplexMatrix& b = part.isometry_p;

  const HermitianOperator h(ComplexMatrix(model.h0.matrix + model.v.matrix));
  const HermitianOperator h1(ComplexMatrix(model.h0.matrix + part.blocks->v_diag));
  const HermitianOperator hp = banding::projected_hamiltonian(h, part.projector_p());
  const SpectralDecomposition spec_h = eig_hermitian(h);
  const SpectralDecomposition spec_h1 = eig_hermitian(h1);
  const SpectralDecomposition spec_hp = eig_hermitian(hp);

  ErrorTrace trace;
  trace.times = grid.times;
  trace.meta = detail::make_meta(model, part);
  const std::size_t m = grid.times.size();
  trace.epsilon.resize(m);
  trace.term_s.resize(m);
  trace.term_l.resize(m);
  trace.term_sh1.resize(m);

  const double term_s_value = operator_norm(ComplexMatrix(s * o * s.adjoint() - o));

  for (std::size_t i = 0; i < m; ++i) {
    const double t = grid.times[i];
    const ComplexMatrix u_back = propagator(spec_h, -t);    // e^{+iHt}
    const ComplexMatrix up_back = propagator(spec_hp, -t);  // e^{+iH_P t}
    const double eps_direct =
        operator_norm(ComplexMatrix(b.adjoint() * (conjugate(u_back, o) - conjugate(up_back, o)) * b));

    const ComplexMatrix e_minus_h1 = propagator(spec_h1, t);  // e^{-i H1 t}
    const ComplexMatrix e_plus_h1 = propagator(spec_h1, -t);
    // e^{i (H1 + V') t} = S e^{iHt} S^dag exactly, by the defining identity
    const ComplexMatrix loschmidt = e_minus_h1 * s * u_back * s.adjoint();
    const ComplexMatrix s_h1 = e_minus_h1 * s * e_plus_h1;

    const ComplexMatrix inner =
        s_h1.adjoint() * loschmidt * s * o * s.adjoint() * loschmidt.adjoint() * s_h1 - o;
    const double eps_rewritten = operator_norm(ComplexMatrix(b.adjoint() * inner * b));

    const double defect = std::abs(eps_direct - eps_rewritten);
    if (defect > 1e-8)
      fail(errc::identity_violation, "error_decomposition: direct and rewritten errors disagree by " +
                                         std::to_string(defect) + " at t = " + std::to_string(t));
    trace.identity_defect = std::max(trace.identity_defect, defect);

    trace.epsilon[i] = eps_direct;
    trace.term_s[i] = term_s_value;
    trace.term_l[i] = operator_norm(ComplexMatrix(loschmidt * o * loschmidt.adjoint() - o));
    trace.term_sh1[i] = operator_norm(ComplexMatrix(s_h1.adjoint() * o * s_h1 - o));
  }
  return trace;
}

/// Earliest time at which eps reaches half of its plateau median over
/// [2 pi / d0, 10 pi / d0]; the grid must resolve 1/d0.
inline double jump_time(const ErrorTrace& trace, double delta0) {
  if (delta0 <= 0) fail(errc::invalid_argument, "jump_time: delta0 must be positive");
  if (trace.times.size() < 2) fail(errc::grid_too_coarse, "jump_time: trace too short");
  const double dt = trace.times[1] - trace.times[0];
  if (dt > 0.1 / delta0 + 1e-15) fail(errc::grid_too_coarse, "jump_time: need dt <= 0.1/delta0");

  std::vector<double> window;
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    if (trace.times[i] >= 2.0 * M_PI / delta0 && trace.times[i] <= 10.0 * M_PI / delta0)
      window.push_back(trace.epsilon[i]);
  if (window.size() < 3) fail(errc::grid_too_coarse, "jump_time: reference window not resolved");

  std::sort(window.begin(), window.end());
  const double median = window[window.size() / 2];
  if (median <= 1e-12) fail(errc::no_jump, "jump_time: error stays at zero");

  for (std::size_t i = 0; i < trace.times.size(); ++i)
    if (trace.epsilon[i] >= 0.5 * median) return trace.times[i];
  fail(errc::no_jump, "jump_time: threshold never reached");
}

}  // namespace gapbound::dynamics
