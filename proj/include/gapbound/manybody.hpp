#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gapbound/banding.hpp"
#include "gapbound/dynamics.hpp"
#include "gapbound/models.hpp"

namespace gapbound::manybody {

namespace detail {

struct PolyFitResult {
  std::vector<double> coeffs;  // descending powers
  double rms = 0.0;
};

/// Ordinary least squares of y against polynomials of t (descending powers).
inline PolyFitResult polyfit(const std::vector<double>& t, const std::vector<double>& y, int degree) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = degree; j >= 0; --j) {
      a(i, j) = p;
      p *= t[i];
    }
    rhs(i) = y[i];
  }
  Eigen::VectorXd c = a.householderQr().solve(rhs);
  PolyFitResult out;
  out.coeffs.assign(c.data(), c.data() + c.size());
  out.rms = std::sqrt((a * c - rhs).squaredNorm() / n);
  return out;
}

}  // namespace detail

struct LinearFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};
struct QuadraticFit {
  double c2 = 0.0, c1 = 0.0, c0 = 0.0, rms = 0.0;
};
enum class FitModel { linear, quadratic };

/// Competing growth-law fits over a time window.
struct GrowthFit {
  double t_lo = 0.0, t_hi = 0.0;
  LinearFit linear;
  QuadraticFit quadratic;
  FitModel preferred = FitModel::linear;
};

struct CollapseReport {
  std::vector<double> delta0_values;
  std::vector<std::vector<double>> rescaled;  // d0 * eps(t) per trace
  double dispersion = 0.0;
};

/// Error dynamics of the PXP parent chain for a sweep of gap values, sharing
/// the grid and the site-1 sy observable. Requires the local-strength regime
/// d0 >= 10 ||V||_star (the global ||V|| grows with L by construction).
inline std::vector<dynamics::ErrorTrace> run_pxp_experiment(int length, double omega,
                                                            const std::vector<double>& delta0_values,
                                                            const dynamics::TimeGrid& grid) {
  if (delta0_values.empty()) fail(errc::invalid_argument, "run_pxp_experiment: no gap values");
  std::vector<dynamics::ErrorTrace> traces;
  traces.reserve(delta0_values.size());
  for (double delta0 : delta0_values) {
    if (delta0 < 10.0 * omega / 2.0)
      fail(errc::regime_violation, "run_pxp_experiment: need delta0 >= 10 ||V||_star = " + std::to_string(5.0 * omega));
    models::PxpModel model = models::build_pxp_parent(length, delta0, omega);
    const SpectralDecomposition spec0 = eig_hermitian(model.instance.h0);
    const banding::BandPartition part = banding::band_partition(spec0, model.instance.band);
    traces.push_back(dynamics::error_trace(model.instance, part, grid));
  }
  return traces;
}

/// Least-squares linear and quadratic fits of eps(t) over [t_lo, t_hi];
/// the preferred model is the one with smaller rms residual.
inline GrowthFit fit_growth(const dynamics::ErrorTrace& trace, double t_lo, double t_hi) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] >= t_lo && trace.times[i] <= t_hi) {
      t.push_back(trace.times[i]);
      y.push_back(trace.epsilon[i]);
    }
  }
  if (t.size() < 10)
    fail(errc::window_too_narrow, "fit_growth: only " + std::to_string(t.size()) + " points in the window");

  GrowthFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  const auto lin = detail::polyfit(t, y, 1);
  const auto quad = detail::polyfit(t, y, 2);
  fit.linear = {lin.coeffs[0], lin.coeffs[1], lin.rms};
  fit.quadratic = {quad.coeffs[0], quad.coeffs[1], quad.coeffs[2], quad.rms};
  fit.preferred = quad.rms < lin.rms ? FitModel::quadratic : FitModel::linear;
  return fit;
}

/// Gap-rescaled traces d0 * eps(t) and their relative spread across the
/// sweep, evaluated outside the initial jump window. A negative
/// `jump_exclusion` selects the default 10 pi / min(d0).
inline CollapseReport rescaled_collapse(const std::vector<dynamics::ErrorTrace>& traces,
                                        double jump_exclusion = -1.0) {
  if (traces.size() < 2) fail(errc::invalid_argument, "rescaled_collapse: need at least 2 traces");
  const auto& t0 = traces.front().times;
  for (const auto& tr : traces) {
    if (tr.times.size() != t0.size()) fail(errc::grid_mismatch, "rescaled_collapse: grids differ in size");
    for (std::size_t i = 0; i < t0.size(); ++i)
      if (std::abs(tr.times[i] - t0[i]) > 1e-12) fail(errc::grid_mismatch, "rescaled_collapse: grids differ");
  }

  CollapseReport report;
  double min_delta0 = std::numeric_limits<double>::infinity();
  for (const auto& tr : traces) {
    if (tr.meta.delta0 <= 0) fail(errc::invalid_argument, "rescaled_collapse: trace lacks a gap value");
    min_delta0 = std::min(min_delta0, tr.meta.delta0);
    report.delta0_values.push_back(tr.meta.delta0);
    std::vector<double> r(tr.epsilon.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = tr.meta.delta0 * tr.epsilon[i];
    report.rescaled.push_back(std::move(r));
  }
  if (jump_exclusion < 0) jump_exclusion = 10.0 * M_PI / min_delta0;

  double dispersion = 0.0;
  std::vector<double> column(traces.size());
  for (std::size_t i = 0; i < t0.size(); ++i) {
    if (t0[i] <= jump_exclusion) continue;
    for (std::size_t j = 0; j < traces.size(); ++j) column[j] = report.rescaled[j][i];
    std::sort(column.begin(), column.end());
    const double spread = column.back() - column.front();
    if (spread == 0.0) continue;
    const std::size_t m = column.size();
    const double median = (m % 2 == 1) ? column[m / 2] : 0.5 * (column[m / 2 - 1] + column[m / 2]);
    dispersion = std::max(dispersion, spread / median);
  }
  report.dispersion = dispersion;
  return report;
}

/// Changepoint between quadratic and linear growth: a segmented fit
/// (quadratic before the knot, linear after, value-matched at the knot)
/// scanned over candidate grid points, minimizing the total rms. Throws
/// no_transition when the best knot improves on a single global fit by less
/// than 5%. `fit_start` drops the initial jump from the fit.
inline double lr_transition_time(const dynamics::ErrorTrace& trace, double fit_start = 0.0) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] >= fit_start) {
      t.push_back(trace.times[i]);
      y.push_back(trace.epsilon[i]);
    }
  }
  const int n = static_cast<int>(t.size());
  constexpr int kMinSide = 5;
  if (n < 2 * kMinSide + 1) fail(errc::window_too_narrow, "lr_transition_time: too few points");

  const double global_rms = std::min(detail::polyfit(t, y, 2).rms, detail::polyfit(t, y, 1).rms);

  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  double best_rms = std::numeric_limits<double>::infinity();
  int best_index = -1;
  for (int ci = kMinSide; ci + kMinSide < n; ++ci) {
    // columns: value at the knot, pre-knot slope and curvature, post-knot slope
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, 4);
    for (int i = 0; i < n; ++i) {
      const double dt = t[i] - t[ci];
      a(i, 0) = 1.0;
      if (i <= ci) {
        a(i, 1) = dt;
        a(i, 2) = dt * dt;
      } else {
        a(i, 3) = dt;
      }
    }
    const Eigen::VectorXd c = a.householderQr().solve(rhs);
    const double rms = std::sqrt((a * c - rhs).squaredNorm() / n);
    if (rms < best_rms) {
      best_rms = rms;
      best_index = ci;
    }
  }
  if (global_rms < 1e-12 || 1.0 - best_rms / global_rms < 0.05)
    fail(errc::no_transition, "lr_transition_time: no changepoint improves on a global fit");
  return t[best_index];
}

}  // namespace gapbound::manybody
