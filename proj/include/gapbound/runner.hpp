#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "gapbound/banding.hpp"
#include "gapbound/config.hpp"
#include "gapbound/dynamics.hpp"
#include "gapbound/io.hpp"
#include "gapbound/manybody.hpp"
#include "gapbound/models.hpp"
#include "gapbound/swt.hpp"

namespace gapbound::cli {

using Json = nlohmann::ordered_json;

struct RunSummary {
  int exit_code = 0;                   // 0 ok, 2 certificate failure
  std::vector<std::string> failures;   // machine-readable failed-check names
  std::vector<std::string> artifacts;  // files written
  Json json;
};

namespace detail {

inline Json config_echo(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = to_string(c.experiment);
  if (c.delta0 > 0) j["delta0"] = c.delta0;
  if (!c.delta0_log10.empty()) j["delta0_log10"] = c.delta0_log10;
  if (c.omega > 0) j["omega"] = c.omega;
  j["seed"] = c.seed;
  if (c.length > 0) j["L"] = c.length;
  if (c.experiment == Experiment::random_banded) {
    j["n_bands"] = c.n_bands;
    j["levels_per_band"] = c.levels_per_band;
    j["gap_ratio"] = c.gap_ratio;
  }
  j["grid"] = {{"t_start", c.grid.t_start}, {"t_end", c.grid.t_end}, {"n_points", c.grid.n_points}};
  if (c.band) {
    const char* kind = c.band->kind == banding::BandKind::index_range     ? "index_range"
                       : c.band->kind == banding::BandKind::energy_window ? "energy_window"
                                                                          : "zero_subspace";
    j["band"] = {{"kind", kind}};
    if (c.band->kind == banding::BandKind::index_range) {
      j["band"]["lo"] = c.band->ilo;
      j["band"]["hi"] = c.band->ihi;
    } else if (c.band->kind == banding::BandKind::energy_window) {
      j["band"]["lo"] = c.band->elo;
      j["band"]["hi"] = c.band->ehi;
    }
  }
  j["certificates"] = c.certificates;
  j["slack_c"] = c.slack_c;
  j["bound_slack"] = c.bound_slack;
  j["horizon_factor"] = c.horizon_factor;
  j["output_dir"] = c.output_dir;
  return j;
}

inline Json certificate_json(const swt::Certificate& c) {
  return Json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}};
}

struct CertificateBundle {
  banding::GapCertificate gap;
  swt::SwtResult transform;
  swt::Certificate eq8;
  bool eq10_applicable = false;
  swt::Certificate eq10;
};

/// Gap + SWT certificates for a model whose partition carries V blocks.
inline CertificateBundle run_certificates(const models::ModelInstance& model, const banding::BandPartition& part,
                                          double slack_c) {
  CertificateBundle out;
  const HermitianOperator h(ComplexMatrix(model.h0.matrix + model.v.matrix));
  const HermitianOperator h1(ComplexMatrix(model.h0.matrix + part.blocks->v_diag));
  out.gap = banding::block_spectral_gap(h1, part, model.meta.norm_v);
  out.transform = swt::perform_swt(h, h1, part, out.gap);
  out.eq8 = swt::certify_generator(out.transform, out.gap);
  try {
    out.eq10 = swt::certify_remainder(out.transform, part.delta0, model.meta.norm_v, slack_c);
    out.eq10_applicable = true;
  } catch (const Error& e) {
    if (e.code() != errc::regime_violation) throw;
  }
  return out;
}

}  // namespace detail

/// Runs one experiment: writes one CSV per trace plus a JSON summary, returns
/// the summary with exit code 0 iff every enabled certificate holds.
inline RunSummary run(const ExperimentConfig& config) {
  const auto diagnostics = validate(config);
  std::string fatal_messages;
  for (const auto& d : diagnostics)
    if (d.fatal) fatal_messages += (fatal_messages.empty() ? "" : "; ") + d.message;
  if (!fatal_messages.empty()) fail(errc::config_error, fatal_messages);

  const auto t_begin = std::chrono::steady_clock::now();
  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path out_dir(config.output_dir);

  RunSummary summary;
  Json& j = summary.json;
  j["schema_version"] = 1;
  j["experiment"] = to_string(config.experiment);
  j["config"] = detail::config_echo(config);

  const dynamics::TimeGrid grid = dynamics::TimeGrid::uniform(config.grid.t_start, config.grid.t_end, config.grid.n_points);

  if (config.experiment == Experiment::pxp) {
    std::vector<double> delta0_values;
    if (!config.delta0_log10.empty())
      for (double lg : config.delta0_log10) delta0_values.push_back(std::pow(10.0, lg));
    else
      delta0_values.push_back(config.delta0);

    auto traces = manybody::run_pxp_experiment(config.length, config.omega, delta0_values, grid);

    Json sweep = Json::array();
    for (std::size_t i = 0; i < traces.size(); ++i) {
      auto& trace = traces[i];
      const double delta0 = delta0_values[i];

      Json entry;
      entry["delta0"] = delta0;
      entry["band_dim"] = trace.meta.band_dim;
      entry["norm_V"] = trace.meta.norm_v;
      entry["norm_V_star"] = trace.meta.norm_v_star;

      const auto bound = dynamics::asymptotic_bound(trace.meta.norm_v, delta0, grid);
      entry["bound_in_regime"] = bound.in_regime;
      if (bound.in_regime) trace.bound = bound.values;

      const double fit_lo = 10.0 * M_PI / delta0;
      if (grid.t_end > fit_lo) {
        try {
          const auto fit = manybody::fit_growth(trace, fit_lo, grid.t_end);
          entry["fit"] = {{"t_lo", fit.t_lo},
                          {"t_hi", fit.t_hi},
                          {"linear", {{"slope", fit.linear.slope}, {"intercept", fit.linear.intercept}, {"rms", fit.linear.rms}}},
                          {"quadratic",
                           {{"c2", fit.quadratic.c2}, {"c1", fit.quadratic.c1}, {"c0", fit.quadratic.c0}, {"rms", fit.quadratic.rms}}},
                          {"preferred", fit.preferred == manybody::FitModel::quadratic ? "quadratic" : "linear"}};
        } catch (const Error& e) {
          if (e.code() != errc::window_too_narrow) throw;
          entry["fit"] = nullptr;
        }
      }

      char name[64];
      std::snprintf(name, sizeof(name), "pxp_trace_d0log10_%.4g.csv", std::log10(delta0));
      write_trace_csv(trace, out_dir / name);
      summary.artifacts.push_back((out_dir / name).string());
      sweep.push_back(std::move(entry));
    }
    j["sweep"] = std::move(sweep);

    if (traces.size() >= 2) {
      const auto collapse = manybody::rescaled_collapse(traces);
      j["collapse"] = {{"delta0_values", collapse.delta0_values}, {"dispersion", collapse.dispersion}};
      write_rescaled_csv(traces.front().times, collapse.delta0_values, collapse.rescaled, out_dir / "pxp_rescaled.csv");
      summary.artifacts.push_back((out_dir / "pxp_rescaled.csv").string());
    }

    const bool want_certs = config.certificates == "on" ||
                            (config.certificates == "auto" && (1 << config.length) <= 512);
    if (want_certs) {
      Json certs = Json::array();
      for (std::size_t i = 0; i < delta0_values.size(); ++i) {
        auto model = models::build_pxp_parent(config.length, delta0_values[i], config.omega);
        const auto spec0 = eig_hermitian(model.instance.h0);
        const auto part = banding::band_partition(spec0, model.instance.band, &model.instance.v.matrix);
        const auto bundle = detail::run_certificates(model.instance, part, config.slack_c);
        Json entry;
        entry["delta0"] = delta0_values[i];
        entry["weyl"] = {{"delta", bundle.gap.delta}, {"weyl_lower", bundle.gap.weyl_lower}, {"satisfied", bundle.gap.satisfied}};
        entry["eq8"] = detail::certificate_json(bundle.eq8);
        entry["eq10"] = bundle.eq10_applicable ? detail::certificate_json(bundle.eq10) : Json(nullptr);
        entry["norm_T"] = bundle.transform.norm_t;
        entry["norm_V_prime"] = bundle.transform.norm_v_prime;
        if (!bundle.gap.satisfied) summary.failures.push_back("weyl");
        if (!bundle.eq8.holds) summary.failures.push_back("eq8");
        if (bundle.eq10_applicable && !bundle.eq10.holds) summary.failures.push_back("eq10");
        certs.push_back(std::move(entry));
      }
      j["certificates"] = std::move(certs);
    }
  } else {
    models::ModelInstance model;
    switch (config.experiment) {
      case Experiment::two_level: model = models::build_two_level(config.delta0, config.omega); break;
      case Experiment::four_level: model = models::build_four_level(config.delta0, config.omega); break;
      case Experiment::random_banded:
        model = models::build_random_banded(config.seed, config.n_bands, config.levels_per_band, config.gap_ratio);
        break;
      default: fail(errc::config_error, "unreachable");
    }

    const auto spec0 = eig_hermitian(model.h0);
    const banding::BandSelector selector = config.band ? *config.band : model.band;
    const auto part = banding::band_partition(spec0, selector, &model.v.matrix);

    const bool want_certs =
        config.certificates == "on" || (config.certificates == "auto" && model.h0.dim() <= 512);

    j["norms"] = {{"V", model.meta.norm_v}, {"delta0", part.delta0}};
    if (model.meta.norm_v_star >= 0) j["norms"]["V_star"] = model.meta.norm_v_star;

    dynamics::ErrorTrace trace;
    if (want_certs) {
      const auto bundle = detail::run_certificates(model, part, config.slack_c);
      j["norms"]["T"] = bundle.transform.norm_t;
      j["norms"]["V_prime"] = bundle.transform.norm_v_prime;
      j["norms"]["delta"] = bundle.gap.delta;
      j["certificates"] = {
          {"weyl", {{"delta", bundle.gap.delta}, {"weyl_lower", bundle.gap.weyl_lower}, {"satisfied", bundle.gap.satisfied}}},
          {"eq8", detail::certificate_json(bundle.eq8)},
          {"eq10", bundle.eq10_applicable ? detail::certificate_json(bundle.eq10) : Json(nullptr)}};
      if (!bundle.gap.satisfied) summary.failures.push_back("weyl");
      if (!bundle.eq8.holds) summary.failures.push_back("eq8");
      if (bundle.eq10_applicable && !bundle.eq10.holds) summary.failures.push_back("eq10");
      trace = dynamics::error_decomposition(model, part, bundle.transform, grid);
    } else {
      trace = dynamics::error_trace(model, part, grid);
    }

    const double delta0 = part.delta0;
    const auto bound = dynamics::asymptotic_bound(model.meta.norm_v, delta0, grid);
    j["bound"] = {{"in_regime", bound.in_regime},
                  {"intercept", bound.intercept},
                  {"slope", bound.slope},
                  {"t_max", bound.t_max}};
    if (bound.in_regime) {
      trace.bound = bound.values;
      const double horizon =
          std::min(2.0 / model.meta.norm_v, config.horizon_factor * delta0 / (model.meta.norm_v * model.meta.norm_v));
      const double slack = 1.0 + config.bound_slack * model.meta.norm_v / delta0;
      double max_margin = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] > horizon) break;
        max_margin = std::max(max_margin, trace.epsilon[i] - bound.values[i] * slack);
      }
      j["bound"]["horizon"] = horizon;
      j["bound"]["slack_factor"] = slack;
      j["bound"]["max_margin"] = max_margin;
      if (max_margin > 0) summary.failures.push_back("linear_bound");
    }

    const std::string csv_name = std::string(to_string(config.experiment)) + "_trace.csv";
    write_trace_csv(trace, out_dir / csv_name);
    summary.artifacts.push_back((out_dir / csv_name).string());
  }

  const auto t_finish = std::chrono::steady_clock::now();
  j["failures"] = summary.failures;
  j["wall_clock_seconds"] = std::chrono::duration<double>(t_finish - t_begin).count();
  j["artifacts"] = summary.artifacts;

  const std::string summary_name = std::string(to_string(config.experiment)) + "_summary.json";
  {
    std::ofstream out(out_dir / summary_name, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + (out_dir / summary_name).string());
    out << j.dump(2) << '\n';
  }
  summary.artifacts.push_back((out_dir / summary_name).string());

  summary.exit_code = summary.failures.empty() ? 0 : 2;
  return summary;
}

}  // namespace gapbound::cli
