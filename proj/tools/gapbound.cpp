#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "gapbound/config.hpp"
#include "gapbound/runner.hpp"
#include "gapbound/threads.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCertificate = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
  std::string config_file;
  std::map<std::string, std::string> overrides;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_file, "Config file (key = value with [grid] and [band] sections)");
  auto forward = [&opt](const std::string& key) {
    return [&opt, key](const std::string& value) { opt.overrides[key] = value; };
  };
  cmd->add_option_function<std::string>("--delta0", forward("delta0"), "Gap parameter of H0");
  cmd->add_option_function<std::string>("--omega", forward("omega"), "Drive amplitude (||V|| = omega/2 per site)");
  cmd->add_option_function<std::string>("--delta0-log10", forward("delta0_log10"),
                                        "Comma-separated log10 gap sweep (pxp)");
  cmd->add_option_function<std::string>("--seed", forward("seed"), "Random seed (random_banded)");
  cmd->add_option_function<std::string>("--L", forward("L"), "Chain length (pxp)");
  cmd->add_option_function<std::string>("--n-bands", forward("n_bands"), "Number of bands (random_banded)");
  cmd->add_option_function<std::string>("--levels-per-band", forward("levels_per_band"),
                                        "Levels per band (random_banded)");
  cmd->add_option_function<std::string>("--gap-ratio", forward("gap_ratio"), "Band spacing / ||V|| (random_banded)");
  cmd->add_option_function<std::string>("--t-start", forward("grid.t_start"), "Grid start time");
  cmd->add_option_function<std::string>("--t-end", forward("grid.t_end"), "Grid end time");
  cmd->add_option_function<std::string>("--n-points", forward("grid.n_points"), "Grid point count");
  cmd->add_option_function<std::string>("--band-kind", forward("band.kind"),
                                        "index_range | energy_window | zero_subspace");
  cmd->add_option_function<std::string>("--band-lo", forward("band.lo"), "Band lower index / energy");
  cmd->add_option_function<std::string>("--band-hi", forward("band.hi"), "Band upper index / energy");
  cmd->add_option_function<std::string>("--output-dir", forward("output_dir"), "Artifact directory");
  cmd->add_option_function<std::string>("--certificates", forward("certificates"), "on | off | auto");
  cmd->add_option_function<std::string>("--slack-c", forward("slack_c"), "Remainder-bound slack constant");
  cmd->add_option_function<std::string>("--bound-slack", forward("bound_slack"), "Linear-bound slack constant");
  cmd->add_option_function<std::string>("--horizon-factor", forward("horizon_factor"),
                                        "Fraction of delta0/||V||^2 kept for bound checks");
}

gapbound::cli::ExperimentConfig assemble_config(const std::string& experiment, const CliOptions& opt) {
  std::map<std::string, std::string> kv;
  if (!opt.config_file.empty()) kv = gapbound::cli::parse_config_file(opt.config_file);
  for (const auto& [key, value] : opt.overrides) kv[key] = value;  // flags override file values
  if (!experiment.empty()) kv["experiment"] = experiment;
  gapbound::cli::ExperimentConfig config;
  gapbound::cli::apply_key_values(config, kv);
  return config;
}

int exit_code_for(const gapbound::Error& e) {
  switch (e.code()) {
    case gapbound::errc::config_error: return kExitConfig;
    default: return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gapbound: constrained-dynamics error traces, block-diagonalizing transformations and bound "
      "certificates for gapped Hamiltonians.\n"
      "Units: hbar = 1; times are in inverse units of the configured energies."};
  app.require_subcommand(1);

  std::string run_experiment, validate_experiment;
  CliOptions run_opt, validate_opt;

  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment and write CSV + JSON artifacts");
  run_cmd->add_option("experiment", run_experiment, "two_level | four_level | random_banded | pxp")->required();
  add_common_options(run_cmd, run_opt);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a config without running");
  validate_cmd->add_option("experiment", validate_experiment, "Experiment name (optional with --config)");
  add_common_options(validate_cmd, validate_opt);

  CLI::App* list_cmd = app.add_subcommand("list-experiments", "List available experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      std::puts("two_level      driven two-level atom (saturates the bound intercept)");
      std::puts("four_level     half-driven atom pair (saturates the bound slope)");
      std::puts("random_banded  random multi-band model with GUE perturbation and observable");
      std::puts("pxp            parent model of the PXP chain (quadratic many-body growth)");
      return kExitOk;
    }
    if (validate_cmd->parsed()) {
      const auto config = assemble_config(validate_experiment, validate_opt);
      const auto diagnostics = gapbound::cli::validate(config);
      bool fatal = false;
      for (const auto& d : diagnostics) {
        std::cout << (d.fatal ? "error: " : "warning: ") << d.message << '\n';
        fatal |= d.fatal;
      }
      if (diagnostics.empty()) std::cout << "config ok\n";
      return fatal ? kExitConfig : kExitOk;
    }

    gapbound::apply_thread_cap();
    const auto config = assemble_config(run_experiment, run_opt);
    const auto summary = gapbound::cli::run(config);
    for (const auto& artifact : summary.artifacts) std::cout << "wrote " << artifact << '\n';
    if (!summary.failures.empty()) {
      std::cout << "failed certificates:";
      for (const auto& f : summary.failures) std::cout << ' ' << f;
      std::cout << '\n';
      return kExitCertificate;
    }
    return kExitOk;
  } catch (const gapbound::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
