#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gapbound/config.hpp"
#include "gapbound/io.hpp"
#include "gapbound/runner.hpp"

using namespace gapbound;
using namespace gapbound::cli;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long count_lines(const std::string& s) {
  long n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("config files parse sections into dotted keys", "[cli]") {
  const fs::path dir = fresh_dir("gapbound_cli_cfg");
  const fs::path file = dir / "exp.cfg";
  {
    std::ofstream out(file);
    out << "# comment\n"
        << "experiment = two_level\n"
        << "delta0 = 10\n"
        << "omega = 1\n"
        << "[grid]\n"
        << "t_end = 4\n"
        << "n_points = 400\n"
        << "[band]\n"
        << "kind = index_range\n"
        << "lo = 0\n"
        << "hi = 0\n";
  }
  const auto kv = parse_config_file(file.string());
  REQUIRE(kv.at("experiment") == "two_level");
  REQUIRE(kv.at("grid.t_end") == "4");
  REQUIRE(kv.at("band.kind") == "index_range");

  ExperimentConfig config;
  apply_key_values(config, kv);
  REQUIRE(config.experiment == Experiment::two_level);
  REQUIRE(config.delta0 == 10.0);
  REQUIRE(config.grid.n_points == 400);
  REQUIRE(config.band.has_value());
  REQUIRE(config.band->kind == banding::BandKind::index_range);
}

TEST_CASE("unknown keys and malformed lines are config errors", "[cli]") {
  ExperimentConfig config;
  REQUIRE_THROWS_MATCHES(apply_key_values(config, {{"delt0", "10"}}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::config_error; }));

  const fs::path dir = fresh_dir("gapbound_cli_bad");
  const fs::path file = dir / "bad.cfg";
  {
    std::ofstream out(file);
    out << "no equals sign here\n";
  }
  REQUIRE_THROWS_AS(parse_config_file(file.string()), Error);
  REQUIRE_THROWS_AS(parse_config_file((dir / "missing.cfg").string()), Error);
}

TEST_CASE("validate reports missing fields by name", "[cli]") {
  ExperimentConfig config;
  config.experiment = Experiment::two_level;
  config.omega = 1.0;
  config.grid.t_end = 4.0;
  config.grid.n_points = 100;
  const auto diagnostics = validate(config);
  REQUIRE(diagnostics.size() == 1);
  REQUIRE(diagnostics[0].fatal);
  REQUIRE(diagnostics[0].message.find("delta0") != std::string::npos);

  config.delta0 = 10.0;
  REQUIRE(validate(config).empty());
}

TEST_CASE("validate flags the dense budget and the bound regime", "[cli]") {
  ExperimentConfig pxp;
  pxp.experiment = Experiment::pxp;
  pxp.length = 20;
  pxp.omega = 2.0;
  pxp.delta0_log10 = {1.0};
  pxp.grid.t_end = 6.0;
  pxp.grid.n_points = 41;
  bool budget = false;
  for (const auto& d : validate(pxp)) budget |= d.message.find("budget") != std::string::npos;
  REQUIRE(budget);

  ExperimentConfig random;
  random.experiment = Experiment::random_banded;
  random.gap_ratio = 3.0;  // delta0 ~ 3 while ||V|| = 1
  random.grid.t_end = 2.0;
  random.grid.n_points = 21;
  const auto diagnostics = validate(random);
  REQUIRE(diagnostics.size() == 1);
  REQUIRE_FALSE(diagnostics[0].fatal);
  REQUIRE(diagnostics[0].message.find("asymptotic bound checks disabled") != std::string::npos);
}

TEST_CASE("trace CSV carries the exact schema with empty absent columns", "[cli]") {
  dynamics::ErrorTrace trace;
  trace.times = {0.0, 0.5};
  trace.epsilon = {0.0, 0.25};
  const fs::path dir = fresh_dir("gapbound_cli_csv");
  write_trace_csv(trace, dir / "t.csv");
  const std::string text = slurp(dir / "t.csv");
  REQUIRE(text.rfind("t,epsilon,bound,term_S,term_L,term_SH1\n", 0) == 0);
  REQUIRE(count_lines(text) == 3);
  REQUIRE(text.find("0.5,0.25,,,,\n") != std::string::npos);

  // 17 significant digits round-trip exactly
  trace.bound = {1.0 / 3.0, 0.1};
  write_trace_csv(trace, dir / "b.csv");
  const std::string with_bound = slurp(dir / "b.csv");
  std::istringstream lines(with_bound);
  std::string line;
  std::getline(lines, line);  // header
  std::getline(lines, line);
  const auto first = line.find(','), second = line.find(',', line.find(',') + 1);
  const std::string bound_field = line.substr(second + 1, line.find(',', second + 1) - second - 1);
  REQUIRE(std::stod(bound_field) == 1.0 / 3.0);
}

TEST_CASE("two-level run writes deterministic artifacts and passes certificates", "[cli]") {
  ExperimentConfig config;
  config.experiment = Experiment::two_level;
  config.delta0 = 10.0;
  config.omega = 1.0;
  config.grid.t_end = 4.0;
  config.grid.n_points = 50;
  const fs::path dir = fresh_dir("gapbound_cli_run");
  config.output_dir = (dir / "out").string();

  const auto summary = run(config);
  REQUIRE(summary.exit_code == 0);
  REQUIRE(summary.failures.empty());
  REQUIRE(summary.json["schema_version"] == 1);
  REQUIRE(summary.json["certificates"]["eq8"]["holds"] == true);
  REQUIRE(summary.json["certificates"]["weyl"]["satisfied"] == true);
  REQUIRE(summary.json["bound"]["in_regime"] == true);
  REQUIRE(summary.json["bound"]["max_margin"].get<double>() <= 0.0);

  const fs::path csv = fs::path(config.output_dir) / "two_level_trace.csv";
  REQUIRE(fs::exists(csv));
  const std::string first = slurp(csv);
  REQUIRE(count_lines(first) == 51);  // header + n_points rows
  REQUIRE(first.find("nan") == std::string::npos);

  // byte-identical on a repeated run
  const auto again = run(config);
  REQUIRE(slurp(csv) == first);
  REQUIRE(again.exit_code == 0);
}

TEST_CASE("random banded run emits decomposition columns and a summary", "[cli]") {
  ExperimentConfig config;
  config.experiment = Experiment::random_banded;
  config.seed = 12;
  config.grid.t_end = 2.0;
  config.grid.n_points = 30;
  const fs::path dir = fresh_dir("gapbound_cli_random");
  config.output_dir = (dir / "out").string();

  const auto summary = run(config);
  REQUIRE(summary.exit_code == 0);
  const std::string text = slurp(fs::path(config.output_dir) / "random_banded_trace.csv");
  std::istringstream lines(text);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  // all six columns populated for a certified run
  REQUIRE(std::count(row.begin(), row.end(), ',') == 5);
  REQUIRE(row.find(",,") == std::string::npos);
  REQUIRE(summary.json["norms"].contains("T"));
}

TEST_CASE("pxp run sweeps gaps and reports fits and collapse", "[cli]") {
  ExperimentConfig config;
  config.experiment = Experiment::pxp;
  config.length = 4;
  config.omega = 2.0;
  config.delta0_log10 = {1.0, 1.5};
  config.grid.t_end = 6.0;
  config.grid.n_points = 41;
  const fs::path dir = fresh_dir("gapbound_cli_pxp");
  config.output_dir = (dir / "out").string();

  const auto summary = run(config);
  REQUIRE(summary.exit_code == 0);
  REQUIRE(summary.json["sweep"].size() == 2);
  REQUIRE(summary.json["collapse"].contains("dispersion"));
  REQUIRE(fs::exists(fs::path(config.output_dir) / "pxp_rescaled.csv"));
  REQUIRE(fs::exists(fs::path(config.output_dir) / "pxp_trace_d0log10_1.csv"));
  // L = 4 is within the auto certificate budget
  REQUIRE(summary.json.contains("certificates"));
  REQUIRE(summary.json["certificates"].size() == 2);
}

TEST_CASE("run rejects invalid configs with the field name", "[cli]") {
  ExperimentConfig config;
  config.experiment = Experiment::two_level;
  config.omega = 1.0;
  config.grid.t_end = 4.0;
  config.grid.n_points = 10;
  try {
    run(config);
    FAIL("expected a config error");
  } catch (const Error& e) {
    REQUIRE(e.code() == errc::config_error);
    REQUIRE(std::string(e.what()).find("delta0") != std::string::npos);
  }
}
