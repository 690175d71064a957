#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "gapbound/manybody.hpp"

using namespace gapbound;
using namespace gapbound::manybody;

namespace {

dynamics::ErrorTrace synthetic(const std::vector<double>& times, double (*f)(double), double delta0 = 100.0) {
  dynamics::ErrorTrace trace;
  trace.times = times;
  trace.epsilon.reserve(times.size());
  for (double t : times) trace.epsilon.push_back(f(t));
  trace.meta.delta0 = delta0;
  return trace;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

TEST_CASE("growth fit recovers an exact quadratic", "[manybody]") {
  const auto trace = synthetic(linspace(0, 10, 101), [](double t) { return t * t; });
  const auto fit = fit_growth(trace, 0.0, 10.0);
  REQUIRE(fit.preferred == FitModel::quadratic);
  REQUIRE_THAT(fit.quadratic.c2, Catch::Matchers::WithinAbs(1.0, 1e-8));
  REQUIRE(fit.quadratic.rms < 1e-8);
}

TEST_CASE("growth fit recovers an exact line", "[manybody]") {
  const auto trace = synthetic(linspace(0, 10, 101), [](double t) { return 0.3 * t; });
  const auto fit = fit_growth(trace, 0.0, 10.0);
  // a pure line is fit exactly by both models; the quadratic gains nothing
  REQUIRE_THAT(fit.linear.slope, Catch::Matchers::WithinAbs(0.3, 1e-10));
  REQUIRE(fit.linear.rms < 1e-10);
  REQUIRE(std::abs(fit.quadratic.c2) < 1e-10);
}

TEST_CASE("growth fit prefers the line on noisy linear data", "[manybody]") {
  // deterministic bounded wiggle on top of a line: quadratic cannot win by
  // more than the wiggle, and on symmetric data the rms comparison is close;
  // use a shape with zero quadratic moment
  const auto trace = synthetic(linspace(0, 10, 201), [](double t) { return 0.3 * t + 1e-3 * std::sin(20 * t); });
  const auto fit = fit_growth(trace, 0.0, 10.0);
  REQUIRE_THAT(fit.linear.slope, Catch::Matchers::WithinAbs(0.3, 1e-2));
  REQUIRE(std::abs(fit.quadratic.c2) < 1e-3);
}

TEST_CASE("growth fit rejects narrow windows", "[manybody]") {
  const auto trace = synthetic(linspace(0, 10, 101), [](double t) { return t; });
  REQUIRE_THROWS_MATCHES(fit_growth(trace, 9.2, 10.0), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::window_too_narrow;
                         }));
}

TEST_CASE("rescaled collapse is exact for 1/delta0 scaling", "[manybody]") {
  SECTION("identical traces collapse to zero dispersion") {
    const auto trace = synthetic(linspace(0, 10, 51), [](double t) { return 0.1 * t; }, 100.0);
    const auto report = rescaled_collapse({trace, trace});
    REQUIRE(report.dispersion == 0.0);
  }
  SECTION("eps = C t^2 / delta0 collapses exactly") {
    auto t100 = synthetic(linspace(0, 10, 51), [](double t) { return 3.0 * t * t / 100.0; }, 100.0);
    auto t200 = synthetic(linspace(0, 10, 51), [](double t) { return 3.0 * t * t / 200.0; }, 200.0);
    const auto report = rescaled_collapse({t100, t200});
    REQUIRE(report.dispersion < 1e-12);
    REQUIRE(report.delta0_values == std::vector<double>{100.0, 200.0});
  }
}

TEST_CASE("rescaled collapse rejects mismatched grids", "[manybody]") {
  const auto a = synthetic(linspace(0, 10, 51), [](double t) { return t; }, 100.0);
  const auto b = synthetic(linspace(0, 10, 41), [](double t) { return t; }, 200.0);
  REQUIRE_THROWS_MATCHES(rescaled_collapse({a, b}), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::grid_mismatch;
                         }));
  REQUIRE_THROWS_AS(rescaled_collapse({a}), Error);
}

TEST_CASE("transition time recovers a constructed changepoint", "[manybody]") {
  // t^2 glued continuously to a line at t = 5
  const auto trace = synthetic(linspace(0, 10, 101), [](double t) { return t <= 5.0 ? t * t : 25.0 + 10.0 * (t - 5.0); });
  const double t_star = lr_transition_time(trace);
  REQUIRE(std::abs(t_star - 5.0) <= 0.1 + 1e-12);  // one grid step
}

TEST_CASE("transition time reports no transition on a pure quadratic", "[manybody]") {
  const auto trace = synthetic(linspace(0, 10, 101), [](double t) { return 0.4 * t * t; });
  REQUIRE_THROWS_MATCHES(lr_transition_time(trace), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::no_transition;
                         }));
}

TEST_CASE("pxp experiment produces one trace per gap with the band bookkeeping", "[manybody]") {
  const auto grid = dynamics::TimeGrid::uniform(0.0, 2.0, 21);
  const auto traces = run_pxp_experiment(4, 2.0, {10.0, 100.0}, grid);
  REQUIRE(traces.size() == 2);
  for (const auto& trace : traces) {
    REQUIRE(trace.meta.band_dim == 8);  // 4-bit strings without adjacent 1s
    REQUIRE(trace.epsilon[0] < 1e-12);
    REQUIRE_THAT(trace.meta.norm_v_star, Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(trace.meta.norm_v, Catch::Matchers::WithinAbs(4.0, 1e-12));
  }
  REQUIRE(traces[0].meta.delta0 == 10.0);
  REQUIRE(traces[1].meta.delta0 == 100.0);
}

TEST_CASE("pxp experiment enforces the local-strength regime", "[manybody]") {
  const auto grid = dynamics::TimeGrid::uniform(0.0, 1.0, 11);
  REQUIRE_THROWS_MATCHES(run_pxp_experiment(4, 2.0, {5.0}, grid), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::regime_violation; }));
}

TEST_CASE("pxp smoke run shows quadratic growth past the jump", "[manybody]") {
  // small chain, one decade of gap: the quadratic fit must win on the window
  const double omega = 2.0, delta0 = 40.0;
  const auto grid = dynamics::TimeGrid::uniform(0.0, 5.0, 51);
  const auto traces = run_pxp_experiment(8, omega, {delta0}, grid);
  const auto fit = fit_growth(traces[0], 10.0 * M_PI / delta0, 5.0);
  REQUIRE(fit.preferred == FitModel::quadratic);
}
