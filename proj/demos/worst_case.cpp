// Reproduces the two worst-case error curves: the driven two-level atom,
// whose first peak saturates the bound intercept, and the half-driven pair,
// whose drift saturates the slope. Prints t, numeric eps, closed form, bound.

#include <cstdio>

#include "gapbound/banding.hpp"
#include "gapbound/dynamics.hpp"
#include "gapbound/models.hpp"

using namespace gapbound;

namespace {

void show(const models::ModelInstance& model, double (*closed_form)(double, double, double), double t_end) {
  const auto spec0 = eig_hermitian(model.h0);
  const auto part = banding::band_partition(spec0, model.band);
  const auto grid = dynamics::TimeGrid::uniform(0.0, t_end, 9);
  const auto trace = dynamics::error_trace(model, part, grid);
  const auto bound = dynamics::asymptotic_bound(model.meta.norm_v, model.meta.delta0, grid);

  std::printf("%s (delta0 = %g, omega = %g)\n", model.meta.name.c_str(), model.meta.delta0, model.meta.omega);
  std::printf("%10s %12s %12s %12s\n", "t", "eps", "closed form", "bound");
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    std::printf("%10.4f %12.6f %12.6f %12.6f\n", trace.times[i], trace.epsilon[i],
                closed_form(model.meta.delta0, model.meta.omega, trace.times[i]), bound.values[i]);
  std::printf("\n");
}

}  // namespace

int main() {
  show(models::build_two_level(10.0, 1.0), dynamics::analytic_two_level, 4.0);
  show(models::build_four_level(10.0, 1.0), dynamics::analytic_four_level, 20.0);
  return 0;
}
