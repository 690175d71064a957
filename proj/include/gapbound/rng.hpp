#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "gapbound/linalg.hpp"

namespace gapbound {

/// Seedable deterministic generator. Draws are built directly from
/// mt19937_64 output words (uniform) and Box-Muller (normal), so a given
/// seed reproduces the same stream independent of the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Hermitian sample from the Gaussian unitary ensemble: real N(0,1) on the
  /// diagonal, (N(0,1) + i N(0,1))/sqrt(2) above it. Row-major fill order.
  ComplexMatrix gue(int dim) {
    ComplexMatrix m(dim, dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i) {
      m(i, i) = Complex(normal(), 0.0);
      for (int j = i + 1; j < dim; ++j) {
        const double re = normal() * inv_sqrt2;
        const double im = normal() * inv_sqrt2;
        m(i, j) = Complex(re, im);
        m(j, i) = Complex(re, -im);
      }
    }
    return m;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gapbound
