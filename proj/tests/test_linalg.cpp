#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>

#include "gapbound/linalg.hpp"
#include "gapbound/rng.hpp"

using namespace gapbound;

namespace {

// Standard Pauli matrices in the conventional (spin-up first) ordering.
ComplexMatrix sx() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix sy() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
ComplexMatrix sz() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return eig_hermitian(HermitianOperator(rng.gue(dim))).eigenvectors;
}

}  // namespace

TEST_CASE("eig_hermitian on a diagonal matrix sorts with permutation eigenvectors", "[linalg]") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 3;
  m(1, 1) = 1;
  m(2, 2) = 2;
  const auto spec = eig_hermitian(HermitianOperator(m));
  REQUIRE(spec.eigenvalues(0) == 1.0);
  REQUIRE(spec.eigenvalues(1) == 2.0);
  REQUIRE(spec.eigenvalues(2) == 3.0);
  // columns are permutation basis vectors
  REQUIRE(spec.eigenvectors(1, 0) == Complex(1, 0));
  REQUIRE(spec.eigenvectors(2, 1) == Complex(1, 0));
  REQUIRE(spec.eigenvectors(0, 2) == Complex(1, 0));
  REQUIRE(spec.reconstruction_defect == 0.0);
}

TEST_CASE("eig_hermitian reproduces the Pauli spectrum", "[linalg]") {
  const auto spec = eig_hermitian(HermitianOperator(sx()));
  REQUIRE_THAT(spec.eigenvalues(0), Catch::Matchers::WithinAbs(-1.0, 1e-14));
  REQUIRE_THAT(spec.eigenvalues(1), Catch::Matchers::WithinAbs(1.0, 1e-14));
}

TEST_CASE("eig_hermitian reconstructs a GUE sample within tolerance", "[linalg]") {
  Rng rng(42);
  const HermitianOperator m(rng.gue(8));
  const auto spec = eig_hermitian(m);
  const ComplexMatrix rebuilt =
      spec.eigenvectors * spec.eigenvalues.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
  REQUIRE((rebuilt - m.matrix).norm() < 1e-10 * std::max(1.0, m.matrix.norm()));
  REQUIRE(spec.unitarity_defect < 1e-10);
  for (int i = 0; i + 1 < 8; ++i) REQUIRE(spec.eigenvalues(i) <= spec.eigenvalues(i + 1));
}

TEST_CASE("operator_norm matches hand-computed singular values", "[linalg]") {
  REQUIRE_THAT(operator_norm(ComplexMatrix(ComplexMatrix::Identity(5, 5))), Catch::Matchers::WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(operator_norm(sx()), Catch::Matchers::WithinAbs(1.0, 1e-14));

  // nilpotent [[0,2],[0,0]]: singular values are sqrt(eig(M^dag M)) = {2, 0}
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  n(0, 1) = 2.0;
  const ComplexMatrix gram = n.adjoint() * n;
  const auto gram_spec = eig_hermitian(HermitianOperator(gram));
  const double oracle = std::sqrt(gram_spec.eigenvalues.maxCoeff());
  REQUIRE_THAT(oracle, Catch::Matchers::WithinAbs(2.0, 1e-14));
  REQUIRE_THAT(operator_norm(n), Catch::Matchers::WithinAbs(oracle, 1e-12));
}

TEST_CASE("operator_norm of certified-Hermitian input equals max |eigenvalue|", "[linalg]") {
  Rng rng(7);
  const HermitianOperator m(rng.gue(16));
  const auto spec = eig_hermitian(m);
  const double by_eig = std::max(std::abs(spec.eigenvalues(0)), std::abs(spec.eigenvalues(15)));
  REQUIRE_THAT(operator_norm(m), Catch::Matchers::WithinAbs(by_eig, 1e-12));
  REQUIRE_THAT(operator_norm(m.matrix), Catch::Matchers::WithinAbs(by_eig, 1e-10));
}

TEST_CASE("propagator at t = 0 is the identity", "[linalg]") {
  Rng rng(3);
  const auto spec = eig_hermitian(HermitianOperator(rng.gue(6)));
  REQUIRE((propagator(spec, 0.0) - ComplexMatrix::Identity(6, 6)).norm() < 1e-12);
}

TEST_CASE("propagator phases follow the spectrum", "[linalg]") {
  const double delta0 = 10.0;
  const auto spec = eig_hermitian(HermitianOperator(ComplexMatrix(delta0 / 2.0 * sz())));
  // at t = 2 pi / delta0 both levels acquire e^{-+i pi}: the propagator is -1
  const ComplexMatrix u = propagator(spec, 2.0 * M_PI / delta0);
  REQUIRE((u + ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("propagators at t and -t are mutually inverse", "[linalg]") {
  Rng rng(11);
  const auto spec = eig_hermitian(HermitianOperator(rng.gue(5)));
  const ComplexMatrix product = propagator(spec, 1.7) * propagator(spec, -1.7);
  REQUIRE((product - ComplexMatrix::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("propagator group property holds for long times", "[linalg]") {
  Rng rng(12);
  const auto spec = eig_hermitian(HermitianOperator(rng.gue(6)));
  for (auto [s, t] : {std::pair{1e3, -4e2}, std::pair{250.0, 250.0}, std::pair{-1e3, 1e3}}) {
    const ComplexMatrix lhs = propagator(spec, s) * propagator(spec, t);
    REQUIRE((lhs - propagator(spec, s + t)).norm() < 1e-9);
  }
}

TEST_CASE("conjugate leaves operators alone under the identity", "[linalg]") {
  Rng rng(5);
  const ComplexMatrix o = rng.gue(4);
  REQUIRE((conjugate(ComplexMatrix::Identity(4, 4), o) - o).norm() == 0.0);
}

TEST_CASE("conjugate implements the Pauli algebra", "[linalg]") {
  REQUIRE((conjugate(sx(), sz()) + sz()).norm() < 1e-14);
}

TEST_CASE("conjugation by a unitary preserves the operator norm", "[linalg]") {
  Rng rng(19);
  const ComplexMatrix u = random_unitary(9, 20);
  const ComplexMatrix o = rng.gue(9);
  REQUIRE_THAT(operator_norm(conjugate(u, o)), Catch::Matchers::WithinAbs(operator_norm(o), 1e-10));
}

TEST_CASE("conjugate rejects mismatched dimensions", "[linalg]") {
  REQUIRE_THROWS_AS(conjugate(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)), Error);
}

TEST_CASE("exp_antihermitian of zero is the identity", "[linalg]") {
  REQUIRE((exp_antihermitian(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("exp_antihermitian matches the closed-form Pauli exponential", "[linalg]") {
  // e^{i pi sx / 2} = cos(pi/2) + i sin(pi/2) sx = i sx
  const ComplexMatrix t = Complex(0, M_PI / 2.0) * sx();
  const ComplexMatrix expected = Complex(0, 1) * sx();
  REQUIRE((exp_antihermitian(t) - expected).norm() < 1e-12);
}

TEST_CASE("exp_antihermitian produces unitary inverse pairs", "[linalg]") {
  Rng rng(23);
  const ComplexMatrix h = rng.gue(7);
  const ComplexMatrix t = Complex(0, 1) * h;  // anti-Hermitian
  const ComplexMatrix u = exp_antihermitian(t);
  REQUIRE((u * exp_antihermitian(ComplexMatrix(-t)) - ComplexMatrix::Identity(7, 7)).norm() < 1e-10);
  REQUIRE((u.adjoint() * u - ComplexMatrix::Identity(7, 7)).norm() < 1e-10);
}

TEST_CASE("exp_antihermitian rejects Hermitian input", "[linalg]") {
  REQUIRE_THROWS_AS(exp_antihermitian(sx()), Error);
}

TEST_CASE("commutator implements the Pauli algebra and antisymmetry", "[linalg]") {
  REQUIRE((commutator(sx(), sy()) - Complex(0, 2) * sz()).norm() < 1e-14);
  Rng rng(31);
  const ComplexMatrix a = rng.gue(5);
  REQUIRE(commutator(a, a).norm() == 0.0);
  const ComplexMatrix b = rng.gue(5);
  REQUIRE((commutator(a, b) + commutator(b, a)).norm() < 1e-14);
}

TEST_CASE("commutator norm obeys submultiplicativity on random samples", "[linalg]") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix t = rng.gue(6);
    const ComplexMatrix o = rng.gue(6);
    REQUIRE(operator_norm(commutator(t, o)) <= 2.0 * operator_norm(t) * operator_norm(o) + 1e-9);
  }
}

TEST_CASE("operator_norm is submultiplicative and unitarily invariant", "[linalg]") {
  Rng rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const ComplexMatrix a = rng.gue(7);
    const ComplexMatrix b = rng.gue(7);
    REQUIRE(operator_norm(ComplexMatrix(a * b)) <= operator_norm(a) * operator_norm(b) + 1e-9);
  }
  const ComplexMatrix u = random_unitary(7, 43);
  const ComplexMatrix m = rng.gue(7);
  REQUIRE_THAT(operator_norm(ComplexMatrix(u * m)), Catch::Matchers::WithinAbs(operator_norm(m), 1e-9));
}

TEST_CASE("HermitianOperator rejects non-Hermitian and non-finite input", "[linalg]") {
  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  REQUIRE_THROWS_AS(HermitianOperator(bad), Error);
  ComplexMatrix nan_mat = ComplexMatrix::Zero(2, 2);
  nan_mat(0, 0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(HermitianOperator(nan_mat), Error);
}

TEST_CASE("Rng is deterministic and Box-Muller is well-behaved", "[linalg]") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) REQUIRE(a.normal() == b.normal());
  Rng c(5);
  const ComplexMatrix m1 = c.gue(6);
  Rng d(5);
  const ComplexMatrix m2 = d.gue(6);
  REQUIRE((m1 - m2).norm() == 0.0);
  REQUIRE(hermiticity_defect(m1) == 0.0);
}
