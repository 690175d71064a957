#pragma once

#include <cmath>
#include <string>

#include "gapbound/banding.hpp"
#include "gapbound/linalg.hpp"

namespace gapbound::swt {

/// Outcome of the block-diagonalizing transformation S = e^T:
/// e^T H e^{-T} = H1 + V' with T anti-Hermitian and block-off-diagonal.
struct SwtResult {
  ComplexMatrix generator;  // T
  ComplexMatrix rotation;   // S = e^T
  ComplexMatrix v_prime;    // exact remainder
  double norm_t = 0.0;
  double norm_v_prime = 0.0;
  double bound_t = 0.0;        // ||PVQ|| / Delta
  double bound_v_prime = 0.0;  // ||T|| ||V||
};

/// One checked inequality with both sides recorded.
struct Certificate {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Solves T H_Q - H_P T = -PVQ for the block-off-diagonal anti-Hermitian
/// generator, entrywise in the eigenbases of the H1 blocks. The partition
/// must carry V blocks. Throws zero_gap on a resonant denominator.
inline ComplexMatrix solve_sylvester(const HermitianOperator& h1, const banding::BandPartition& part) {
  if (!part.blocks) fail(errc::invalid_argument, "solve_sylvester: partition carries no V blocks");
  const auto& b = part.isometry_p;
  const auto& bq = part.isometry_q;

  HermitianOperator hp(ComplexMatrix(b.adjoint() * h1.matrix * b));
  HermitianOperator hq(ComplexMatrix(bq.adjoint() * h1.matrix * bq));
  const SpectralDecomposition sp = eig_hermitian(hp);
  const SpectralDecomposition sq = eig_hermitian(hq);

  const ComplexMatrix v = part.blocks->v_diag + part.blocks->v_off;
  const ComplexMatrix vpq = b.adjoint() * v * bq;  // PVQ in the band bases
  ComplexMatrix x = sp.eigenvectors.adjoint() * vpq * sq.eigenvectors;

  const double res_tol = 1e-12 * std::max(operator_norm(h1), kAbsFloor);
  for (Eigen::Index p = 0; p < x.rows(); ++p) {
    for (Eigen::Index q = 0; q < x.cols(); ++q) {
      const double denom = sp.eigenvalues(p) - sq.eigenvalues(q);
      if (std::abs(denom) <= res_tol)
        fail(errc::zero_gap, "solve_sylvester: resonant block eigenvalues E_p = " +
                                 std::to_string(sp.eigenvalues(p)) + ", E_q = " + std::to_string(sq.eigenvalues(q)));
      x(p, q) /= denom;
    }
  }
  const ComplexMatrix t_pq = sp.eigenvectors * x * sq.eigenvectors.adjoint();
  ComplexMatrix t = b * t_pq * bq.adjoint();
  t -= ComplexMatrix(t.adjoint().eval());

  // recheck the defining equation against the supplied blocks
  const ComplexMatrix hp_full = b * hp.matrix * b.adjoint();
  const ComplexMatrix hq_full = bq * hq.matrix * bq.adjoint();
  const ComplexMatrix pvq_full = b * vpq * bq.adjoint();
  const double residual = operator_norm(ComplexMatrix(t * hq_full - hp_full * t + pvq_full));
  const double norm_v = operator_norm(HermitianOperator(v));
  if (residual > 1e-10 * std::max(norm_v, kAbsFloor))
    fail(errc::non_convergence, "solve_sylvester: residual " + std::to_string(residual) + " exceeds tolerance");
  return t;
}

/// Exact remainder e^T H e^{-T} - H1.
inline ComplexMatrix v_prime_exact(const HermitianOperator& h, const HermitianOperator& h1, const ComplexMatrix& t) {
  const ComplexMatrix s = exp_antihermitian(t);
  return s * h.matrix * s.adjoint() - h1.matrix;
}

/// Partial series sum_{n=1}^{N} n/(n+1)! ad_T^n V_off.
inline ComplexMatrix v_prime_series(const ComplexMatrix& t, const ComplexMatrix& v_off, int order) {
  if (order < 1) fail(errc::invalid_argument, "v_prime_series: order must be >= 1");
  ComplexMatrix sum = ComplexMatrix::Zero(t.rows(), t.cols());
  ComplexMatrix nested = v_off;
  double factorial = 1.0;  // (n+1)! running value
  for (int n = 1; n <= order; ++n) {
    nested = commutator(t, nested);
    factorial *= (n + 1);
    sum += (n / factorial) * nested;
  }
  return sum;
}

/// Full transformation with norms and the two bound readings attached.
inline SwtResult perform_swt(const HermitianOperator& h, const HermitianOperator& h1,
                             const banding::BandPartition& part, const banding::GapCertificate& gap) {
  SwtResult out;
  out.generator = solve_sylvester(h1, part);
  out.rotation = exp_antihermitian(out.generator);
  out.v_prime = out.rotation * h.matrix * out.rotation.adjoint() - h1.matrix;
  out.norm_t = operator_norm(out.generator);
  out.norm_v_prime = operator_norm(out.v_prime);
  const ComplexMatrix v = part.blocks->v_diag + part.blocks->v_off;
  const ComplexMatrix vpq = part.isometry_p.adjoint() * v * part.isometry_q;
  out.bound_t = operator_norm(vpq) / gap.delta;
  out.bound_v_prime = out.norm_t * operator_norm(HermitianOperator(v));
  return out;
}

/// ||T|| <= ||PVQ|| / Delta (exact whenever the block gap is positive).
inline Certificate certify_generator(const SwtResult& swt, const banding::GapCertificate& gap) {
  (void)gap;
  Certificate c;
  c.lhs = swt.norm_t;
  c.rhs = swt.bound_t;
  c.holds = c.lhs <= c.rhs + 1e-9;
  return c;
}

/// ||V'|| <= ||T|| ||V|| (1 + c ||V|| / d0) in the large-gap regime
/// d0 >= 10 ||V||; outside the regime the check is not applicable and throws.
inline Certificate certify_remainder(const SwtResult& swt, double delta0, double norm_v, double slack_c = 4.0) {
  if (delta0 < 10.0 * norm_v)
    fail(errc::regime_violation,
         "certify_remainder: asymptotic bound needs delta0 >= 10 ||V|| (delta0 = " + std::to_string(delta0) +
             ", ||V|| = " + std::to_string(norm_v) + ")");
  Certificate c;
  c.lhs = swt.norm_v_prime;
  c.rhs = swt.norm_t * norm_v * (1.0 + slack_c * norm_v / delta0);
  c.holds = c.lhs <= c.rhs;
  return c;
}

}  // namespace gapbound::swt
