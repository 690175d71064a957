#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gapbound/linalg.hpp"

namespace gapbound::banding {

enum class BandKind { index_range, energy_window, zero_subspace };

/// Band selection recipe; `ilo/ihi` for index_range, `elo/ehi` for energy_window.
struct BandSelector {
  BandKind kind = BandKind::index_range;
  int ilo = 0, ihi = 0;
  double elo = 0.0, ehi = 0.0;

  static BandSelector index_range(int lo, int hi) { return {BandKind::index_range, lo, hi, 0, 0}; }
  static BandSelector energy_window(double lo, double hi) { return {BandKind::energy_window, 0, 0, lo, hi}; }
  static BandSelector zero_subspace() { return {BandKind::zero_subspace, 0, 0, 0, 0}; }
};

/// Block decomposition of a perturbation V relative to a band projector:
/// V = v_p + v_q + v_off with v_diag = v_p + v_q.
struct VBlocks {
  ComplexMatrix v_p, v_q, v_off, v_diag;
};

/// An isolated band of a spectral decomposition: eigenindex run, the band /
/// complement isometries, the gaps to the neighbouring spectrum, and (when a
/// perturbation is supplied) its block decomposition.
struct BandPartition {
  std::vector<int> band_indices;  // ascending contiguous run into the sorted spectrum
  ComplexMatrix isometry_p;       // dim x k, k = band dimension
  ComplexMatrix isometry_q;       // dim x (dim - k)
  double delta_u = 0.0;           // gap to the spectrum above (inf at the edge)
  double delta_d = 0.0;           // gap to the spectrum below (inf at the edge)
  double delta0 = 0.0;            // min(delta_u, delta_d)
  std::optional<VBlocks> blocks;

  Eigen::Index dim() const { return isometry_p.rows(); }
  Eigen::Index band_dim() const { return isometry_p.cols(); }

  ComplexMatrix projector_p() const { return isometry_p * isometry_p.adjoint(); }
  ComplexMatrix projector_q() const { return isometry_q * isometry_q.adjoint(); }

  /// P M P compressed to the band block, B^dag M B.
  ComplexMatrix compress(const ComplexMatrix& m) const { return isometry_p.adjoint() * m * isometry_p; }
};

/// Gap between the spectra of the P and Q blocks with its Weyl lower bound.
struct GapCertificate {
  double delta = 0.0;
  double weyl_lower = 0.0;  // delta0 - 2 ||V||
  bool satisfied = false;
};

/// Resolves a selector to a set of eigenindices (ascending, contiguous).
inline std::vector<int> detect_band(const SpectralDecomposition& spec, const BandSelector& sel) {
  const int n = static_cast<int>(spec.dim());
  std::vector<int> idx;
  switch (sel.kind) {
    case BandKind::index_range: {
      if (sel.ilo < 0 || sel.ihi >= n || sel.ilo > sel.ihi)
        fail(errc::invalid_argument, "detect_band: index range [" + std::to_string(sel.ilo) + "," +
                                         std::to_string(sel.ihi) + "] invalid for dim " + std::to_string(n));
      for (int i = sel.ilo; i <= sel.ihi; ++i) idx.push_back(i);
      break;
    }
    case BandKind::energy_window: {
      for (int i = 0; i < n; ++i)
        if (spec.eigenvalues(i) >= sel.elo && spec.eigenvalues(i) <= sel.ehi) idx.push_back(i);
      break;
    }
    case BandKind::zero_subspace: {
      const double tol = 1e-9 * std::max(spec.spectral_radius(), kAbsFloor);
      for (int i = 0; i < n; ++i)
        if (std::abs(spec.eigenvalues(i)) <= tol) idx.push_back(i);
      break;
    }
  }
  if (idx.empty()) fail(errc::empty_band, "detect_band: selector matches no eigenvalue");
  // Isolation: the run must have strictly positive gaps to both neighbours.
  const double tol = 1e-9 * std::max(spec.spectral_radius(), kAbsFloor);
  if (idx.front() > 0 && spec.eigenvalues(idx.front()) - spec.eigenvalues(idx.front() - 1) <= tol)
    fail(errc::not_isolated, "detect_band: band touches the spectrum below");
  if (idx.back() + 1 < n && spec.eigenvalues(idx.back() + 1) - spec.eigenvalues(idx.back()) <= tol)
    fail(errc::not_isolated, "detect_band: band touches the spectrum above");
  return idx;
}

/// Builds the band partition for a contiguous eigenindex run. With a supplied
/// V the block decomposition v_p + v_q + v_off = V (exact by construction) is
/// attached.
inline BandPartition band_partition(const SpectralDecomposition& spec, const std::vector<int>& band_indices,
                                    const ComplexMatrix* v = nullptr) {
  const int n = static_cast<int>(spec.dim());
  if (band_indices.empty()) fail(errc::empty_band, "band_partition: empty band");
  for (std::size_t i = 0; i < band_indices.size(); ++i) {
    if (band_indices[i] < 0 || band_indices[i] >= n)
      fail(errc::invalid_argument, "band_partition: eigenindex out of range");
    if (i > 0 && band_indices[i] != band_indices[i - 1] + 1)
      fail(errc::invalid_argument, "band_partition: band indices must form a contiguous ascending run");
  }
  const int lo = band_indices.front(), hi = band_indices.back();
  const int k = hi - lo + 1;

  const double tol = 1e-9 * std::max(spec.spectral_radius(), kAbsFloor);
  const double inf = std::numeric_limits<double>::infinity();
  BandPartition part;
  part.band_indices = band_indices;
  part.delta_d = (lo == 0) ? inf : spec.eigenvalues(lo) - spec.eigenvalues(lo - 1);
  part.delta_u = (hi == n - 1) ? inf : spec.eigenvalues(hi + 1) - spec.eigenvalues(hi);
  if (part.delta_d <= tol || part.delta_u <= tol)
    fail(errc::not_isolated, "band_partition: an outside eigenvalue lies at the band edge");
  part.delta0 = std::min(part.delta_u, part.delta_d);

  part.isometry_p = spec.eigenvectors.middleCols(lo, k);
  part.isometry_q.resize(n, n - k);
  part.isometry_q << spec.eigenvectors.leftCols(lo), spec.eigenvectors.rightCols(n - 1 - hi);

  if (v != nullptr) {
    if (v->rows() != n || v->cols() != n) fail(errc::dimension_mismatch, "band_partition: V dimension mismatch");
    VBlocks b;
    b.v_p = part.isometry_p * (part.isometry_p.adjoint() * (*v) * part.isometry_p) * part.isometry_p.adjoint();
    b.v_q = part.isometry_q * (part.isometry_q.adjoint() * (*v) * part.isometry_q) * part.isometry_q.adjoint();
    b.v_diag = b.v_p + b.v_q;
    b.v_off = *v - b.v_diag;
    part.blocks = std::move(b);
  }
  return part;
}

inline BandPartition band_partition(const SpectralDecomposition& spec, const BandSelector& sel,
                                    const ComplexMatrix* v = nullptr) {
  return band_partition(spec, detect_band(spec, sel), v);
}

/// P H P as a full-space operator (zero action on the complement).
inline HermitianOperator projected_hamiltonian(const HermitianOperator& h, const ComplexMatrix& p) {
  if (p.rows() != h.dim() || p.cols() != h.dim())
    fail(errc::dimension_mismatch, "projected_hamiltonian: projector dimension mismatch");
  return HermitianOperator(ComplexMatrix(p * h.matrix * p));
}

/// Gap between the P-block and Q-block spectra of a block-diagonal H1,
/// certified against the Weyl lower bound delta0 - 2 ||V||.
inline GapCertificate block_spectral_gap(const HermitianOperator& h1, const BandPartition& part, double norm_v) {
  const ComplexMatrix off = part.isometry_p.adjoint() * h1.matrix * part.isometry_q;
  const double scale = std::max(h1.matrix.norm(), kAbsFloor);
  if (off.norm() > 1e-8 * scale)
    fail(errc::not_block_diagonal, "block_spectral_gap: H1 couples the band to its complement");

  HermitianOperator hp(ComplexMatrix(part.isometry_p.adjoint() * h1.matrix * part.isometry_p));
  HermitianOperator hq(ComplexMatrix(part.isometry_q.adjoint() * h1.matrix * part.isometry_q));
  const RealVector ep = eig_hermitian(hp).eigenvalues;
  const RealVector eq = eig_hermitian(hq).eigenvalues;

  double delta = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ep.size(); ++i) {
    // eq is sorted: nearest element to ep(i) bounds the pairwise minimum
    const double* first = eq.data();
    const double* last = eq.data() + eq.size();
    const double* it = std::lower_bound(first, last, ep(i));
    if (it != last) delta = std::min(delta, *it - ep(i));
    if (it != first) delta = std::min(delta, ep(i) - *(it - 1));
  }

  GapCertificate cert;
  cert.delta = delta;
  cert.weyl_lower = part.delta0 - 2.0 * norm_v;
  cert.satisfied = delta >= cert.weyl_lower - 1e-9;
  return cert;
}

}  // namespace gapbound::banding
