#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "gapbound/banding.hpp"
#include "gapbound/linalg.hpp"
#include "gapbound/rng.hpp"

namespace gapbound::models {

// Local qubit basis is ordered (|g>, |e>) with sigma_z |e> = +|e>, so the
// matrices below are the Pauli operators expressed in that ordering.
inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, 1), Complex(0, -1), 0;
  return m;
}
inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}
inline ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

/// Operator supported on an ordered set of sites of a chain.
struct LocalTerm {
  std::vector<int> support;  // 1-based site indices, ascending
  ComplexMatrix op;          // dimension (local_dim)^|support|
  std::string label;
};

/// Chain model as a sum of local terms, H0 commuting by declaration.
struct LatticeModel {
  int length = 0;
  int local_dim = 2;
  std::vector<LocalTerm> h0_terms;
  std::vector<LocalTerm> v_terms;
};

struct ModelMeta {
  std::string name;
  double delta0 = 0.0;
  double omega = 0.0;
  double gap_ratio = 0.0;
  std::uint64_t seed = 0;
  int length = 0;
  int n_bands = 0;
  int levels_per_band = 0;
  double norm_v = 0.0;
  double norm_v_star = -1.0;  // < 0 when the model has no local-term structure
  double measured_gap = 0.0;
};

/// A concrete (H0, V, O) triple with a band selection and parameter record.
/// ||O|| = 1 is guaranteed by every builder.
struct ModelInstance {
  HermitianOperator h0;
  HermitianOperator v;
  ComplexMatrix observable;
  banding::BandSelector band;
  ModelMeta meta;
  /// When nonempty: isometry Y with O = 1 - 2 Y Y^dag (Hermitian involution
  /// observable), enabling the reduced-rank evolution path in `dynamics`.
  ComplexMatrix obs_minus_isometry;
};

/// Driven two-level atom: H0 = (d0/2) sz, V = (w/2) sx, band = ground level,
/// O = sx.
inline ModelInstance build_two_level(double delta0, double omega) {
  if (delta0 <= 0 || omega <= 0) fail(errc::invalid_argument, "build_two_level: parameters must be positive");
  ModelInstance m;
  m.h0 = HermitianOperator(ComplexMatrix(delta0 / 2.0 * pauli_z()));
  m.v = HermitianOperator(ComplexMatrix(omega / 2.0 * pauli_x()));
  m.observable = pauli_x();
  m.band = banding::BandSelector::index_range(0, 0);
  m.meta.name = "two_level";
  m.meta.delta0 = delta0;
  m.meta.omega = omega;
  m.meta.norm_v = omega / 2.0;
  m.meta.norm_v_star = omega / 2.0;
  m.meta.measured_gap = delta0;
  return m;
}

/// Two atoms, one driven: H0 = (d0/2)(sz1 + sz2), V = (w/2) sx1, band = the
/// doubly degenerate middle level, O = (sx1 sx2 + sy1 sy2)/2.
inline ModelInstance build_four_level(double delta0, double omega) {
  if (delta0 <= 0 || omega <= 0) fail(errc::invalid_argument, "build_four_level: parameters must be positive");
  const ComplexMatrix sz = pauli_z(), sx = pauli_x(), sy = pauli_y(), id = identity2();
  ModelInstance m;
  m.h0 = HermitianOperator(ComplexMatrix(delta0 / 2.0 * (kron(sz, id) + kron(id, sz))));
  m.v = HermitianOperator(ComplexMatrix(omega / 2.0 * kron(sx, id)));
  m.observable = (kron(sx, sx) + kron(sy, sy)) / 2.0;
  m.band = banding::BandSelector::index_range(1, 2);
  m.meta.name = "four_level";
  m.meta.delta0 = delta0;
  m.meta.omega = omega;
  m.meta.norm_v = omega / 2.0;
  m.meta.norm_v_star = omega / 2.0;
  m.meta.measured_gap = delta0;
  return m;
}

/// Random multi-band model: diagonal H0 with `n_bands` bands of
/// `levels_per_band` levels each, band centers spaced gap_ratio + w apart
/// (w = 1, in units of ||V||), levels uniform within +-w/2 of the center.
/// V and O are unit-norm GUE samples; the band is the middle one. All draws
/// are deterministic in the seed.
inline ModelInstance build_random_banded(std::uint64_t seed, int n_bands, int levels_per_band, double gap_ratio) {
  if (n_bands < 2) fail(errc::invalid_argument, "build_random_banded: need at least 2 bands");
  if (levels_per_band < 1) fail(errc::invalid_argument, "build_random_banded: need at least 1 level per band");
  if (gap_ratio <= 2.0) fail(errc::invalid_argument, "build_random_banded: gap_ratio must exceed 2");

  const double w = 1.0;
  const int dim = n_bands * levels_per_band;
  Rng rng(seed);

  std::vector<std::vector<double>> bands(n_bands);
  for (int k = 0; k < n_bands; ++k) {
    const double center = k * (gap_ratio + w);
    bands[k].resize(levels_per_band);
    for (int l = 0; l < levels_per_band; ++l) bands[k][l] = rng.uniform(center - w / 2.0, center + w / 2.0);
    std::sort(bands[k].begin(), bands[k].end());
  }
  for (int k = 0; k + 1 < n_bands; ++k)
    if (bands[k].back() >= bands[k + 1].front())
      fail(errc::band_overlap, "build_random_banded: sampled bands overlap");

  ComplexMatrix h0 = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < n_bands; ++k)
    for (int l = 0; l < levels_per_band; ++l) h0(k * levels_per_band + l, k * levels_per_band + l) = bands[k][l];

  ComplexMatrix v = rng.gue(dim);
  v /= operator_norm(HermitianOperator(v));
  ComplexMatrix o = rng.gue(dim);
  o /= operator_norm(HermitianOperator(o));

  const int mid = n_bands / 2;
  const double du = bands[mid + 1 < n_bands ? mid + 1 : mid].front() - bands[mid].back();
  const double dd = bands[mid].front() - bands[mid - 1].back();

  ModelInstance m;
  m.h0 = HermitianOperator(std::move(h0));
  m.v = HermitianOperator(std::move(v));
  m.observable = std::move(o);
  m.band = banding::BandSelector::index_range(mid * levels_per_band, (mid + 1) * levels_per_band - 1);
  m.meta.name = "random_banded";
  m.meta.seed = seed;
  m.meta.n_bands = n_bands;
  m.meta.levels_per_band = levels_per_band;
  m.meta.gap_ratio = gap_ratio;
  m.meta.norm_v = 1.0;
  m.meta.measured_gap = std::min(du, dd);
  m.meta.delta0 = m.meta.measured_gap;
  return m;
}

/// max_j sum over terms touching site j of ||term||.
inline double local_interaction_strength(const std::vector<LocalTerm>& terms, int length) {
  std::vector<double> per_site(length + 1, 0.0);
  for (const auto& term : terms) {
    const double norm = operator_norm(term.op);
    for (int site : term.support) {
      if (site < 1 || site > length) fail(errc::invalid_argument, "local_interaction_strength: support outside lattice");
      per_site[site] += norm;
    }
  }
  double best = 0.0;
  for (int j = 1; j <= length; ++j) best = std::max(best, per_site[j]);
  return best;
}

/// Embeds a local term onto an ordered union of sites (for pairwise checks).
inline ComplexMatrix embed_on(const LocalTerm& term, const std::vector<int>& sites) {
  const int k = static_cast<int>(sites.size());
  const int dim = 1 << k;
  std::vector<int> term_pos;  // positions (within `sites`) covered by the term
  for (int s : term.support) {
    auto it = std::find(sites.begin(), sites.end(), s);
    if (it == sites.end()) fail(errc::invalid_argument, "embed_on: union does not cover the term support");
    term_pos.push_back(static_cast<int>(it - sites.begin()));
  }
  const int tdim = 1 << term.support.size();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int tb = 0; tb < tdim; ++tb) {
      // replace the term-covered bits of `a` by configuration tb
      int b = a;
      int ta = 0;
      for (std::size_t q = 0; q < term_pos.size(); ++q) {
        const int bit = k - 1 - term_pos[q];
        ta = (ta << 1) | ((a >> bit) & 1);
        b &= ~(1 << bit);
        const int tbit = static_cast<int>(term_pos.size()) - 1 - static_cast<int>(q);
        b |= ((tb >> tbit) & 1) << bit;
      }
      out(b, a) += term.op(tb, ta);
    }
  }
  return out;
}

/// Numerically verifies that all H0 terms pairwise commute (defect <= 1e-10).
inline void verify_commuting_h0(const LatticeModel& model) {
  for (std::size_t i = 0; i < model.h0_terms.size(); ++i) {
    for (std::size_t j = i + 1; j < model.h0_terms.size(); ++j) {
      const auto& a = model.h0_terms[i];
      const auto& b = model.h0_terms[j];
      std::vector<int> sites = a.support;
      sites.insert(sites.end(), b.support.begin(), b.support.end());
      std::sort(sites.begin(), sites.end());
      sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
      if (sites.size() == a.support.size() + b.support.size()) continue;  // disjoint supports commute
      const ComplexMatrix ea = embed_on(a, sites);
      const ComplexMatrix eb = embed_on(b, sites);
      if (commutator(ea, eb).norm() > 1e-10)
        fail(errc::invalid_argument, "H0 terms " + a.label + " and " + b.label + " do not commute");
    }
  }
}

constexpr int kMaxChainLength = 14;  // dense-diagonalization budget

namespace detail {

// Site j of an L-site chain maps to bit (L - j); bit 1 = excited.
inline int adjacent_excited_pairs(std::uint32_t state) { return std::popcount(state & (state >> 1)); }

}  // namespace detail

/// Diagonal 0/1 projector onto configurations with no adjacent excitations.
inline ComplexMatrix pxp_constraint_projector(int length) {
  if (length < 1 || length > kMaxChainLength)
    fail(errc::dimension_budget_exceeded, "pxp_constraint_projector: L out of range");
  const std::uint32_t dim = 1u << length;
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (std::uint32_t s = 0; s < dim; ++s)
    if (detail::adjacent_excited_pairs(s) == 0) p(s, s) = 1.0;
  return p;
}

struct PxpModel {
  ModelInstance instance;
  LatticeModel lattice;
};

/// Parent model of the PXP chain with open boundaries:
/// H0 = (d0/4) sum_j (sz_j + 1)(sz_{j+1} + 1), V = (w/2) sum_j sx_j,
/// O = sy on site 1, band = the zero-eigenvalue subspace of H0.
inline PxpModel build_pxp_parent(int length, double delta0, double omega) {
  if (length < 2) fail(errc::invalid_argument, "build_pxp_parent: need L >= 2");
  if (length > kMaxChainLength)
    fail(errc::dimension_budget_exceeded, "build_pxp_parent: L = " + std::to_string(length) + " exceeds the dense budget");
  if (delta0 <= 0 || omega <= 0) fail(errc::invalid_argument, "build_pxp_parent: parameters must be positive");

  const std::uint32_t dim = 1u << length;
  ComplexMatrix h0 = ComplexMatrix::Zero(dim, dim);
  for (std::uint32_t s = 0; s < dim; ++s) h0(s, s) = delta0 * detail::adjacent_excited_pairs(s);

  ComplexMatrix v = ComplexMatrix::Zero(dim, dim);
  for (int j = 1; j <= length; ++j) {
    const std::uint32_t flip = 1u << (length - j);
    for (std::uint32_t s = 0; s < dim; ++s) v(s ^ flip, s) += omega / 2.0;
  }

  // sy on site 1: <e|sy|g> = -i, <g|sy|e> = +i.
  ComplexMatrix o = ComplexMatrix::Zero(dim, dim);
  const std::uint32_t msb = 1u << (length - 1);
  for (std::uint32_t s = 0; s < dim; ++s) {
    if ((s & msb) == 0)
      o(s | msb, s) = Complex(0, -1);
    else
      o(s & ~msb, s) = Complex(0, 1);
  }

  // sy = 1 - 2 |m><m| with |m> = (|g> + i|e>)/sqrt(2); lifted to the chain the
  // minus eigenspace is spanned by |m> (x) (rest), one column per rest state.
  const std::uint32_t half = dim / 2;
  ComplexMatrix y = ComplexMatrix::Zero(dim, half);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::uint32_t c = 0; c < half; ++c) {
    y(c, c) = inv_sqrt2;
    y(c + half, c) = Complex(0, inv_sqrt2);
  }

  PxpModel out;
  out.instance.h0 = HermitianOperator(std::move(h0));
  out.instance.v = HermitianOperator(std::move(v));
  out.instance.observable = std::move(o);
  out.instance.obs_minus_isometry = std::move(y);
  out.instance.band = banding::BandSelector::zero_subspace();
  out.instance.meta.name = "pxp";
  out.instance.meta.delta0 = delta0;
  out.instance.meta.omega = omega;
  out.instance.meta.length = length;
  // sum of commuting single-site sx terms: ||V|| = L w/2 exactly
  out.instance.meta.norm_v = length * omega / 2.0;
  out.instance.meta.norm_v_star = omega / 2.0;
  out.instance.meta.measured_gap = delta0;

  const ComplexMatrix sz = pauli_z(), sx = pauli_x(), id = identity2();
  const ComplexMatrix pair_term = delta0 / 4.0 * kron(sz + id, sz + id);
  out.lattice.length = length;
  for (int j = 1; j < length; ++j)
    out.lattice.h0_terms.push_back({{j, j + 1}, pair_term, "nn_excitation_penalty"});
  for (int j = 1; j <= length; ++j) out.lattice.v_terms.push_back({{j}, omega / 2.0 * sx, "drive"});
  verify_commuting_h0(out.lattice);
  return out;
}

}  // namespace gapbound::models
