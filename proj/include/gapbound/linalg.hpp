#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <lapacke.h>
#include <limits>
#include <numeric>
#include <vector>

#include "gapbound/errors.hpp"

namespace gapbound {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

constexpr double kAbsFloor = 1e-14;  // avoids zero-matrix division in relative tolerances

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline void require_square_finite(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(errc::dimension_mismatch, std::string(who) + ": matrix must be square and nonempty");
  if (!all_finite(m)) fail(errc::non_finite, std::string(who) + ": non-finite entries");
}

/// Frobenius norm of M - M^dag; an upper bound on the operator-norm defect.
inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

/// Dense Hermitian operator, certified at construction.
///
/// The certification check uses Frobenius norms, which dominate operator
/// norms, so the recorded defect upper-bounds the operator-norm defect and
/// the admission test implies ||M - M^dag|| <= 1e-12 * dim * ||M||.
struct HermitianOperator {
  ComplexMatrix matrix;
  double defect = 0.0;

  HermitianOperator() = default;

  explicit HermitianOperator(ComplexMatrix m) : matrix(std::move(m)) {
    require_square_finite(matrix, "HermitianOperator");
    defect = hermiticity_defect(matrix);
    const double dim = static_cast<double>(matrix.rows());
    const double scale = matrix.norm();
    if (defect > 1e-12 * std::sqrt(dim) * scale + kAbsFloor)
      fail(errc::not_hermitian, "hermiticity defect " + std::to_string(defect) +
                                    " exceeds tolerance for dim " + std::to_string(matrix.rows()));
  }

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Eigenvalues ascending, eigenvector columns orthonormal. Defects are
/// Frobenius-norm residuals recorded at construction: ||M U - U diag(w)||_F
/// and ||U^dag U - 1||_F.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
  double reconstruction_defect = 0.0;
  double unitarity_defect = 0.0;

  Eigen::Index dim() const { return eigenvalues.size(); }
  double spectral_radius() const {
    return eigenvalues.size() == 0 ? 0.0 : std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(eigenvalues.size() - 1)));
  }
};

namespace detail {

inline bool is_exactly_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

inline SpectralDecomposition eig_diagonal(const ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return m(a, a).real() < m(b, b).real();
  });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = m(order[k], order[k]).real();
    out.eigenvectors(order[k], k) = 1.0;
  }
  return out;  // permutation basis is exact; defects are zero
}

}  // namespace detail

/// Full Hermitian eigendecomposition (LAPACK zheevd), ascending eigenvalues.
/// Exactly diagonal input short-circuits to a sorted permutation basis.
inline SpectralDecomposition eig_hermitian(const HermitianOperator& op) {
  const ComplexMatrix& m = op.matrix;
  if (detail::is_exactly_diagonal(m)) return detail::eig_diagonal(m);

  const lapack_int n = static_cast<lapack_int>(m.rows());
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  // zheevd reads only the lower triangle; symmetrize so the certified-defect
  // part never biases the result.
  ComplexMatrix a = (m + m.adjoint()) / 2.0;
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.eigenvalues.data());
  if (info != 0)
    fail(errc::non_convergence, "zheevd failed with info=" + std::to_string(info) + " at dim " + std::to_string(n));
  out.eigenvectors = std::move(a);

  out.reconstruction_defect =
      (m * out.eigenvectors - out.eigenvectors * out.eigenvalues.cast<Complex>().asDiagonal()).norm();
  out.unitarity_defect = (out.eigenvectors.adjoint() * out.eigenvectors - ComplexMatrix::Identity(n, n)).norm();

  const double scale = std::max(m.norm(), kAbsFloor);
  if (out.reconstruction_defect > 1e-10 * scale || out.unitarity_defect > 1e-10 * std::sqrt(static_cast<double>(n)))
    fail(errc::non_convergence, "eigendecomposition residual out of tolerance at dim " + std::to_string(n));
  return out;
}

/// Largest singular value (LAPACK zgesdd, values only).
inline double operator_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (!all_finite(m)) fail(errc::non_finite, "operator_norm: non-finite entries");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  ComplexMatrix a = m;  // zgesdd destroys its input
  RealVector s(std::min(rows, cols));
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows, s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) fail(errc::non_convergence, "zgesdd failed with info=" + std::to_string(info));
  return s(0);
}

/// Largest |eigenvalue| for certified-Hermitian input (LAPACK zheevd, values only).
inline double operator_norm(const HermitianOperator& op) {
  if (detail::is_exactly_diagonal(op.matrix)) return op.matrix.diagonal().cwiseAbs().maxCoeff();
  const lapack_int n = static_cast<lapack_int>(op.dim());
  ComplexMatrix a = (op.matrix + op.matrix.adjoint()) / 2.0;
  RealVector w(n);
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
  if (info != 0) fail(errc::non_convergence, "zheevd(N) failed with info=" + std::to_string(info));
  return std::max(std::abs(w(0)), std::abs(w(n - 1)));
}

/// Unit-modulus phases e^{-i w t} for a spectrum w.
inline ComplexVector evolution_phases(const RealVector& eigenvalues, double t) {
  ComplexVector d(eigenvalues.size());
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const double phi = -eigenvalues(k) * t;
    d(k) = Complex(std::cos(phi), std::sin(phi));
  }
  return d;
}

/// e^{-iHt} from the spectral decomposition of H.
inline ComplexMatrix propagator(const SpectralDecomposition& spec, double t) {
  const ComplexVector d = evolution_phases(spec.eigenvalues, t);
  return (spec.eigenvectors * d.asDiagonal()) * spec.eigenvectors.adjoint();
}

/// Heisenberg conjugation U O U^dag.
inline ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& o) {
  if (u.rows() != u.cols() || o.rows() != o.cols() || u.rows() != o.rows())
    fail(errc::dimension_mismatch, "conjugate: dimensions do not match");
  return u * o * u.adjoint();
}

/// Unitary e^T for anti-Hermitian T, computed spectrally via the Hermitian iT.
inline ComplexMatrix exp_antihermitian(const ComplexMatrix& t) {
  require_square_finite(t, "exp_antihermitian");
  const double ah_defect = (t + t.adjoint()).norm();
  if (ah_defect > 1e-10 * std::max(1.0, t.norm()))
    fail(errc::not_anti_hermitian, "||T + T^dag|| = " + std::to_string(ah_defect));
  // T = -i (iT) with iT Hermitian, so e^T = U e^{-i lambda} U^dag.
  HermitianOperator h(ComplexMatrix(Complex(0.0, 1.0) * t));
  SpectralDecomposition spec = eig_hermitian(h);
  return propagator(spec, 1.0);
}

/// [A, B] = AB - BA.
inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    fail(errc::dimension_mismatch, "commutator: dimensions do not match");
  return a * b - b * a;
}

}  // namespace gapbound
