// SPDX-License-Identifier: Apache-2.0
//
// Dense complex kernels shared by every iteration: orthonormalization,
// principal angles, small eigendecompositions, shifted solves and small
// Sylvester solves. All kernels are templated on the real scalar so the same
// code runs in double and in extended precision.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tsgrqi/types.hpp"

namespace tsgrqi {

// ---------------------------------------------------------------------------
// Norms and small helpers
// ---------------------------------------------------------------------------

template <class Derived>
auto spectral_norm(const Eigen::MatrixBase<Derived>& m)
{
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (m.size() == 0) return Real(0);
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues()(0);
}

template <class Derived>
auto condition_number(const Eigen::MatrixBase<Derived>& m)
{
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  const auto& s = svd.singularValues();
  const Real smin = s(s.size() - 1);
  if (smin == Real(0)) return std::numeric_limits<Real>::infinity();
  return s(0) / smin;
}

template <class Derived>
auto smallest_singular_value(const Eigen::MatrixBase<Derived>& m)
{
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

template <class Real>
CMatrix<Real> identity(Index n)
{
  return CMatrix<Real>::Identity(n, n);
}

// ---------------------------------------------------------------------------
// Subspace construction
// ---------------------------------------------------------------------------

/// Economy-size QR orthonormalization. Throws RankDeficient when
/// sigma_min(Z) <= n p 1e-15 sigma_max(Z) or Z has nonfinite entries.
template <class Real>
Subspace<Real> orthonormalize(const CMatrix<Real>& z)
{
  const Index n = z.rows();
  const Index p = z.cols();
  TSGRQI_REQUIRE(p >= 1 && n >= p, ErrorCode::DimensionMismatch,
                 "orthonormalize expects n >= p >= 1, got " + std::to_string(n) + "x" +
                     std::to_string(p));
  TSGRQI_REQUIRE(z.allFinite(), ErrorCode::RankDeficient, "nonfinite entries in basis");

  Eigen::HouseholderQR<CMatrix<Real>> qr(z);
  const CMatrix<Real> r = qr.matrixQR().topRows(p).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<CMatrix<Real>> svd(r);
  const auto& s = svd.singularValues();
  const Real threshold = Real(n) * Real(p) * Real(1e-15) * s(0);
  TSGRQI_REQUIRE(s(0) > Real(0) && s(p - 1) > threshold, ErrorCode::RankDeficient,
                 "columns are numerically dependent");

  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(n, p);
  return Subspace<Real>(std::move(q), typename Subspace<Real>::Trusted{});
}

template <class Real>
Subspace<Real> Subspace<Real>::adopt(CMatrix<Real> basis)
{
  TSGRQI_REQUIRE(basis.cols() >= 1 && basis.rows() >= basis.cols(), ErrorCode::DimensionMismatch,
                 "subspace basis must be n x p with n >= p >= 1");
  const Index p = basis.cols();
  const CMatrix<Real> defect = basis.adjoint() * basis - CMatrix<Real>::Identity(p, p);
  TSGRQI_REQUIRE(spectral_norm(defect) <= Real(1e-12) * std::sqrt(Real(p)),
                 ErrorCode::RankDeficient, "basis is not orthonormal");
  return Subspace(std::move(basis), Trusted{});
}

/// Orthonormal basis of the orthogonal complement of span(Y).
template <class Real>
CMatrix<Real> orthonormal_complement(const Subspace<Real>& y)
{
  const Index n = y.ambient();
  const Index p = y.dim();
  Eigen::HouseholderQR<CMatrix<Real>> qr(y.basis());
  CMatrix<Real> full = qr.householderQ() * CMatrix<Real>::Identity(n, n);
  return full.rightCols(n - p);
}

// ---------------------------------------------------------------------------
// Angles
// ---------------------------------------------------------------------------

/// Largest principal angle between two subspaces of equal dimension.
///
/// The cosine is sigma_min(U^H V) and the sine is ||V - U U^H V||_2. Both are
/// combined through atan2, which keeps full relative accuracy for angles
/// near zero where arccos alone saturates at sqrt(u).
template <class Real>
Real largest_principal_angle(const Subspace<Real>& u, const Subspace<Real>& v)
{
  TSGRQI_REQUIRE(u.ambient() == v.ambient() && u.dim() == v.dim(), ErrorCode::DimensionMismatch,
                 "principal angles need equal ambient dimension and equal p");
  const CMatrix<Real> gram = u.basis().adjoint() * v.basis();
  const Real cosine = smallest_singular_value(gram);
  const CMatrix<Real> residual = v.basis() - u.basis() * gram;
  const Real sine = u.dim() == u.ambient() ? Real(0) : spectral_norm(residual);
  using std::atan2;  // ADL for user-defined Real
  return atan2(sine, cosine);
}

/// Hermitian angle between two nonzero vectors, invariant under complex scaling.
template <class Real>
Real hermitian_angle(const CVector<Real>& x, const CVector<Real>& y)
{
  TSGRQI_REQUIRE(x.size() == y.size(), ErrorCode::DimensionMismatch, "vector sizes differ");
  const Real nx = x.norm();
  const Real ny = y.norm();
  TSGRQI_REQUIRE(nx > Real(0) && ny > Real(0), ErrorCode::ZeroVector,
                 "hermitian angle of a zero vector");
  const CVector<Real> xh = x / nx;
  const CVector<Real> yh = y / ny;
  const std::complex<Real> inner = xh.dot(yh);
  const Real sine = (yh - xh * inner).norm();
  using std::atan2;
  return atan2(sine, Real(std::abs(inner)));
}

/// Angle between span(Y) and span(C Y). Zero exactly when span(Y) is invariant.
template <class Real>
Real residual_angle(const CMatrix<Real>& c, const Subspace<Real>& y)
{
  TSGRQI_REQUIRE(c.rows() == c.cols() && c.cols() == y.ambient(), ErrorCode::DimensionMismatch,
                 "residual angle needs a square matrix matching the subspace");
  const CMatrix<Real> cy = c * y.basis();
  return largest_principal_angle(y, orthonormalize(cy));
}

// ---------------------------------------------------------------------------
// Small eigendecomposition of the block Rayleigh quotient
// ---------------------------------------------------------------------------

template <class Real>
struct BlockShift {
  CMatrix<Real> eigvecs;  ///< W, unit-norm columns
  CVector<Real> shifts;   ///< rho_1..rho_p
  Real cond = Real(1);    ///< 2-norm condition number of W
  bool near_defective = false;
};

struct SmallEigOptions {
  double defective_threshold = 1e8;
  bool strict = false;
};

namespace detail {

template <class Real>
CVector<Real> kernel_direction_2x2(const CMatrix<Real>& r, std::complex<Real> lambda,
                                   Index fallback)
{
  // Two candidate null vectors of R - lambda I, one per row.
  CVector<Real> from_row0(2);
  from_row0 << r(0, 1), lambda - r(0, 0);
  CVector<Real> from_row1(2);
  from_row1 << lambda - r(1, 1), r(1, 0);
  CVector<Real> best = from_row0.norm() >= from_row1.norm() ? from_row0 : from_row1;
  const Real scale = r.cwiseAbs().maxCoeff();
  if (best.norm() <= Real(64) * std::numeric_limits<Real>::epsilon() * scale) {
    best = CVector<Real>::Unit(2, fallback);
  }
  return best.normalized();
}

template <class Real>
void eig_2x2(const CMatrix<Real>& r, CMatrix<Real>& w, CVector<Real>& rho)
{
  using C = std::complex<Real>;
  const C a = r(0, 0), b = r(0, 1), c = r(1, 0), d = r(1, 1);
  const C mean = (a + d) / Real(2);
  const C half_diff = (a - d) / Real(2);
  C disc = std::sqrt(half_diff * half_diff + b * c);
  // Pick the root of larger modulus first, the other from the determinant.
  if (std::real(std::conj(mean) * disc) < Real(0)) disc = -disc;
  const C l1 = mean + disc;
  const C det = a * d - b * c;
  const C l2 = l1 != C(0) ? det / l1 : mean - disc;
  rho.resize(2);
  w.resize(2, 2);
  const Real tiny = Real(64) * std::numeric_limits<Real>::epsilon() * r.cwiseAbs().maxCoeff();
  if (std::abs(b) + std::abs(c) + std::abs(a - d) <= tiny) {
    // Scalar block: every vector is an eigenvector.
    rho << a, d;
    w.setIdentity();
    return;
  }
  rho << l1, l2;
  w.col(0) = kernel_direction_2x2(r, l1, 0);
  w.col(1) = kernel_direction_2x2(r, l2, 1);
}

}  // namespace detail

/// Eigendecomposition R = W diag(rho) W^-1 of a small p x p matrix.
/// Closed-form roots for p <= 2, Eigen's complex QR algorithm otherwise.
template <class Real>
BlockShift<Real> small_eig(const CMatrix<Real>& r, const SmallEigOptions& opts = {})
{
  const Index p = r.rows();
  TSGRQI_REQUIRE(p >= 1 && r.cols() == p, ErrorCode::DimensionMismatch,
                 "small_eig expects a nonempty square matrix");
  TSGRQI_REQUIRE(r.allFinite(), ErrorCode::SolveFailed, "nonfinite block Rayleigh quotient");

  BlockShift<Real> out;
  if (p == 1) {
    out.eigvecs = CMatrix<Real>::Identity(1, 1);
    out.shifts = r.col(0);
  } else if (p == 2) {
    detail::eig_2x2(r, out.eigvecs, out.shifts);
  } else {
    Eigen::ComplexEigenSolver<CMatrix<Real>> es(r, /*computeEigenvectors=*/true);
    TSGRQI_REQUIRE(es.info() == Eigen::Success, ErrorCode::SolveFailed,
                   "eigensolver did not converge");
    out.eigvecs = es.eigenvectors();
    out.eigvecs.colwise().normalize();
    out.shifts = es.eigenvalues();
  }
  out.cond = p == 1 ? Real(1) : condition_number(out.eigvecs);
  out.near_defective = !(out.cond <= Real(opts.defective_threshold));
  if (opts.strict && out.near_defective) {
    detail::raise(ErrorCode::NearDefective,
                  "eigenvector matrix condition number " + std::to_string(double(out.cond)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shifted solves
// ---------------------------------------------------------------------------

/// Fallback perturbation used when a shifted solve is singular:
/// epsilon = scale * u * ||C||_F, with u the unit roundoff of the scalar type.
struct PerturbationPolicy {
  double scale = 1e3;
};

template <class Real>
struct ShiftedSolution {
  CVector<Real> z;
  bool perturbed = false;
};

/// Solves (C - rho I) z = b. If the direct solve produces a nonfinite entry,
/// solves (C - rho I + eps I) z = b instead and flags the result.
template <class Real>
ShiftedSolution<Real> shifted_solve(const CMatrix<Real>& c, std::complex<Real> rho,
                                    const CVector<Real>& b, const PerturbationPolicy& policy = {})
{
  const Index n = c.rows();
  TSGRQI_REQUIRE(c.cols() == n && b.size() == n, ErrorCode::DimensionMismatch,
                 "shifted solve dimensions");
  CMatrix<Real> shifted = c;
  shifted.diagonal().array() -= rho;
  ShiftedSolution<Real> out;
  out.z = Eigen::PartialPivLU<CMatrix<Real>>(shifted).solve(b);
  if (out.z.allFinite()) return out;

  const Real eps = Real(policy.scale) * std::numeric_limits<Real>::epsilon() * c.norm();
  shifted.diagonal().array() += eps;
  out.z = Eigen::PartialPivLU<CMatrix<Real>>(shifted).solve(b);
  out.perturbed = true;
  TSGRQI_REQUIRE(out.z.allFinite(), ErrorCode::SolveFailed,
                 "perturbed shifted solve is still singular");
  return out;
}

/// Solves (A - rho B) z = b, with the shift nudged by
/// eps = scale * u * ||A||_F / ||B||_F when the pencil is singular at rho.
template <class Real>
ShiftedSolution<Real> pencil_shifted_solve(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                           std::complex<Real> rho, const CVector<Real>& rhs,
                                           const PerturbationPolicy& policy = {})
{
  const Index n = a.rows();
  TSGRQI_REQUIRE(a.cols() == n && b.rows() == n && b.cols() == n && rhs.size() == n,
                 ErrorCode::DimensionMismatch, "pencil shifted solve dimensions");
  ShiftedSolution<Real> out;
  out.z = Eigen::PartialPivLU<CMatrix<Real>>(a - rho * b).solve(rhs);
  if (out.z.allFinite()) return out;

  const Real eps = Real(policy.scale) * std::numeric_limits<Real>::epsilon() * a.norm() / b.norm();
  out.z = Eigen::PartialPivLU<CMatrix<Real>>(a - (rho - eps) * b).solve(rhs);
  out.perturbed = true;
  TSGRQI_REQUIRE(out.z.allFinite(), ErrorCode::SingularPencilShift,
                 "perturbed pencil solve is still singular");
  return out;
}

// ---------------------------------------------------------------------------
// Sylvester equation
// ---------------------------------------------------------------------------

/// Solves A X - X B = Q by complex Schur reduction of both coefficients and
/// column-wise triangular substitution. Throws SpectraOverlap when some pair of
/// eigenvalues is closer than 1e-10 (||A|| + ||B||).
template <class Real>
CMatrix<Real> sylvester_solve(const CMatrix<Real>& a, const CMatrix<Real>& b,
                              const CMatrix<Real>& q)
{
  using C = std::complex<Real>;
  const Index p = a.rows();
  const Index m = b.rows();
  TSGRQI_REQUIRE(a.cols() == p && b.cols() == m && q.rows() == p && q.cols() == m,
                 ErrorCode::DimensionMismatch, "sylvester dimensions");

  Eigen::ComplexSchur<CMatrix<Real>> schur_a(a);
  Eigen::ComplexSchur<CMatrix<Real>> schur_b(b);
  TSGRQI_REQUIRE(schur_a.info() == Eigen::Success && schur_b.info() == Eigen::Success,
                 ErrorCode::SolveFailed, "Schur decomposition did not converge");
  const CMatrix<Real>& ta = schur_a.matrixT();
  const CMatrix<Real>& tb = schur_b.matrixT();
  const CMatrix<Real>& ua = schur_a.matrixU();
  const CMatrix<Real>& ub = schur_b.matrixU();

  const Real scale = spectral_norm(a) + spectral_norm(b);
  Real gap = std::numeric_limits<Real>::infinity();
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < m; ++j) gap = std::min(gap, std::abs(ta(i, i) - tb(j, j)));
  TSGRQI_REQUIRE(gap > Real(1e-10) * scale, ErrorCode::SpectraOverlap,
                 "coefficient spectra are not disjoint");

  // Ta Y - Y Tb = Ua^H Q Ub with Y = Ua^H X Ub, solved one column at a time.
  CMatrix<Real> y = ua.adjoint() * q * ub;
  for (Index j = 0; j < m; ++j) {
    CVector<Real> rhs = y.col(j);
    for (Index k = 0; k < j; ++k) rhs += tb(k, j) * y.col(k);
    CMatrix<Real> shifted = ta;
    shifted.diagonal().array() -= C(tb(j, j));
    y.col(j) = shifted.template triangularView<Eigen::Upper>().solve(rhs);
  }
  return ua * y * ub.adjoint();
}

}  // namespace tsgrqi
