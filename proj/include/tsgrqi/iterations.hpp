// SPDX-License-Identifier: Apache-2.0
//
// Rayleigh-quotient-type iteration steps (RQI, GRQI, two-sided RQI, 2sGRQI)
// and the Newton-Chatelin baseline, plus the driver that runs any of them.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsgrqi/linalg.hpp"

namespace tsgrqi {

struct StepConfig {
  int max_iters = 50;
  double angle_tol = 1e-12;
  PerturbationPolicy perturbation{};
  bool strict_defective = false;
  bool strict_structure = false;
  /// When false the driver runs exactly max_iters steps regardless of the
  /// stopping test (used for the fixed-length reproduction runs).
  bool stop_on_convergence = true;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-step bookkeeping reported alongside the new iterate.
struct StepDiagnostics {
  bool perturbed = false;
  double shift_cond = 1.0;
  bool near_defective = false;
  bool terminal = false;  ///< an exact eigenvector was hit (vector methods)
};

template <class Real>
struct PairStep {
  SubspacePair<Real> next;
  StepDiagnostics diag;
};

inline void StepConfig::validate() const
{
  TSGRQI_REQUIRE(max_iters >= 1, ErrorCode::InvalidConfig, "max_iters must be >= 1");
  TSGRQI_REQUIRE(angle_tol > 0.0, ErrorCode::InvalidConfig, "angle_tol must be positive");
}

namespace detail {

template <class Real>
Real hermitian_defect(const CMatrix<Real>& a)
{
  const Real scale = std::max(Real(1), a.norm());
  return (a - a.adjoint()).norm() / scale;
}

/// Unit vector in the numerical kernel of M, chosen closest to `hint`.
template <class Real>
CVector<Real> kernel_vector(const CMatrix<Real>& m, const CVector<Real>& hint)
{
  Eigen::JacobiSVD<CMatrix<Real>> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Index n = m.cols();
  const Real tol = Real(n) * std::numeric_limits<Real>::epsilon() * std::max(s(0), Real(1));
  Index first = n - 1;
  while (first > 0 && s(first - 1) <= tol) --first;
  const CMatrix<Real> null = svd.matrixV().rightCols(n - first);
  CVector<Real> v = null * (null.adjoint() * hint);
  if (v.norm() <= std::numeric_limits<Real>::epsilon() * hint.norm()) v = null.col(null.cols() - 1);
  return v.normalized();
}

template <class Real>
void require_gram_invertible(const CMatrix<Real>& gram, Real scale)
{
  TSGRQI_REQUIRE(gram.allFinite() && smallest_singular_value(gram) > Real(1e-12) * scale,
                 ErrorCode::GramSingular, "block Gram matrix is not invertible");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Vector iterations
// ---------------------------------------------------------------------------

template <class Real>
struct RqiResult {
  CVector<Real> next;
  Real rho{};
  bool terminal = false;
};

/// One Rayleigh quotient iteration step for Hermitian A.
template <class Real>
RqiResult<Real> rqi_step(const CMatrix<Real>& a, const CVector<Real>& y)
{
  TSGRQI_REQUIRE(a.rows() == a.cols() && a.rows() == y.size(), ErrorCode::DimensionMismatch,
                 "rqi dimensions");
  TSGRQI_REQUIRE(detail::hermitian_defect(a) <= Real(1e-12), ErrorCode::NotHermitian,
                 "rqi_step needs a Hermitian matrix");
  TSGRQI_REQUIRE(y.norm() > Real(0), ErrorCode::ZeroVector, "rqi start vector is zero");

  RqiResult<Real> out;
  out.rho = std::real(y.dot(a * y)) / y.squaredNorm();
  CMatrix<Real> shifted = a;
  shifted.diagonal().array() -= out.rho;
  const CVector<Real> z = Eigen::PartialPivLU<CMatrix<Real>>(shifted).solve(y);
  if (!z.allFinite()) {
    out.next = detail::kernel_vector(shifted, y);
    out.terminal = true;
    return out;
  }
  out.next = z.normalized();
  return out;
}

template <class Real>
struct TwoSidedRqiResult {
  CVector<Real> left;
  CVector<Real> right;
  std::complex<Real> rho{};
  bool terminal = false;
};

/// One two-sided (Ostrowski-Parlett) RQI step on a general matrix.
template <class Real>
TwoSidedRqiResult<Real> two_sided_rqi_step(const CMatrix<Real>& c, const CVector<Real>& v,
                                           const CVector<Real>& u)
{
  const Index n = c.rows();
  TSGRQI_REQUIRE(c.cols() == n && v.size() == n && u.size() == n, ErrorCode::DimensionMismatch,
                 "two-sided rqi dimensions");
  const std::complex<Real> vu = v.dot(u);
  TSGRQI_REQUIRE(std::abs(vu) > Real(1e-13) * v.norm() * u.norm(),
                 ErrorCode::BiorthogonalityLost, "v^H u vanishes");

  TwoSidedRqiResult<Real> out;
  out.rho = v.dot(c * u) / vu;
  CMatrix<Real> shifted = c;
  shifted.diagonal().array() -= out.rho;
  const CMatrix<Real> shifted_adj = shifted.adjoint();
  const CVector<Real> zr = Eigen::PartialPivLU<CMatrix<Real>>(shifted).solve(u);
  const CVector<Real> zl = Eigen::PartialPivLU<CMatrix<Real>>(shifted_adj).solve(v);
  if (!zr.allFinite() || !zl.allFinite()) {
    out.right = detail::kernel_vector(shifted, u);
    out.left = detail::kernel_vector(shifted_adj, v);
    out.terminal = true;
  } else {
    out.right = zr.normalized();
    out.left = zl.normalized();
  }
  TSGRQI_REQUIRE(std::abs(out.left.dot(out.right)) > Real(1e-13), ErrorCode::BiorthogonalityLost,
                 "new left and right vectors are orthogonal");
  return out;
}

// ---------------------------------------------------------------------------
// Subspace iterations
// ---------------------------------------------------------------------------

/// One Grassmann-RQI step for Hermitian A: solves A Z - Z (Y^H A Y) = Y
/// by diagonalizing the Hermitian block Rayleigh quotient.
template <class Real>
Subspace<Real> grqi_step(const CMatrix<Real>& a, const Subspace<Real>& y,
                         const PerturbationPolicy& policy = {},
                         StepDiagnostics* diag = nullptr)
{
  TSGRQI_REQUIRE(a.rows() == a.cols() && a.rows() == y.ambient(), ErrorCode::DimensionMismatch,
                 "grqi dimensions");
  TSGRQI_REQUIRE(detail::hermitian_defect(a) <= Real(1e-12), ErrorCode::NotHermitian,
                 "grqi_step needs a Hermitian matrix");
  const CMatrix<Real>& basis = y.basis();
  CMatrix<Real> rq = basis.adjoint() * a * basis;
  rq = (rq + rq.adjoint().eval()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(rq);
  TSGRQI_REQUIRE(es.info() == Eigen::Success, ErrorCode::SolveFailed,
                 "Hermitian eigensolver did not converge");
  const CMatrix<Real> rhs = basis * es.eigenvectors();

  CMatrix<Real> z(a.rows(), y.dim());
  bool perturbed = false;
  for (Index i = 0; i < y.dim(); ++i) {
    auto sol = shifted_solve<Real>(a, std::complex<Real>(es.eigenvalues()(i)), rhs.col(i), policy);
    perturbed = perturbed || sol.perturbed;
    z.col(i) = sol.z;
  }
  if (diag) {
    diag->perturbed = perturbed;
    diag->shift_cond = 1.0;
  }
  return orthonormalize(z);
}

/// One step of the two-sided Grassmann-Rayleigh quotient iteration.
///
/// With G = Y_L^H Y_R the block Rayleigh quotient R_R = G^-1 Y_L^H C Y_R is
/// diagonalized as W_R diag(rho) W_R^-1, W_L = G W_R diagonalizes R_L, and the
/// two Sylvester equations decouple into p right solves
/// (C - rho_i I) z_R = Y_R W_R e_i and p left solves
/// (C^H - conj(rho_i) I) z_L = Y_L W_L^-H e_i.
template <class Real>
PairStep<Real> tsgrqi_step(const CMatrix<Real>& c, const SubspacePair<Real>& pair,
                           const StepConfig& cfg = {})
{
  const Index n = c.rows();
  const Index p = pair.right.dim();
  TSGRQI_REQUIRE(c.cols() == n && pair.right.ambient() == n && pair.left.ambient() == n &&
                     pair.left.dim() == p,
                 ErrorCode::DimensionMismatch, "2sGRQI dimensions");
  const CMatrix<Real>& yl = pair.left.basis();
  const CMatrix<Real>& yr = pair.right.basis();

  const CMatrix<Real> gram = yl.adjoint() * yr;
  detail::require_gram_invertible(gram, Real(1));
  Eigen::PartialPivLU<CMatrix<Real>> gram_lu(gram);
  const CMatrix<Real> rr = gram_lu.solve(yl.adjoint() * (c * yr));

  const auto shift = small_eig(rr, {1e8, cfg.strict_defective});
  const CMatrix<Real> wl = gram * shift.eigvecs;
  const CMatrix<Real> wl_inv_adj = Eigen::PartialPivLU<CMatrix<Real>>(wl).inverse().adjoint();
  const CMatrix<Real> rhs_right = yr * shift.eigvecs;
  const CMatrix<Real> rhs_left = yl * wl_inv_adj;
  const CMatrix<Real> c_adj = c.adjoint();

  CMatrix<Real> zr(n, p);
  CMatrix<Real> zl(n, p);
  bool perturbed = false;
  for (Index i = 0; i < p; ++i) {
    const std::complex<Real> rho = shift.shifts(i);
    auto right = shifted_solve<Real>(c, rho, rhs_right.col(i), cfg.perturbation);
    auto left = shifted_solve<Real>(c_adj, std::conj(rho), rhs_left.col(i), cfg.perturbation);
    perturbed = perturbed || right.perturbed || left.perturbed;
    zr.col(i) = right.z;
    zl.col(i) = left.z;
  }

  PairStep<Real> out{{orthonormalize(zl), orthonormalize(zr)}, {}};
  out.diag.perturbed = perturbed;
  out.diag.shift_cond = double(shift.cond);
  out.diag.near_defective = shift.near_defective;
  return out;
}

/// One Newton step on the Grassmann manifold (Chatelin's method): solves
/// (Y_perp^H C Y_perp) K - K (Y^H C Y) = -Y_perp^H C Y and returns span(Y + Y_perp K).
template <class Real>
Subspace<Real> newton_chatelin_step(const CMatrix<Real>& c, const Subspace<Real>& y)
{
  TSGRQI_REQUIRE(c.rows() == c.cols() && c.rows() == y.ambient(), ErrorCode::DimensionMismatch,
                 "newton dimensions");
  const CMatrix<Real>& basis = y.basis();
  const CMatrix<Real> perp = orthonormal_complement(y);
  const CMatrix<Real> c_basis = c * basis;
  const CMatrix<Real> a11 = perp.adjoint() * c * perp;
  const CMatrix<Real> a22 = basis.adjoint() * c_basis;
  const CMatrix<Real> rhs = -(perp.adjoint() * c_basis);
  const CMatrix<Real> k = sylvester_solve<Real>(a11, a22, rhs);
  return orthonormalize<Real>(basis + perp * k);
}

}  // namespace tsgrqi
