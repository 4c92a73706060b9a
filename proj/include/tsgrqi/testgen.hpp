// SPDX-License-Identifier: Apache-2.0
//
// Random problem generators and ground-truth eigenspace oracles.
#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "tsgrqi/linalg.hpp"
#include "tsgrqi/rng.hpp"

namespace tsgrqi {

template <class Real>
struct GeneratedProblem {
  CMatrix<Real> c;
  CMatrix<Real> s;  ///< similarity with C = S D S^-1 (when known)
  Subspace<Real> oracle_right;
  Subspace<Real> oracle_left;
  std::vector<std::complex<Real>> spectrum;  ///< eigenvalues of the target pair
  std::uint64_t seed = 0;
  double alpha = 0.0;
};

// ---------------------------------------------------------------------------
// Raw draws (always taken in double so every precision sees the same numbers)
// ---------------------------------------------------------------------------

/// n x m matrix of independent N(0,1) entries.
Eigen::MatrixXd standard_normal(Index n, Index m, CounterRng& rng);

/// Complex normal: real and imaginary parts N(0, 1/2).
Matrix complex_normal(Index n, Index m, CounterRng& rng);

/// Uniform on the open interval (lo, hi).
double uniform_open(double lo, double hi, CounterRng& rng);

/// Random permutation of 1..n.
std::vector<int> random_permutation(Index n, CounterRng& rng);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// C = S D S^-1 with D a random permutation of 1..n and S = I + (alpha/||E||_2) E,
/// E standard normal, alpha uniform on (0, 0.1). The target pair is spanned by
/// the first p columns of S and of S^-H.
template <class Real>
GeneratedProblem<Real> random_diagonalizable(Index n, Index p, CounterRng& rng)
{
  TSGRQI_REQUIRE(n >= 2 && p >= 1 && p < n, ErrorCode::InvalidConfig,
                 "random_diagonalizable needs n >= 2 and 1 <= p < n");
  GeneratedProblem<Real> out;
  out.seed = rng.key();
  const std::vector<int> perm = random_permutation(n, rng);
  const Eigen::MatrixXd e = standard_normal(n, n, rng);
  out.alpha = uniform_open(0.0, 0.1, rng);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
  const Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n) + (out.alpha / svd.singularValues()(0)) * e;

  out.s = s.cast<std::complex<Real>>();
  const CMatrix<Real> s_inv = Eigen::PartialPivLU<CMatrix<Real>>(out.s).inverse();
  CVector<Real> d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::complex<Real>(Real(perm[i]));
  out.c = out.s * d.asDiagonal() * s_inv;
  out.oracle_right = orthonormalize<Real>(out.s.leftCols(p));
  out.oracle_left = orthonormalize<Real>(s_inv.adjoint().leftCols(p));
  out.spectrum.assign(d.data(), d.data() + p);
  return out;
}

/// Hermitian counterpart: C = Q D Q^H with Q a random orthogonal matrix and
/// D a random permutation of 1..n. Left and right oracles coincide.
template <class Real>
GeneratedProblem<Real> random_hermitian_diagonalizable(Index n, Index p, CounterRng& rng)
{
  TSGRQI_REQUIRE(n >= 2 && p >= 1 && p < n, ErrorCode::InvalidConfig,
                 "random_hermitian_diagonalizable needs n >= 2 and 1 <= p < n");
  GeneratedProblem<Real> out;
  out.seed = rng.key();
  const std::vector<int> perm = random_permutation(n, rng);
  const CMatrix<Real> g = standard_normal(n, n, rng).cast<std::complex<Real>>();
  Eigen::HouseholderQR<CMatrix<Real>> qr(g);
  out.s = qr.householderQ() * CMatrix<Real>::Identity(n, n);
  CVector<Real> d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::complex<Real>(Real(perm[i]));
  out.c = out.s * d.asDiagonal() * out.s.adjoint();
  out.c = ((out.c + out.c.adjoint()) / Real(2)).eval();
  out.oracle_right = orthonormalize<Real>(out.s.leftCols(p));
  out.oracle_left = out.oracle_right;
  out.spectrum.assign(d.data(), d.data() + p);
  return out;
}

/// Real Hamiltonian [F, G + G^T; H + H^T, -F^T] with standard normal F, G, H.
Matrix random_hamiltonian(Index n, CounterRng& rng);

/// Subspace at largest principal angle exactly theta from V:
/// span(V + V_perp K) with K a random real direction scaled to ||K||_2 = tan(theta).
template <class Real>
Subspace<Real> subspace_at_angle(const Subspace<Real>& v, double theta, CounterRng& rng)
{
  TSGRQI_REQUIRE(theta >= 0.0 && theta < 1.5707963267948966, ErrorCode::InvalidConfig,
                 "angle must lie in [0, pi/2)");
  const Index n = v.ambient();
  const Index p = v.dim();
  if (n == p) return v;
  const Eigen::MatrixXd k = standard_normal(n - p, p, rng);
  const CMatrix<Real> perp = orthonormal_complement(v);
  CMatrix<Real> kc = k.cast<std::complex<Real>>();
  const Real knorm = spectral_norm(kc);
  using std::tan;
  kc *= tan(Real(theta)) / knorm;
  return orthonormalize<Real>(v.basis() + perp * kc);
}

/// Subspace at an angle drawn uniformly from (0, max_angle) away from V.
template <class Real>
Subspace<Real> nearby_subspace(const Subspace<Real>& v, double max_angle, CounterRng& rng)
{
  TSGRQI_REQUIRE(max_angle >= 0.0 && max_angle < 1.5707963267948966, ErrorCode::InvalidConfig,
                 "max_angle must lie in [0, pi/2)");
  const double theta = max_angle == 0.0 ? 0.0 : uniform_open(0.0, max_angle, rng);
  return subspace_at_angle(v, theta, rng);
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

struct EigenSelector {
  enum class Kind { TopModulus, TopAbsRealPart, Given };
  Kind kind = Kind::TopModulus;
  Index count = 1;
  std::vector<Complex> eigenvalues;  ///< for Kind::Given

  static EigenSelector top_modulus(Index p) { return {Kind::TopModulus, p, {}}; }
  static EigenSelector top_abs_real(Index p) { return {Kind::TopAbsRealPart, p, {}}; }
  static EigenSelector given(std::vector<Complex> values)
  {
    const Index p = Index(values.size());
    return {Kind::Given, p, std::move(values)};
  }
};

struct EigenspacePair {
  Subspace<double> left;
  Subspace<double> right;
  std::vector<Complex> spectrum;
};

/// Dense eigendecomposition C = S D S^-1, reordered by `selector`; returns the
/// spans of the selected columns of S and of S^-H. Throws NotSpectral if the
/// selected eigenvalues come within 1e-8 ||C|| of the rest, NearDefective if
/// cond(S) exceeds 1e12.
EigenspacePair eigenspace_pair_oracle(const Matrix& c, const EigenSelector& selector);

struct BlockDiagonalizer {
  Matrix s;      ///< X [I L; 0 I]
  Matrix s_inv;  ///< [I -L; 0 I] X^H
  Matrix coupling;  ///< L
};

/// For X unitary with X^H C X = [C11 C12; 0 C22] (C11 p x p), returns
/// S = X [I L; 0 I] with C11 L - L C22 = -C12, so S^-1 C S = diag(C11, C22).
BlockDiagonalizer build_block_diagonalizer(const Matrix& c, const Matrix& x, Index p);

// ---------------------------------------------------------------------------
// Auxiliary generators for property tests
// ---------------------------------------------------------------------------

/// Hermitian (or skew-Hermitian) invertible E and an E-Hermitian C = E^-1 M.
struct StructuredInstance {
  Matrix c;
  Matrix e;
};

/// E with E^H = E (skew_e = false) or E^H = -E, and C with EC = C^H E.
StructuredInstance random_e_hermitian(Index n, bool skew_e, CounterRng& rng);

/// E with E^H = +-E and C with EC = -C^H E.
StructuredInstance random_e_skew_hermitian(Index n, bool skew_e, CounterRng& rng);

/// Random Hermitian positive definite matrix with condition number below ~10.
Matrix random_hpd(Index n, CounterRng& rng);

/// Random complex Hermitian matrix.
Matrix random_hermitian(Index n, CounterRng& rng);

}  // namespace tsgrqi
