// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>

#include "tsgrqi/error.hpp"

namespace tsgrqi {

using Index = Eigen::Index;

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = CMatrix<double>;
using Vector = CVector<double>;

/// A point on the Grassmann manifold, stored as an orthonormal n x p basis.
///
/// Instances are produced by `orthonormalize` (or `Subspace::adopt` when the
/// caller already holds an orthonormal basis), so `basis()` always satisfies
/// basis^H basis = I up to rounding.
template <class Real>
class Subspace {
public:
  Subspace() = default;

  /// Wraps an orthonormal basis. Throws RankDeficient if the columns are not
  /// orthonormal within 1e-12 sqrt(p).
  static Subspace adopt(CMatrix<Real> basis);

  const CMatrix<Real>& basis() const noexcept { return basis_; }
  Index ambient() const noexcept { return basis_.rows(); }
  Index dim() const noexcept { return basis_.cols(); }
  bool empty() const noexcept { return basis_.size() == 0; }

  template <class To>
  Subspace<To> cast() const
  {
    return Subspace<To>::adopt(basis_.template cast<std::complex<To>>());
  }

private:
  template <class R>
  friend Subspace<R> orthonormalize(const CMatrix<R>& z);
  template <class R>
  friend class Subspace;

  struct Trusted {};
  Subspace(CMatrix<Real> basis, Trusted) : basis_(std::move(basis)) {}

  CMatrix<Real> basis_;
};

/// Left/right iterate of the two-sided methods.
template <class Real>
struct SubspacePair {
  Subspace<Real> left;
  Subspace<Real> right;
};

}  // namespace tsgrqi
