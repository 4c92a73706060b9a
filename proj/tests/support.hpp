// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <doctest.h>

#include "tsgrqi/testgen.hpp"

namespace tsgrqi::test {

inline Matrix diag(std::initializer_list<double> values)
{
  Vector d(Index(values.size()));
  Index i = 0;
  for (double v : values) d(i++) = Complex(v);
  return d.asDiagonal();
}

inline Matrix unit_columns(Index n, std::initializer_list<Index> cols)
{
  Matrix m = Matrix::Zero(n, Index(cols.size()));
  Index j = 0;
  for (Index c : cols) m(c, j++) = 1.0;
  return m;
}

inline Subspace<double> span_of(const Matrix& m) { return orthonormalize<double>(m); }

/// ||P_U - P_V||_2 for orthonormal bases.
inline double projector_distance(const Matrix& u, const Matrix& v)
{
  return spectral_norm(Matrix(u * u.adjoint() - v * v.adjoint()));
}

inline Matrix random_unitary(Index n, CounterRng& rng)
{
  Eigen::HouseholderQR<Matrix> qr(complex_normal(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline double angle(const Subspace<double>& a, const Subspace<double>& b)
{
  return largest_principal_angle(a, b);
}

}  // namespace tsgrqi::test
