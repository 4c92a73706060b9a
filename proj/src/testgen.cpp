// SPDX-License-Identifier: Apache-2.0
#include "tsgrqi/testgen.hpp"

#include <cmath>
#include <numeric>

namespace tsgrqi {

Eigen::MatrixXd standard_normal(Index n, Index m, CounterRng& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(n, m);
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) out(i, j) = normal(rng);
  return out;
}

Matrix complex_normal(Index n, Index m, CounterRng& rng)
{
  const double scale = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXd re = standard_normal(n, m, rng);
  const Eigen::MatrixXd im = standard_normal(n, m, rng);
  Matrix out(n, m);
  out.real() = scale * re;
  out.imag() = scale * im;
  return out;
}

double uniform_open(double lo, double hi, CounterRng& rng)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  double x = dist(rng);
  while (x <= lo) x = dist(rng);
  return x;
}

std::vector<int> random_permutation(Index n, CounterRng& rng)
{
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

Matrix random_hamiltonian(Index n, CounterRng& rng)
{
  TSGRQI_REQUIRE(n >= 2 && n % 2 == 0, ErrorCode::OddDimension,
                 "Hamiltonian matrices need even n");
  const Index h = n / 2;
  const Eigen::MatrixXd f = standard_normal(h, h, rng);
  const Eigen::MatrixXd g = standard_normal(h, h, rng);
  const Eigen::MatrixXd k = standard_normal(h, h, rng);
  Eigen::MatrixXd c(n, n);
  c.topLeftCorner(h, h) = f;
  c.topRightCorner(h, h) = g + g.transpose();
  c.bottomLeftCorner(h, h) = k + k.transpose();
  c.bottomRightCorner(h, h) = -f.transpose();
  return c.cast<Complex>();
}

EigenspacePair eigenspace_pair_oracle(const Matrix& c, const EigenSelector& selector)
{
  const Index n = c.rows();
  TSGRQI_REQUIRE(c.cols() == n && n >= 1, ErrorCode::DimensionMismatch,
                 "oracle needs a square matrix");
  TSGRQI_REQUIRE(selector.count >= 1 && selector.count <= n, ErrorCode::InvalidConfig,
                 "selector count out of range");
  Eigen::ComplexEigenSolver<Matrix> es(c);
  TSGRQI_REQUIRE(es.info() == Eigen::Success, ErrorCode::SolveFailed,
                 "dense eigensolver did not converge");
  const Vector& lambda = es.eigenvalues();
  Matrix s = es.eigenvectors();
  s.colwise().normalize();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  const Index p = selector.count;
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  if (selector.kind == EigenSelector::Kind::Given) {
    for (const Complex& target : selector.eigenvalues) {
      Index best = -1;
      double dist = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        const double d = std::abs(lambda(i) - target);
        if (d < dist) {
          dist = d;
          best = i;
        }
      }
      chosen[best] = true;
    }
  } else {
    auto criterion = [&](Index i) {
      return selector.kind == EigenSelector::Kind::TopModulus ? std::abs(lambda(i))
                                                              : std::abs(lambda(i).real());
    };
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double ca = criterion(a), cb = criterion(b);
      if (ca != cb) return ca > cb;
      if (lambda(a).real() != lambda(b).real()) return lambda(a).real() > lambda(b).real();
      return lambda(a).imag() > lambda(b).imag();
    });
    for (Index k = 0; k < p; ++k) chosen[order[k]] = true;
  }

  std::vector<Index> selected, rest;
  for (Index i = 0; i < n; ++i) (chosen[i] ? selected : rest).push_back(i);

  const double scale = spectral_norm(c);
  double gap = std::numeric_limits<double>::infinity();
  for (Index i : selected)
    for (Index j : rest) gap = std::min(gap, std::abs(lambda(i) - lambda(j)));
  TSGRQI_REQUIRE(gap > 1e-8 * scale, ErrorCode::NotSpectral,
                 "selected eigenvalues are not separated from the rest");

  Matrix reordered(n, n);
  std::vector<Complex> spectrum;
  Index col = 0;
  for (Index i : selected) {
    reordered.col(col++) = s.col(i);
    spectrum.push_back(lambda(i));
  }
  for (Index i : rest) reordered.col(col++) = s.col(i);
  TSGRQI_REQUIRE(condition_number(reordered) <= 1e12, ErrorCode::NearDefective,
                 "eigenvector matrix is too ill-conditioned for an oracle");
  const Matrix s_inv_adj = Eigen::PartialPivLU<Matrix>(reordered).inverse().adjoint();

  EigenspacePair out;
  out.right = orthonormalize<double>(reordered.leftCols(p));
  out.left = orthonormalize<double>(s_inv_adj.leftCols(p));
  out.spectrum = std::move(spectrum);
  return out;
}

BlockDiagonalizer build_block_diagonalizer(const Matrix& c, const Matrix& x, Index p)
{
  const Index n = c.rows();
  TSGRQI_REQUIRE(c.cols() == n && x.rows() == n && x.cols() == n && p >= 1 && p < n,
                 ErrorCode::DimensionMismatch, "block diagonalizer dimensions");
  const Matrix t = x.adjoint() * c * x;
  const Index q = n - p;
  const Matrix c11 = t.topLeftCorner(p, p);
  const Matrix c12 = t.topRightCorner(p, q);
  const Matrix c22 = t.bottomRightCorner(q, q);
  const Matrix l = sylvester_solve<double>(c11, c22, -c12);

  Matrix upper = Matrix::Identity(n, n);
  upper.topRightCorner(p, q) = l;
  Matrix upper_inv = Matrix::Identity(n, n);
  upper_inv.topRightCorner(p, q) = -l;

  BlockDiagonalizer out;
  out.s = x * upper;
  out.s_inv = upper_inv * x.adjoint();
  out.coupling = l;
  return out;
}

namespace {

/// Hermitian (or skew-Hermitian) E = U diag(+-s) U^H with s uniform on (1, 2)
/// and random signs, so cond(E) < 2 while E stays indefinite.
Matrix well_conditioned_structure(Index n, bool skew_e, CounterRng& rng)
{
  const Matrix u = [&] {
    Eigen::HouseholderQR<Matrix> qr(complex_normal(n, n, rng));
    return Matrix(qr.householderQ() * Matrix::Identity(n, n));
  }();
  Vector d(n);
  for (Index i = 0; i < n; ++i) {
    const double sign = uniform_open(0.0, 1.0, rng) < 0.5 ? -1.0 : 1.0;
    d(i) = sign * uniform_open(1.0, 2.0, rng);
  }
  Matrix e = u * d.asDiagonal() * u.adjoint();
  e = (e + e.adjoint()) / 2.0;
  if (skew_e) e *= Complex(0.0, 1.0);
  return e;
}

}  // namespace

StructuredInstance random_e_hermitian(Index n, bool skew_e, CounterRng& rng)
{
  // EC = C^H E with C = E^-1 M holds iff M^H = M when E^H = E, M^H = -M when E^H = -E.
  Matrix e = well_conditioned_structure(n, skew_e, rng);
  Matrix m = random_hermitian(n, rng);
  if (skew_e) m *= Complex(0.0, 1.0);
  StructuredInstance out;
  out.c = Eigen::PartialPivLU<Matrix>(e).solve(m);
  out.e = std::move(e);
  return out;
}

StructuredInstance random_e_skew_hermitian(Index n, bool skew_e, CounterRng& rng)
{
  // EC = -C^H E with C = E^-1 M holds iff M^H = -M when E^H = E, M^H = M when E^H = -E.
  Matrix e = well_conditioned_structure(n, skew_e, rng);
  Matrix m = random_hermitian(n, rng);
  if (!skew_e) m *= Complex(0.0, 1.0);
  StructuredInstance out;
  out.c = Eigen::PartialPivLU<Matrix>(e).solve(m);
  out.e = std::move(e);
  return out;
}

Matrix random_hpd(Index n, CounterRng& rng)
{
  const Matrix g = complex_normal(n, n, rng);
  Matrix b = g * g.adjoint() / double(n);
  b.diagonal().array() += 1.0;
  return (b + b.adjoint()) / 2.0;
}

Matrix random_hermitian(Index n, CounterRng& rng)
{
  const Matrix g = complex_normal(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace tsgrqi
