// SPDX-License-Identifier: Apache-2.0
#include "tsgrqi/structured.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "tsgrqi/rng.hpp"

namespace tsgrqi {

// ---------------------------------------------------------------------------
// StructureOperator
// ---------------------------------------------------------------------------

StructureOperator StructureOperator::dense(Matrix e)
{
  TSGRQI_REQUIRE(e.rows() == e.cols() && e.rows() >= 1, ErrorCode::DimensionMismatch,
                 "E must be square");
  StructureOperator op;
  op.n_ = e.rows();
  op.dense_ = std::move(e);
  return op;
}

StructureOperator StructureOperator::symplectic(Index n)
{
  TSGRQI_REQUIRE(n >= 2 && n % 2 == 0, ErrorCode::OddDimension, "J needs even dimension");
  StructureOperator op;
  op.n_ = n;
  op.symplectic_ = true;
  return op;
}

Matrix apply_symplectic(const Matrix& x)
{
  const Index n = x.rows();
  TSGRQI_REQUIRE(n % 2 == 0, ErrorCode::OddDimension, "J needs even dimension");
  const Index h = n / 2;
  Matrix out(n, x.cols());
  out.topRows(h) = x.bottomRows(h);
  out.bottomRows(h) = -x.topRows(h);
  return out;
}

Matrix StructureOperator::apply(const Matrix& x) const
{
  TSGRQI_REQUIRE(x.rows() == n_, ErrorCode::DimensionMismatch, "E application dimensions");
  if (symplectic_) return apply_symplectic(x);
  return dense_ * x;
}

Matrix StructureOperator::apply_adjoint(const Matrix& x) const
{
  TSGRQI_REQUIRE(x.rows() == n_, ErrorCode::DimensionMismatch, "E application dimensions");
  // J^H = -J
  if (symplectic_) return -apply_symplectic(x);
  return dense_.adjoint() * x;
}

Matrix StructureOperator::to_dense() const
{
  if (!symplectic_) return dense_;
  return apply_symplectic(Matrix::Identity(n_, n_));
}

double StructureOperator::norm() const { return symplectic_ ? 1.0 : spectral_norm(dense_); }

// ---------------------------------------------------------------------------
// StructureKind
// ---------------------------------------------------------------------------

StructureKind StructureKind::e_hermitian(Matrix e)
{
  StructureKind k;
  k.tag = StructureTag::EHermitian;
  k.e = StructureOperator::dense(std::move(e));
  return k;
}

StructureKind StructureKind::e_skew_hermitian(Matrix e)
{
  StructureKind k;
  k.tag = StructureTag::ESkewHermitian;
  k.e = StructureOperator::dense(std::move(e));
  return k;
}

StructureKind StructureKind::hamiltonian()
{
  StructureKind k;
  k.tag = StructureTag::HamiltonianJ;
  return k;
}

StructureKind StructureKind::skew_hamiltonian()
{
  StructureKind k;
  k.tag = StructureTag::SkewHamiltonianJ;
  return k;
}

StructureKind StructureKind::generalized_hermitian(Matrix b)
{
  StructureKind k;
  k.tag = StructureTag::GeneralizedHermitian;
  k.b = std::move(b);
  return k;
}

StructureKind StructureKind::pencil(Matrix b, PencilCoefficients coeffs)
{
  StructureKind k;
  k.tag = StructureTag::Pencil;
  k.b = std::move(b);
  k.coeffs = coeffs;
  return k;
}

namespace {

double relative(double defect, double scale) { return scale > 0.0 ? defect / scale : defect; }

StructureCheck verdict(double defect) { return {defect <= kStructureTolerance, defect}; }

// ||EC - sign C^H E||_F / (||E||_F ||C||_F)
double e_relation_defect(const Matrix& c, const StructureOperator& e, double sign)
{
  const Matrix ec = e.apply(c);
  const Matrix che = (e.apply_adjoint(c)).adjoint();  // (E^H C)^H = C^H E
  const double e_norm = e.is_symplectic() ? std::sqrt(double(e.size())) : e.to_dense().norm();
  return relative((ec - sign * che).norm(), e_norm * c.norm());
}

void require_square(const Matrix& c)
{
  TSGRQI_REQUIRE(c.rows() == c.cols() && c.rows() >= 1, ErrorCode::DimensionMismatch,
                 "structure check needs a square matrix");
}

}  // namespace

StructureCheck check_structure(const Matrix& c, const StructureKind& kind)
{
  require_square(c);
  const Index n = c.rows();
  switch (kind.tag) {
    case StructureTag::Plain:
      return {true, 0.0};
    case StructureTag::EHermitian:
    case StructureTag::ESkewHermitian: {
      TSGRQI_REQUIRE(kind.e.has_value() && kind.e->size() == n, ErrorCode::DimensionMismatch,
                     "E must match C");
      const double sign = kind.tag == StructureTag::EHermitian ? 1.0 : -1.0;
      return verdict(e_relation_defect(c, *kind.e, sign));
    }
    case StructureTag::HamiltonianJ:
    case StructureTag::SkewHamiltonianJ: {
      TSGRQI_REQUIRE(n % 2 == 0, ErrorCode::OddDimension, "J-structures need even n");
      // (CJ)^H = +-CJ
      const Matrix cj = c * apply_symplectic(Matrix::Identity(n, n));
      const double sign = kind.tag == StructureTag::HamiltonianJ ? 1.0 : -1.0;
      return verdict(relative((cj.adjoint() - sign * cj).norm(), c.norm()));
    }
    case StructureTag::GeneralizedHermitian: {
      TSGRQI_REQUIRE(kind.b.rows() == n && kind.b.cols() == n, ErrorCode::DimensionMismatch,
                     "B must match A");
      const double da = relative((c - c.adjoint()).norm(), c.norm());
      const double db = relative((kind.b - kind.b.adjoint()).norm(), kind.b.norm());
      StructureCheck out = verdict(std::max(da, db));
      if (condition_number(kind.b) > 1e12) out.holds = false;
      return out;
    }
    case StructureTag::Pencil: {
      TSGRQI_REQUIRE(kind.b.rows() == n && kind.b.cols() == n, ErrorCode::DimensionMismatch,
                     "B must match A");
      const PencilCoefficients& k = kind.coeffs;
      const Complex det = k.alpha * k.delta - k.gamma * k.beta;
      const Matrix b_hat = k.alpha * kind.b - k.beta * c;
      const double cond = condition_number(b_hat);
      const double defect = std::isfinite(cond) ? 1.0 / cond : 1.0;
      return {det != Complex(0.0) && cond < 1e12, defect};
    }
  }
  return {false, 0.0};
}

// ---------------------------------------------------------------------------
// One-sided structured steps
// ---------------------------------------------------------------------------

namespace {

Subspace<double> solve_decoupled(const Matrix& c, const Subspace<double>& y, const Matrix& gram,
                                 const Matrix& projected, const StepConfig& cfg,
                                 StepDiagnostics* diag)
{
  const Matrix shift_matrix = Eigen::PartialPivLU<Matrix>(gram).solve(projected);
  const auto shift = small_eig(shift_matrix, {1e8, cfg.strict_defective});
  const Matrix rhs = y.basis() * shift.eigvecs;
  Matrix z(c.rows(), y.dim());
  bool perturbed = false;
  for (Index i = 0; i < y.dim(); ++i) {
    auto sol = shifted_solve<double>(c, shift.shifts(i), rhs.col(i), cfg.perturbation);
    perturbed = perturbed || sol.perturbed;
    z.col(i) = sol.z;
  }
  if (diag) {
    diag->perturbed = perturbed;
    diag->shift_cond = shift.cond;
    diag->near_defective = shift.near_defective;
  }
  return orthonormalize(z);
}

void require_structure(const Matrix& c, const StructureOperator& e)
{
  StructureKind herm;
  herm.tag = StructureTag::EHermitian;
  herm.e = e;
  StructureKind skew = herm;
  skew.tag = StructureTag::ESkewHermitian;
  const auto h = check_structure(c, herm);
  const auto s = check_structure(c, skew);
  TSGRQI_REQUIRE(h.holds || s.holds, ErrorCode::NotStructured,
                 "C is neither E-Hermitian (defect " + std::to_string(h.defect) +
                     ") nor E-skew-Hermitian (defect " + std::to_string(s.defect) + ")");
}

}  // namespace

Subspace<double> one_sided_step(const Matrix& c, const StructureOperator& e,
                                const Subspace<double>& y, const StepConfig& cfg,
                                StepDiagnostics* diag)
{
  TSGRQI_REQUIRE(c.rows() == c.cols() && c.rows() == y.ambient() && e.size() == c.rows(),
                 ErrorCode::DimensionMismatch, "one-sided step dimensions");
  if (cfg.strict_structure) require_structure(c, e);
  const Matrix& basis = y.basis();
  const Matrix gram = basis.adjoint() * e.apply(basis);
  detail::require_gram_invertible(gram, e.norm());
  const Matrix projected = basis.adjoint() * e.apply(c * basis);
  return solve_decoupled(c, y, gram, projected, cfg, diag);
}

Subspace<double> generalized_hermitian_step(const Matrix& a, const Matrix& b,
                                            const Subspace<double>& y, const StepConfig& cfg,
                                            StepDiagnostics* diag)
{
  const Index n = a.rows();
  TSGRQI_REQUIRE(a.cols() == n && b.rows() == n && b.cols() == n && y.ambient() == n,
                 ErrorCode::DimensionMismatch, "generalized step dimensions");
  TSGRQI_REQUIRE(detail::hermitian_defect(a) <= 1e-12 && detail::hermitian_defect(b) <= 1e-12,
                 ErrorCode::NotHermitian, "A and B must be Hermitian");
  const Matrix& basis = y.basis();
  const Matrix by = b * basis;
  const Matrix gram = basis.adjoint() * by;
  detail::require_gram_invertible(gram, spectral_norm(b));
  const Matrix shift_matrix = Eigen::PartialPivLU<Matrix>(gram).solve(basis.adjoint() * a * basis);
  const auto shift = small_eig(shift_matrix, {1e8, cfg.strict_defective});
  const Matrix rhs = by * shift.eigvecs;

  Matrix z(n, y.dim());
  bool perturbed = false;
  for (Index i = 0; i < y.dim(); ++i) {
    auto sol = pencil_shifted_solve<double>(a, b, shift.shifts(i), rhs.col(i), cfg.perturbation);
    perturbed = perturbed || sol.perturbed;
    z.col(i) = sol.z;
  }
  if (diag) {
    diag->perturbed = perturbed;
    diag->shift_cond = shift.cond;
    diag->near_defective = shift.near_defective;
  }
  return orthonormalize(z);
}

namespace {

void require_j_structure(const Matrix& c, StructureTag tag)
{
  StructureKind kind;
  kind.tag = tag;
  const auto check = check_structure(c, kind);
  TSGRQI_REQUIRE(check.holds, ErrorCode::NotStructured,
                 std::string(tag == StructureTag::HamiltonianJ ? "not Hamiltonian"
                                                               : "not skew-Hamiltonian") +
                     " (defect " + std::to_string(check.defect) + ")");
}

}  // namespace

Subspace<double> skew_hamiltonian_step(const Matrix& t, const Subspace<double>& y,
                                       const StepConfig& cfg, StepDiagnostics* diag)
{
  if (cfg.strict_structure) require_j_structure(t, StructureTag::SkewHamiltonianJ);
  return one_sided_step(t, StructureOperator::symplectic(t.rows()), y, cfg, diag);
}

Subspace<double> hamiltonian_step(const Matrix& h, const Subspace<double>& y,
                                  const StepConfig& cfg, StepDiagnostics* diag)
{
  if (cfg.strict_structure) require_j_structure(h, StructureTag::HamiltonianJ);
  return one_sided_step(h, StructureOperator::symplectic(h.rows()), y, cfg, diag);
}

// ---------------------------------------------------------------------------
// Full eigenspaces
// ---------------------------------------------------------------------------

std::vector<FullEigenspace> full_eigenspace_targets(const Matrix& c, const StructureOperator& e)
{
  const Index n = c.rows();
  TSGRQI_REQUIRE(c.cols() == n && e.size() == n, ErrorCode::DimensionMismatch,
                 "full eigenspace dimensions");
  Eigen::ComplexEigenSolver<Matrix> es(c);
  TSGRQI_REQUIRE(es.info() == Eigen::Success, ErrorCode::SolveFailed,
                 "dense eigensolver did not converge");
  const Vector& lambda = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();
  const double tol = 1e-8 * spectral_norm(c);
  const bool real_matrix = c.imag().cwiseAbs().maxCoeff() == 0.0;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(lambda(a)) > std::abs(lambda(b)); });

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto nearest_unused = [&](Complex target) {
    Index best = -1;
    double dist = tol;
    for (Index k : order) {
      if (used[k]) continue;
      const double d = std::abs(lambda(k) - target);
      if (d <= dist) {
        dist = d;
        best = k;
      }
    }
    return best;
  };

  std::vector<FullEigenspace> groups;
  for (Index seed : order) {
    if (used[seed]) continue;
    std::vector<Index> members{seed};
    used[seed] = true;
    for (std::size_t m = 0; m < members.size(); ++m) {
      const Complex mu = lambda(members[m]);
      std::vector<Complex> images{-std::conj(mu)};
      if (real_matrix) {
        images.push_back(std::conj(mu));
        images.push_back(-mu);
      }
      for (const Complex& image : images) {
        const bool on_group = std::any_of(members.begin(), members.end(), [&](Index k) {
          return std::abs(lambda(k) - image) <= tol;
        });
        // Repeated eigenvalues join the group they belong to.
        Index k = nearest_unused(image);
        if (k >= 0) {
          used[k] = true;
          members.push_back(k);
        } else {
          TSGRQI_REQUIRE(on_group, ErrorCode::UnpairedEigenvalue,
                         "eigenvalue has no partner under lambda -> -conj(lambda)");
        }
      }
      for (Index k = nearest_unused(mu); k >= 0; k = nearest_unused(mu)) {
        used[k] = true;
        members.push_back(k);
      }
    }
    FullEigenspace g;
    Matrix basis(n, Index(members.size()));
    for (std::size_t j = 0; j < members.size(); ++j) {
      basis.col(Index(j)) = vecs.col(members[j]);
      g.eigenvalues.push_back(lambda(members[j]));
      g.max_abs_real = std::max(g.max_abs_real, std::abs(lambda(members[j]).real()));
    }
    g.right = orthonormalize(basis);
    groups.push_back(std::move(g));
  }
  std::stable_sort(groups.begin(), groups.end(), [](const FullEigenspace& a, const FullEigenspace& b) {
    return a.max_abs_real > b.max_abs_real;
  });
  return groups;
}

// ---------------------------------------------------------------------------
// Pencils
// ---------------------------------------------------------------------------

PencilMatrices pencil_matrices(const Matrix& a, const Matrix& b, const PencilCoefficients& k)
{
  const Index n = a.rows();
  TSGRQI_REQUIRE(a.cols() == n && b.rows() == n && b.cols() == n, ErrorCode::DimensionMismatch,
                 "pencil dimensions");
  TSGRQI_REQUIRE(std::abs(k.alpha * k.delta - k.gamma * k.beta) > 0.0,
                 ErrorCode::DegeneratePencil, "alpha delta - gamma beta vanishes");
  PencilMatrices out{k.gamma * b - k.delta * a, k.alpha * b - k.beta * a};
  Eigen::JacobiSVD<Matrix> svd(out.b_hat);
  const auto& s = svd.singularValues();
  TSGRQI_REQUIRE(s(n - 1) > double(n) * 1e-15 * s(0), ErrorCode::DegeneratePencil,
                 "B^ = alpha B - beta A is singular");
  return out;
}

PencilStep pencil_tsgrqi_step(const Matrix& a, const Matrix& b, const PencilCoefficients& k,
                              const PencilPair& pair, const StepConfig& cfg)
{
  const Index n = a.rows();
  const Index p = pair.right.dim();
  TSGRQI_REQUIRE(pair.right.ambient() == n && pair.hatted_left.ambient() == n &&
                     pair.hatted_left.dim() == p,
                 ErrorCode::DimensionMismatch, "pencil pair dimensions");
  const auto [a_hat, b_hat] = pencil_matrices(a, b, k);
  const Matrix& yr = pair.right.basis();
  const Matrix& yl = pair.hatted_left.basis();

  const Matrix b_yr = b_hat * yr;
  const Matrix gram = yl.adjoint() * b_yr;
  detail::require_gram_invertible(gram, spectral_norm(b_hat));
  const Matrix rr = Eigen::PartialPivLU<Matrix>(gram).solve(yl.adjoint() * (a_hat * yr));
  const auto shift = small_eig(rr, {1e8, cfg.strict_defective});
  const Matrix wl = gram * shift.eigvecs;
  const Matrix wl_inv_adj = Eigen::PartialPivLU<Matrix>(wl).inverse().adjoint();

  const Matrix a_hat_adj = a_hat.adjoint();
  const Matrix b_hat_adj = b_hat.adjoint();
  const Matrix rhs_right = b_yr * shift.eigvecs;
  const Matrix rhs_left = b_hat_adj * yl * wl_inv_adj;

  Matrix zr(n, p);
  Matrix zl(n, p);
  bool perturbed = false;
  for (Index i = 0; i < p; ++i) {
    const Complex rho = shift.shifts(i);
    auto right = pencil_shifted_solve<double>(a_hat, b_hat, rho, rhs_right.col(i), cfg.perturbation);
    auto left = pencil_shifted_solve<double>(a_hat_adj, b_hat_adj, std::conj(rho),
                                             rhs_left.col(i), cfg.perturbation);
    perturbed = perturbed || right.perturbed || left.perturbed;
    zr.col(i) = right.z;
    zl.col(i) = left.z;
  }
  PencilStep out{{orthonormalize(zr), orthonormalize(zl)}, {}};
  out.diag.perturbed = perturbed;
  out.diag.shift_cond = shift.cond;
  out.diag.near_defective = shift.near_defective;
  return out;
}

PencilCoefficients choose_pencil_coefficients(const Matrix& a, const Matrix& b, std::uint64_t seed)
{
  if (condition_number(b) < 1e8) return {};
  CounterRng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int attempt = 0; attempt < 50; ++attempt) {
    const double phi = angle(rng);
    PencilCoefficients k{Complex(std::cos(phi)), Complex(std::sin(phi)), Complex(std::sin(phi)),
                         Complex(-std::cos(phi))};
    if (condition_number(Matrix(k.alpha * b - k.beta * a)) < 1e8) return k;
  }
  detail::raise(ErrorCode::DegeneratePencil,
                "no (alpha, beta) on the unit circle gives a well-conditioned B^");
}

}  // namespace tsgrqi
