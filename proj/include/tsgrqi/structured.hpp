// SPDX-License-Identifier: Apache-2.0
//
// Structure-exploiting one-sided iterations (E-Hermitian, E-skew-Hermitian,
// generalized Hermitian, skew-Hamiltonian, Hamiltonian) and the two-sided
// iteration for deflating subspaces of matrix pencils.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tsgrqi/iterations.hpp"

namespace tsgrqi {

/// The matrix E of an E-(skew-)Hermitian problem. The symplectic
/// J = [0 I; -I 0] is kept implicit and applied as a signed block swap.
class StructureOperator {
public:
  static StructureOperator dense(Matrix e);
  static StructureOperator symplectic(Index n);

  Index size() const noexcept { return n_; }
  bool is_symplectic() const noexcept { return symplectic_; }

  Matrix apply(const Matrix& x) const;          ///< E x
  Matrix apply_adjoint(const Matrix& x) const;  ///< E^H x
  Matrix to_dense() const;
  double norm() const;  ///< spectral norm

private:
  StructureOperator() = default;
  Index n_ = 0;
  bool symplectic_ = false;
  Matrix dense_;
};

/// Applies J = [0 I; -I 0] to the rows of x.
Matrix apply_symplectic(const Matrix& x);

/// (alpha, beta, gamma, delta) with B^ = alpha B - beta A and A^ = gamma B - delta A.
struct PencilCoefficients {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  Complex gamma{0.0, 0.0};
  Complex delta{-1.0, 0.0};
};

enum class StructureTag {
  Plain,
  EHermitian,
  ESkewHermitian,
  HamiltonianJ,
  SkewHamiltonianJ,
  GeneralizedHermitian,
  Pencil,
};

struct StructureKind {
  StructureTag tag = StructureTag::Plain;
  std::optional<StructureOperator> e;
  Matrix b;
  PencilCoefficients coeffs{};

  static StructureKind plain() { return {}; }
  static StructureKind e_hermitian(Matrix e);
  static StructureKind e_skew_hermitian(Matrix e);
  static StructureKind hamiltonian();
  static StructureKind skew_hamiltonian();
  static StructureKind generalized_hermitian(Matrix b);
  static StructureKind pencil(Matrix b, PencilCoefficients coeffs = {});
};

struct StructureCheck {
  bool holds = false;
  double defect = 0.0;  ///< relative defect of the defining relation
};

/// Relative tolerance used by check_structure.
inline constexpr double kStructureTolerance = 1e-10;

/// Tests the defining relation of `kind` on C (or A for pencils), e.g.
/// ||EC - C^H E||_F / (||E||_F ||C||_F) for E-Hermitian. J-structures need even n.
StructureCheck check_structure(const Matrix& c, const StructureKind& kind);

/// One step of the structured one-sided iteration
/// C Z - Z (Y^H E Y)^-1 (Y^H E C Y) = Y.
/// When strict, the E-(skew-)Hermitian relation is verified first.
Subspace<double> one_sided_step(const Matrix& c, const StructureOperator& e,
                                const Subspace<double>& y, const StepConfig& cfg = {},
                                StepDiagnostics* diag = nullptr);

/// A Z - B Z (Y^H B Y)^-1 (Y^H A Y) = B Y, solved with generalized shifts
/// (A - rho_i B) so that B^-1 A is never formed.
Subspace<double> generalized_hermitian_step(const Matrix& a, const Matrix& b,
                                            const Subspace<double>& y,
                                            const StepConfig& cfg = {},
                                            StepDiagnostics* diag = nullptr);

Subspace<double> skew_hamiltonian_step(const Matrix& t, const Subspace<double>& y,
                                       const StepConfig& cfg = {},
                                       StepDiagnostics* diag = nullptr);

Subspace<double> hamiltonian_step(const Matrix& h, const Subspace<double>& y,
                                  const StepConfig& cfg = {}, StepDiagnostics* diag = nullptr);

/// A spectral eigenspace of an E-skew-Hermitian matrix whose spectrum is
/// closed under lambda -> -conj(lambda) (and under conjugation for real C).
struct FullEigenspace {
  std::vector<Complex> eigenvalues;
  Subspace<double> right;
  double max_abs_real = 0.0;
};

/// Groups the spectrum of C into full eigenspaces, ordered by decreasing
/// max |Re lambda|. Pairing tolerance is 1e-8 ||C||_2.
std::vector<FullEigenspace> full_eigenspace_targets(const Matrix& c, const StructureOperator& e);

struct PencilPair {
  Subspace<double> right;        ///< Y_R
  Subspace<double> hatted_left;  ///< B^-H Y_L
};

struct PencilMatrices {
  Matrix a_hat;
  Matrix b_hat;
};

/// Forms A^ = gamma B - delta A and B^ = alpha B - beta A. Throws
/// DegeneratePencil if alpha delta - gamma beta = 0 or B^ is singular.
PencilMatrices pencil_matrices(const Matrix& a, const Matrix& b, const PencilCoefficients& k);

struct PencilStep {
  PencilPair next;
  StepDiagnostics diag;
};

/// One two-sided step for deflating subspaces of A - lambda B.
PencilStep pencil_tsgrqi_step(const Matrix& a, const Matrix& b, const PencilCoefficients& k,
                              const PencilPair& pair, const StepConfig& cfg = {});

/// (1, 0, 0, -1) when B is well conditioned; otherwise up to 50 random
/// (alpha, beta) on the unit circle until cond(B^) < 1e8.
PencilCoefficients choose_pencil_coefficients(const Matrix& a, const Matrix& b,
                                              std::uint64_t seed);

}  // namespace tsgrqi
