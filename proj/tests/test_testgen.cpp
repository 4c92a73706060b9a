// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <set>

#include "support.hpp"
#include "tsgrqi/structured.hpp"

using namespace tsgrqi;
using namespace tsgrqi::test;

TEST_SUITE("rng")
{
  TEST_CASE("streams are reproducible and distinct")
  {
    CounterRng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    CounterRng s0 = CounterRng(7).stream(0), s1 = CounterRng(7).stream(1);
    CHECK(s0.key() == 7);
    CHECK(s0() != s1());
  }

  TEST_CASE("uniform_open stays inside the interval")
  {
    CounterRng rng(3);
    for (int i = 0; i < 10000; ++i) {
      const double u = uniform_open(0.0, 0.1, rng);
      CHECK((u > 0.0 && u < 0.1));
    }
  }

  TEST_CASE("random_permutation covers 1..n")
  {
    CounterRng rng(4);
    auto perm = random_permutation(20, rng);
    std::sort(perm.begin(), perm.end());
    for (int i = 0; i < 20; ++i) CHECK(perm[i] == i + 1);
  }
}

TEST_SUITE("random_diagonalizable")
{
  TEST_CASE("construction invariants")
  {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CounterRng rng(seed);
      const auto g = random_diagonalizable<double>(20, 5, rng);
      const Matrix s_minus_i = g.s - Matrix::Identity(20, 20);
      CHECK(spectral_norm(s_minus_i) == doctest::Approx(g.alpha).epsilon(1e-12));
      CHECK((g.alpha > 0.0 && g.alpha < 0.1));
      CHECK(g.c.imag().norm() == 0.0);

      Eigen::ComplexEigenSolver<Matrix> es(g.c);
      std::vector<double> ev;
      for (Index i = 0; i < 20; ++i) ev.push_back(es.eigenvalues()(i).real());
      std::sort(ev.begin(), ev.end());
      for (int i = 0; i < 20; ++i) CHECK(ev[i] == doctest::Approx(i + 1).epsilon(1e-10));

      CHECK(residual_angle<double>(g.c, g.oracle_right) <= 1e-13);
      CHECK(residual_angle<double>(Matrix(g.c.adjoint()), g.oracle_left) <= 1e-13);
      // Left and right spaces are far from orthogonal since S is near I.
      CHECK(smallest_singular_value(Matrix(g.oracle_left.basis().adjoint() * g.oracle_right.basis())) >= 0.8);
      REQUIRE(g.spectrum.size() == 5);
      const Matrix rq = g.oracle_right.basis().adjoint() * g.c * g.oracle_right.basis();
      CHECK(std::abs(rq.trace() - (g.spectrum[0] + g.spectrum[1] + g.spectrum[2] + g.spectrum[3] +
                                   g.spectrum[4])) <= 1e-11);
    }
  }

  TEST_CASE("same seed, same instance")
  {
    CounterRng a(99), b(99);
    const auto x = random_diagonalizable<double>(12, 3, a);
    const auto y = random_diagonalizable<double>(12, 3, b);
    CHECK((x.c - y.c).norm() == 0.0);
    CHECK((x.oracle_left.basis() - y.oracle_left.basis()).norm() == 0.0);
  }

  TEST_CASE("long double draws the same numbers")
  {
    CounterRng a(5), b(5);
    const auto d = random_diagonalizable<double>(8, 2, a);
    const auto l = random_diagonalizable<long double>(8, 2, b);
    CHECK(d.alpha == l.alpha);
    CHECK((d.c - l.c.cast<Complex>()).norm() <= 1e-13);
  }

  TEST_CASE("invalid sizes")
  {
    CounterRng rng(1);
    CHECK_THROWS_AS(random_diagonalizable<double>(5, 5, rng), Error);
    CHECK_THROWS_AS(random_diagonalizable<double>(5, 0, rng), Error);
  }

  TEST_CASE("Hermitian variant")
  {
    CounterRng rng(12);
    const auto g = random_hermitian_diagonalizable<double>(15, 4, rng);
    CHECK((g.c - g.c.adjoint()).norm() == 0.0);
    CHECK((g.oracle_left.basis() - g.oracle_right.basis()).norm() == 0.0);
    CHECK(residual_angle<double>(g.c, g.oracle_right) <= 1e-13);
  }
}

TEST_SUITE("random_hamiltonian")
{
  TEST_CASE("(HJ)^H = HJ and zero trace")
  {
    CounterRng rng(31);
    for (int t = 0; t < 200; ++t) {
      const Matrix h = random_hamiltonian(20, rng);
      const Matrix hj = h * StructureOperator::symplectic(20).to_dense();
      CHECK((hj - hj.adjoint()).norm() <= 1e-14 * h.norm());
      CHECK(std::abs(h.trace()) <= 1e-12 * h.norm());
      CHECK(h.imag().norm() == 0.0);
    }
  }
}

TEST_SUITE("subspace sampling")
{
  TEST_CASE("subspace_at_angle hits the requested angle")
  {
    CounterRng rng(41);
    const auto v = orthonormalize<double>(complex_normal(20, 5, rng));
    for (int t = 0; t < 1000; ++t) {
      const double theta = uniform_open(1e-6, 1.2, rng);
      const auto y = subspace_at_angle(v, theta, rng);
      CHECK(std::abs(angle(y, v) - theta) <= 1e-10 * std::max(1.0, theta));
    }
  }

  TEST_CASE("nearby_subspace stays below the bound")
  {
    CounterRng rng(42);
    const auto v = orthonormalize<double>(complex_normal(10, 2, rng));
    double largest = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const double a = angle(nearby_subspace(v, 0.1, rng), v);
      CHECK(a < 0.1 + 1e-12);
      largest = std::max(largest, a);
    }
    CHECK(largest > 0.09);
    CHECK(angle(nearby_subspace(v, 0.0, rng), v) <= 1e-15);
  }

  TEST_CASE("full-dimensional subspace is returned as is")
  {
    CounterRng rng(43);
    const auto v = span_of(Matrix::Identity(3, 3));
    CHECK(angle(subspace_at_angle(v, 0.3, rng), v) == 0.0);
  }
}

TEST_SUITE("eigenspace oracle")
{
  TEST_CASE("diag(3, 1, 2)")
  {
    const auto top = eigenspace_pair_oracle(diag({3, 1, 2}), EigenSelector::top_modulus(1));
    CHECK(angle(top.right, span_of(unit_columns(3, {0}))) <= 1e-15);
    CHECK(angle(top.left, span_of(unit_columns(3, {0}))) <= 1e-15);
    REQUIRE(top.spectrum.size() == 1);
    CHECK(top.spectrum[0].real() == doctest::Approx(3));

    const auto two = eigenspace_pair_oracle(diag({3, 1, 2}), EigenSelector::top_modulus(2));
    CHECK(angle(two.right, span_of(unit_columns(3, {0, 2}))) <= 1e-15);
  }

  TEST_CASE("recovers the generator's pair")
  {
    CounterRng rng(51);
    for (int t = 0; t < 20; ++t) {
      const auto g = random_diagonalizable<double>(20, 5, rng);
      const auto o = eigenspace_pair_oracle(g.c, EigenSelector::given(
                                                     std::vector<Complex>(g.spectrum.begin(), g.spectrum.end())));
      CHECK(angle(o.right, g.oracle_right) <= 1e-12);
      CHECK(angle(o.left, g.oracle_left) <= 1e-12);
    }
  }

  TEST_CASE("top real part selection")
  {
    const auto o = eigenspace_pair_oracle(diag({1, -5, 2}), EigenSelector::top_abs_real(1));
    CHECK(angle(o.right, span_of(unit_columns(3, {1}))) <= 1e-15);
  }

  TEST_CASE("non-spectral selection and defective matrices")
  {
    CHECK_THROWS_AS(eigenspace_pair_oracle(diag({2, 2, 1}), EigenSelector::top_modulus(1)), Error);
    Matrix jordan = Matrix::Zero(2, 2);
    jordan(0, 0) = jordan(1, 1) = 1;
    jordan(0, 1) = 1;
    CHECK_THROWS_AS(eigenspace_pair_oracle(jordan, EigenSelector::top_modulus(1)), Error);
  }
}

TEST_SUITE("block diagonalizer")
{
  TEST_CASE("2x2 upper triangular")
  {
    Matrix c(2, 2);
    c << 1, 1, 0, 2;
    const auto bd = build_block_diagonalizer(c, Matrix::Identity(2, 2), 1);
    CHECK(std::abs(bd.coupling(0, 0) - Complex(1)) <= 1e-15);
    const Matrix d = bd.s_inv * c * bd.s;
    CHECK(std::abs(d(0, 1)) <= 1e-15);
    CHECK(std::abs(d(1, 0)) <= 1e-15);
    CHECK((bd.s_inv * bd.s - Matrix::Identity(2, 2)).norm() <= 1e-15);
  }

  TEST_CASE("Schur form of a random matrix")
  {
    CounterRng rng(61);
    const Matrix c = complex_normal(8, 8, rng);
    Eigen::ComplexSchur<Matrix> schur(c);
    const auto bd = build_block_diagonalizer(c, schur.matrixU(), 3);
    const Matrix d = bd.s_inv * c * bd.s;
    CHECK(d.topRightCorner(3, 5).norm() <= 1e-12 * c.norm());
    CHECK(d.bottomLeftCorner(5, 3).norm() <= 1e-12 * c.norm());
    CHECK((bd.s_inv * bd.s - Matrix::Identity(8, 8)).norm() <= 1e-12);
  }
}

TEST_SUITE("structured generators")
{
  TEST_CASE("E is well conditioned and indefinite")
  {
    CounterRng rng(71);
    for (bool skew_e : {false, true}) {
      const auto inst = random_e_hermitian(10, skew_e, rng);
      CHECK(condition_number(inst.e) < 2.0 + 1e-12);
      const double sign = skew_e ? -1.0 : 1.0;
      CHECK((inst.e.adjoint() - sign * inst.e).norm() <= 1e-14 * inst.e.norm());
    }
  }

  TEST_CASE("hpd and Hermitian draws")
  {
    CounterRng rng(72);
    const Matrix b = random_hpd(9, rng);
    CHECK((b - b.adjoint()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(condition_number(b) < 10.0);
    const Matrix h = random_hermitian(9, rng);
    CHECK((h - h.adjoint()).norm() == 0.0);
  }
}
