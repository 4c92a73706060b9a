// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace tsgrqi;
using namespace tsgrqi::test;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

bool throws_code(auto&& fn, ErrorCode code)
{
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_SUITE("orthonormalize")
{
  TEST_CASE("orthonormal input keeps its span")
  {
    CounterRng rng(11);
    const Matrix q = random_unitary(6, rng).leftCols(3);
    const auto s = orthonormalize<double>(q);
    CHECK(projector_distance(s.basis(), q) <= 1e-12);
  }

  TEST_CASE("scaling does not change the span")
  {
    const Matrix z = 2.0 * unit_columns(5, {0, 1});
    const auto s = orthonormalize<double>(z);
    CHECK(projector_distance(s.basis(), unit_columns(5, {0, 1})) <= 1e-14);
  }

  TEST_CASE("random 20x5 complex matrix")
  {
    CounterRng rng(12);
    const Matrix z = complex_normal(20, 5, rng);
    const auto s = orthonormalize<double>(z);
    const Matrix gram_defect = s.basis().adjoint() * s.basis() - Matrix::Identity(5, 5);
    CHECK(spectral_norm(gram_defect) <= 1e-12);
    const Matrix pz = z * (z.adjoint() * z).inverse() * z.adjoint();
    CHECK(spectral_norm(Matrix(s.basis() * s.basis().adjoint() - pz)) <= 1e-10);
  }

  TEST_CASE("idempotent up to a unitary factor")
  {
    CounterRng rng(13);
    const auto s1 = orthonormalize<double>(complex_normal(9, 4, rng));
    const auto s2 = orthonormalize<double>(s1.basis());
    CHECK(projector_distance(s1.basis(), s2.basis()) <= 1e-13);
  }

  TEST_CASE("rank deficiency is reported")
  {
    Matrix z(4, 2);
    z.col(0) << 1, 2, 3, 4;
    z.col(1) = 3.0 * z.col(0);
    CHECK(throws_code([&] { orthonormalize<double>(z); }, ErrorCode::RankDeficient));
    CHECK(throws_code([&] { orthonormalize<double>(Matrix::Zero(3, 1)); }, ErrorCode::RankDeficient));
    Matrix bad = Matrix::Identity(3, 1);
    bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK(throws_code([&] { orthonormalize<double>(bad); }, ErrorCode::RankDeficient));
  }

  TEST_CASE("adopt rejects a non-orthonormal basis")
  {
    CHECK(throws_code([] { Subspace<double>::adopt(2.0 * Matrix::Identity(3, 1)); },
                      ErrorCode::RankDeficient));
    CHECK_NOTHROW(Subspace<double>::adopt(Matrix::Identity(3, 2)));
  }
}

TEST_SUITE("principal angles")
{
  TEST_CASE("identical subspaces")
  {
    CounterRng rng(21);
    const auto u = orthonormalize<double>(complex_normal(8, 3, rng));
    CHECK(largest_principal_angle(u, u) <= 1e-15);
  }

  TEST_CASE("orthogonal lines in C^2")
  {
    const auto u = span_of(unit_columns(2, {0}));
    const auto v = span_of(unit_columns(2, {1}));
    CHECK(largest_principal_angle(u, v) == doctest::Approx(kHalfPi).epsilon(1e-15));
  }

  TEST_CASE("tan of the angle equals ||K||")
  {
    CounterRng rng(22);
    const Matrix x = random_unitary(7, rng);
    const Matrix k = complex_normal(4, 3, rng) * 0.3;
    const auto base = span_of(x.leftCols(3));
    const auto moved = span_of(Matrix(x.leftCols(3) + x.rightCols(4) * k));
    CHECK(std::tan(largest_principal_angle(base, moved)) ==
          doctest::Approx(spectral_norm(k)).epsilon(1e-12));
  }

  TEST_CASE("small angles keep relative accuracy")
  {
    const double theta = 1e-14;
    Matrix v(2, 1);
    v << std::cos(theta), std::sin(theta);
    const double got = largest_principal_angle(span_of(unit_columns(2, {0})), span_of(v));
    CHECK(got == doctest::Approx(theta).epsilon(1e-10));
  }

  TEST_CASE("symmetric and nonnegative")
  {
    CounterRng rng(23);
    for (int t = 0; t < 20; ++t) {
      const auto u = orthonormalize<double>(complex_normal(6, 2, rng));
      const auto v = orthonormalize<double>(complex_normal(6, 2, rng));
      const double a = largest_principal_angle(u, v);
      CHECK(a >= 0.0);
      CHECK(a <= kHalfPi);
      CHECK(a == doctest::Approx(largest_principal_angle(v, u)).epsilon(1e-12));
    }
  }

  TEST_CASE("dimension mismatch")
  {
    const auto u = span_of(unit_columns(4, {0}));
    const auto v = span_of(unit_columns(4, {0, 1}));
    CHECK(throws_code([&] { largest_principal_angle(u, v); }, ErrorCode::DimensionMismatch));
  }
}

TEST_SUITE("hermitian angle")
{
  TEST_CASE("equal, orthogonal and phase-shifted vectors")
  {
    Vector x(3);
    x << Complex(1, 2), Complex(0, -1), Complex(3, 0);
    CHECK(hermitian_angle<double>(x, x) <= 1e-15);
    CHECK(hermitian_angle<double>(x, Complex(0, 1) * x) <= 1e-15);
    CHECK(hermitian_angle<double>(x, Complex(-2.5, 0.7) * x) <= 1e-15);
    Vector y = unit_columns(3, {0});
    y -= x * (x.dot(y) / x.squaredNorm());
    REQUIRE(std::abs(x.dot(y)) <= 1e-15);
    CHECK(hermitian_angle<double>(x, y) == doctest::Approx(kHalfPi));
  }

  TEST_CASE("zero vector")
  {
    Vector x = Vector::Ones(2);
    CHECK(throws_code([&] { hermitian_angle<double>(x, Vector::Zero(2)); }, ErrorCode::ZeroVector));
  }
}

TEST_SUITE("residual angle")
{
  TEST_CASE("exact eigenspace gives zero")
  {
    CounterRng rng(31);
    const Matrix q = random_unitary(5, rng);
    const Matrix c = q * diag({1, 2, 3, 4, 5}) * q.adjoint();
    CHECK(residual_angle<double>(c, span_of(q.leftCols(2))) <= 1e-12);
  }

  TEST_CASE("whole space")
  {
    CounterRng rng(32);
    const Matrix c = complex_normal(4, 4, rng);
    CHECK(residual_angle<double>(c, span_of(Matrix::Identity(4, 4))) == 0.0);
  }

  TEST_CASE("matches a brute-force SVD computation")
  {
    const Matrix c = diag({1, 2, 3});
    Matrix y = Matrix::Zero(3, 2);
    y(0, 0) = 1;
    y(2, 0) = 1;
    y(1, 1) = 1;
    const auto ys = span_of(y);
    const double got = residual_angle<double>(c, ys);
    CHECK(got > 0.0);
    // span(Y) = span(e1+e3, e2); span(CY) = span(e1+3e3, e2). The angle is
    // between the lines (1,0,1) and (1,0,3), the e2 directions coincide.
    const double expected = std::acos(4.0 / (std::sqrt(2.0) * std::sqrt(10.0)));
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    Eigen::JacobiSVD<Matrix> svd(Matrix(ys.basis().adjoint() * orthonormalize<double>(Matrix(c * y)).basis()));
    CHECK(std::acos(svd.singularValues()(1)) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_SUITE("small_eig")
{
  auto reconstruct = [](const Matrix& r, const BlockShift<double>& s) {
    const Matrix rebuilt = s.eigvecs * s.shifts.asDiagonal() * s.eigvecs.inverse();
    return spectral_norm(Matrix(r - rebuilt));
  };

  TEST_CASE("identity")
  {
    const auto s = small_eig<double>(Matrix::Identity(2, 2));
    CHECK(std::abs(s.shifts(0) - 1.0) == 0.0);
    CHECK(std::abs(s.shifts(1) - 1.0) == 0.0);
    CHECK(s.cond == doctest::Approx(1.0));
  }

  TEST_CASE("diag(1,2)")
  {
    const Matrix r = diag({1, 2});
    const auto s = small_eig<double>(r);
    std::vector<double> re{s.shifts(0).real(), s.shifts(1).real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(1.0));
    CHECK(re[1] == doctest::Approx(2.0));
    CHECK(reconstruct(r, s) <= 1e-14);
  }

  TEST_CASE("symmetric involution")
  {
    Matrix r(2, 2);
    r << 0, 1, 1, 0;
    const auto s = small_eig<double>(r);
    std::vector<double> re{s.shifts(0).real(), s.shifts(1).real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-1.0));
    CHECK(re[1] == doctest::Approx(1.0));
    CHECK(reconstruct(r, s) <= 1e-14);
  }

  TEST_CASE("random blocks reconstruct")
  {
    CounterRng rng(41);
    for (Index p : {1, 2, 3, 5}) {
      for (int t = 0; t < 20; ++t) {
        const Matrix r = complex_normal(p, p, rng);
        const auto s = small_eig<double>(r);
        CHECK(reconstruct(r, s) <= 1e-10 * std::max(1.0, spectral_norm(r)));
        CHECK(s.cond >= 1.0 - 1e-12);
      }
    }
  }

  TEST_CASE("2x2 with a tiny off-diagonal entry")
  {
    Matrix r(2, 2);
    r << 3, 1e-17, 0, 1;
    const auto s = small_eig<double>(r);
    CHECK(reconstruct(r, s) <= 1e-14);
  }

  TEST_CASE("near-defective blocks")
  {
    Matrix r(2, 2);
    r << 1, 1, 0, 1 + 1e-12;
    const auto loose = small_eig<double>(r);
    CHECK(loose.near_defective);
    CHECK(throws_code([&] { small_eig<double>(r, {1e8, true}); }, ErrorCode::NearDefective));
  }
}

TEST_SUITE("shifted_solve")
{
  TEST_CASE("diagonal and scalar examples")
  {
    auto s = shifted_solve<double>(diag({1, 2}), Complex(0), Vector(unit_columns(2, {0})));
    CHECK(!s.perturbed);
    CHECK((s.z - Vector(unit_columns(2, {0}))).norm() <= 1e-15);

    Vector one = Vector::Ones(1);
    s = shifted_solve<double>(diag({2}), Complex(1), one);
    CHECK(!s.perturbed);
    CHECK(std::abs(s.z(0) - 1.0) <= 1e-15);
  }

  TEST_CASE("singular shift takes the perturbed path")
  {
    const Vector e1 = unit_columns(2, {0});
    const auto s = shifted_solve<double>(diag({1, 2}), Complex(1), e1);
    CHECK(s.perturbed);
    CHECK(hermitian_angle<double>(s.z, e1) <= 1e-8);
    const double eps = 1e3 * std::numeric_limits<double>::epsilon() * std::sqrt(5.0);
    CHECK(std::abs(s.z(0)) == doctest::Approx(1.0 / eps).epsilon(1e-10));
  }

  TEST_CASE("residual bound on unperturbed solves")
  {
    CounterRng rng(51);
    for (int t = 0; t < 50; ++t) {
      const Matrix c = complex_normal(8, 8, rng);
      const Vector b = complex_normal(8, 1, rng);
      const Complex rho(standard_normal(1, 1, rng)(0), 0.5);
      const auto s = shifted_solve<double>(c, rho, b);
      REQUIRE(!s.perturbed);
      Matrix shifted = c;
      shifted.diagonal().array() -= rho;
      CHECK((shifted * s.z - b).norm() <= 1e-10 * spectral_norm(shifted) * s.z.norm());
    }
  }

  TEST_CASE("pencil solve with a singular generalized shift")
  {
    const Matrix a = diag({2, 6});
    const Matrix b = diag({1, 2});
    const Vector e1 = unit_columns(2, {0});
    const auto s = pencil_shifted_solve<double>(a, b, Complex(2), e1);
    CHECK(s.perturbed);
    CHECK(hermitian_angle<double>(s.z, e1) <= 1e-8);
  }
}

TEST_SUITE("sylvester_solve")
{
  TEST_CASE("closed form for the ill-conditioned 2x2 example")
  {
    for (double delta : {0.1, 0.01}) {
      for (double eta : {0.01, 0.001}) {
        if (delta == eta) continue;  // shared eigenvalue, covered below
        Matrix a(2, 2);
        a << 0, 1, 0, delta;
        Matrix b = a;
        b(0, 0) += eta;
        b(1, 1) += eta / 2;
        const Matrix x = sylvester_solve<double>(a, b, Matrix::Identity(2, 2));
        Matrix expected(2, 2);
        expected << -1 / eta, -2 / (eta * (2 * delta + eta)), 0, -2 / eta;
        CHECK(spectral_norm(Matrix(x - expected)) <= 1e-8 * spectral_norm(expected));
        Matrix expected_inv(2, 2);
        expected_inv << -eta, eta / (2 * delta + eta), 0, -eta / 2;
        CHECK(spectral_norm(Matrix(x.inverse() - expected_inv)) <= 1e-8 * spectral_norm(expected_inv));
      }
    }
  }

  TEST_CASE("the 2x2 example is singular when delta = eta")
  {
    Matrix a(2, 2);
    a << 0, 1, 0, 0.01;
    Matrix b = a;
    b(0, 0) += 0.01;
    b(1, 1) += 0.005;
    CHECK(throws_code([&] { sylvester_solve<double>(a, b, Matrix::Identity(2, 2)); },
                      ErrorCode::SpectraOverlap));
  }

  TEST_CASE("1x1 and zero right-hand side")
  {
    Matrix one = Matrix::Constant(1, 1, 1.0);
    Matrix two = Matrix::Constant(1, 1, 2.0);
    const Matrix x = sylvester_solve<double>(one, two, Matrix::Constant(1, 1, -1.0));
    CHECK(std::abs(x(0, 0) - 1.0) <= 1e-15);
    const Matrix z = sylvester_solve<double>(diag({1, 2}), diag({3}), Matrix::Zero(2, 1));
    CHECK(z.norm() == 0.0);
  }

  TEST_CASE("overlapping spectra")
  {
    CHECK(throws_code([] { sylvester_solve<double>(diag({1, 2}), diag({2, 5}), Matrix::Ones(2, 2)); },
                      ErrorCode::SpectraOverlap));
  }

  TEST_CASE("residual bound on random disjoint-spectrum instances")
  {
    CounterRng rng(61);
    for (int t = 0; t < 1000; ++t) {
      const Index p = 1 + Index(t % 4);
      const Index q = 1 + Index((t / 4) % 5);
      const Matrix a = complex_normal(p, p, rng);
      Matrix b = complex_normal(q, q, rng);
      b.diagonal().array() += 6.0;
      const Matrix qm = complex_normal(p, q, rng);
      const Matrix x = sylvester_solve<double>(a, b, qm);
      const double scale = spectral_norm(a) + spectral_norm(b);
      CHECK(spectral_norm(Matrix(a * x - x * b - qm)) <= 1e-9 * scale * std::max(1.0, spectral_norm(x)));
    }
  }
}
