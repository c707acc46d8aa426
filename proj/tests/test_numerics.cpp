#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "otto/numerics.hpp"
#include "test_support.hpp"

using namespace otto;
using namespace otto::numerics;
using otto::test::rel_diff;
using otto::test::uniform;

namespace {

template <int N>
Eigen::Matrix<long double, N, N> oracle_exp(const Matrix<N>& a) {
  Eigen::Matrix<long double, N, N> m = a.template cast<long double>();
  return m.exp();
}

// Adjugate / Cramer's rule on a 3x3 system.
Vector3 cramer(const Matrix3& m, const Vector3& b) {
  const double det = m.col(0).dot(m.col(1).cross(m.col(2)));
  Vector3 x;
  for (int i = 0; i < 3; ++i) {
    Matrix3 mi = m;
    mi.col(i) = b;
    x(i) = mi.col(0).dot(mi.col(1).cross(mi.col(2))) / det;
  }
  return x;
}

}  // namespace

TEST_CASE("exp of zero is identity") {
  CHECK(mat_exp<3>(Matrix3(Matrix3::Zero())) == Matrix3::Identity());
  CHECK(mat_exp<4>(Matrix4(Matrix4::Zero()), 7.0) == Matrix4::Identity());
}

TEST_CASE("exp of the diagonal dilation generator") {
  const Matrix3 a2 = Vector3(4.0, 0.0, -4.0).asDiagonal();
  for (double s : {0.1, 0.5, 1.0, 3.0}) {
    const Matrix3 e = mat_exp<3>(a2, s);
    CHECK(e(0, 0) == doctest::Approx(std::exp(4 * s)).epsilon(1e-14));
    CHECK(e(1, 1) == 1.0);
    CHECK(e(2, 2) == doctest::Approx(std::exp(-4 * s)).epsilon(1e-14));
    CHECK(max_abs(e - Matrix3(e.diagonal().asDiagonal())) == 0.0);
  }
}

TEST_CASE("exp of planar rotation generator") {
  Matrix3 a = Matrix3::Zero();
  a(0, 1) = 1.0;
  a(1, 0) = -1.0;
  const Matrix3 e = mat_exp<3>(a, std::numbers::pi / 2);
  Matrix3 expected;
  expected << 0, 1, 0, -1, 0, 0, 0, 0, 1;
  CHECK(max_abs(e - expected) <= 1e-15);
}

TEST_CASE("exp matches a long-double oracle up to norm 50") {
  for (int trial = 0; trial < 200; ++trial) {
    const double scale = uniform(0.01, 12.0);
    const Matrix4 a = test::random_matrix<4>(scale);
    const double t = uniform(-1.0, 1.0);
    const Matrix4 ta = t * a;
    if (inf_norm(ta) > 50.0) continue;
    const auto oracle = oracle_exp<4>(ta);
    const Matrix4 e = mat_exp<4>(a, t);
    const long double err = (e.cast<long double>() - oracle).cwiseAbs().maxCoeff();
    // Normwise relative error.
    CHECK(static_cast<double>(err / oracle.cwiseAbs().rowwise().sum().maxCoeff()) <= 1e-12);
  }
}

TEST_CASE("exp overflow is reported") {
  Matrix3 a = Matrix3::Zero();
  a(0, 0) = 1000.0;
  CHECK_THROWS_AS(mat_exp<3>(a), NumericalError);
  try {
    mat_exp<3>(a);
  } catch (const NumericalError& e) {
    CHECK(e.kind() == NumericalError::Kind::magnitude_overflow);
  }
}

TEST_CASE("det exp equals exp trace") {
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix4 a = test::random_matrix<4>(1.0);
    const double t = uniform(-5.0, 5.0);
    const double det = determinant<4>(mat_exp<4>(a, t));
    INFO("t=", t, " norm=", inf_norm(mat_exp<4>(a, t)), " rel=", det / std::exp(t * a.trace()) - 1);
    CHECK(det == doctest::Approx(std::exp(t * a.trace())).epsilon(1e-9));
  }
}

TEST_CASE("principal log examples") {
  CHECK(max_abs(mat_log_principal<3>(Matrix3(Matrix3::Identity()))) == 0.0);
  const Matrix3 u = Vector3(std::exp(2.0), 1.0, std::exp(-2.0)).asDiagonal();
  ComplexMatrix<3> expected = ComplexMatrix<3>::Zero();
  expected(0, 0) = 2.0;
  expected(2, 2) = -2.0;
  CHECK(max_abs(mat_log_principal<3>(u) - expected) <= 1e-14);
}

TEST_CASE("principal log rejects the branch cut and singular input") {
  Matrix3 u = Matrix3::Identity();
  u(1, 1) = -1.0;
  CHECK_THROWS_WITH_AS(mat_log_principal<3>(u), doctest::Contains("negative real axis"),
                       NumericalError);
  u(1, 1) = 0.0;
  CHECK_THROWS_AS(mat_log_principal<3>(u), NumericalError);
}

TEST_CASE("exp-log round trip") {
  int tested = 0;
  while (tested < 200) {
    const Matrix3 a = test::random_matrix<3>(0.6);
    if (inf_norm(a) > 2.0) continue;
    const auto ev = a.eigenvalues();
    bool in_strip = true;
    for (int i = 0; i < 3; ++i) in_strip &= std::abs(ev(i).imag()) < 3.0;
    if (!in_strip) continue;
    ++tested;
    const ComplexMatrix<3> l = mat_log_principal<3>(mat_exp<3>(a));
    CHECK(max_abs(l - a.cast<Complex>()) <= 1e-8);
  }
}

TEST_CASE("log reconstructs the input and lands in the principal strip") {
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix4 a = test::random_matrix<4>(2.5);
    const Matrix4 u = mat_exp<4>(a);
    ComplexMatrix<4> l;
    try {
      l = mat_log_principal<4>(u);
    } catch (const NumericalError&) {
      continue;
    }
    const ComplexMatrix<4> back = mat_exp<4>(l);
    CHECK(max_abs(back - u.cast<Complex>()) <= 1e-9 * inf_norm(u));
    const auto ev = l.eigenvalues();
    for (int i = 0; i < 4; ++i) {
      CHECK(ev(i).imag() > -std::numbers::pi - 1e-9);
      CHECK(ev(i).imag() <= std::numbers::pi + 1e-9);
    }
    const Matrix4 oracle = u.log();
    CHECK(max_abs(l.real() - oracle) <= 1e-8 * std::max(1.0, max_abs(l.real())));
  }
}

TEST_CASE("eig of a diagonal matrix") {
  const Matrix3 a = Vector3(4.0, 0.0, -4.0).asDiagonal();
  const Spectrum<3> s = eig<3>(a);
  CHECK(s.eigenvalues(0) == Complex(4.0));
  CHECK(s.eigenvalues(1) == Complex(0.0));
  CHECK(s.eigenvalues(2) == Complex(-4.0));
  CHECK(max_abs(s.eigenvectors - ComplexMatrix<3>::Identity()) <= 1e-15);
  CHECK(s.condition == doctest::Approx(1.0));
}

TEST_CASE("eig residual, normalization and reconstruction contracts") {
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix4 a = test::random_matrix<4>(uniform(0.1, 100.0));
    const Spectrum<4> s = eig<4>(a);
    const double norm = inf_norm(a);
    for (int k = 0; k < 4; ++k) {
      const auto v = s.eigenvectors.col(k);
      CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
      CHECK(max_abs(a.cast<Complex>() * v - s.eigenvalues(k) * v) <= 1e-9 * norm);
    }
    for (int k = 1; k < 4; ++k) {
      CHECK(s.eigenvalues(k - 1).real() >= s.eigenvalues(k).real());
    }
    if (s.condition > 1e-3) {
      const ComplexMatrix<4> rebuilt =
          s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.inverse();
      CHECK(max_abs(rebuilt - a.cast<Complex>()) <= 1e-7 * norm);
    }
  }
}

TEST_CASE("eig of a graded block-triangular propagator contains 1") {
  Matrix4 u;
  u << 0.3, 0.01, 0.0, 12.0, -40.0, 0.2, 0.05, 3.0, 900.0, -2.0, 0.1, 250.0, 0, 0, 0, 1;
  const Spectrum<4> s = eig<4>(u);
  bool has_one = false;
  for (int k = 0; k < 4; ++k) has_one |= std::abs(s.eigenvalues(k) - 1.0) <= 1e-12;
  CHECK(has_one);
}

TEST_CASE("eig of a Jordan block has vanishing condition") {
  Matrix3 j = Matrix3::Zero();
  j(0, 0) = j(1, 1) = 1.0;
  j(0, 1) = 1.0;
  j(2, 2) = 0.5;
  const Spectrum<3> s = eig<3>(j);
  CHECK(s.condition <= 1e-6);
}

TEST_CASE("eig phase convention") {
  for (int trial = 0; trial < 50; ++trial) {
    const Spectrum<3> s = eig<3>(test::random_matrix<3>(1.0));
    for (int k = 0; k < 3; ++k) {
      int first = 0;
      while (std::abs(s.eigenvectors(first, k)) <= 1e-12) ++first;
      CHECK(s.eigenvectors(first, k).imag() == 0.0);
      CHECK(s.eigenvectors(first, k).real() > 0.0);
    }
  }
}

TEST_CASE("solve_linear examples") {
  const Vector4 b(1.0, -2.0, 3.5, 1e3);
  CHECK(solve_linear<4>(Matrix4(Matrix4::Identity()), b) == b);
  Matrix3 m = test::random_matrix<3>(1.0);
  m.row(1).setZero();
  CHECK_THROWS_WITH_AS(solve_linear<3>(m, Vector3::Ones()), doctest::Contains("singular"),
                       NumericalError);
}

TEST_CASE("solve_linear agrees with Cramer's rule") {
  int tested = 0;
  while (tested < 200) {
    const Matrix3 m = test::random_matrix<3>(1.0);
    const Eigen::JacobiSVD<Matrix3> svd(m);
    const auto sv = svd.singularValues();
    if (sv(0) / sv(2) > 1e3) continue;
    ++tested;
    const Vector3 b = test::random_matrix<3>(5.0).col(0);
    const Vector3 x = solve_linear<3>(m, b);
    const Vector3 oracle = cramer(m, b);
    CHECK(max_abs(x - oracle) <= 1e-9 * std::max(1.0, max_abs(oracle)));
    CHECK((m * x - b).norm() <= 1e-10 * (m.norm() * x.norm() + b.norm()));
  }
}

TEST_CASE("coalescence tolerance is relative above unit modulus") {
  CHECK(coalescing(Complex(1.0), Complex(1.0 + 5e-7)));
  CHECK_FALSE(coalescing(Complex(1.0), Complex(1.0 + 2e-6)));
  CHECK(coalescing(Complex(100.0), Complex(100.0 + 5e-5)));
}
