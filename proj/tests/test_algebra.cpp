#include <cmath>

#include "doctest.h"
#include "otto/algebra.hpp"
#include "otto/error.hpp"
#include "test_support.hpp"

using namespace otto;
using namespace otto::algebra;

namespace {

Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Position and momentum in a truncated number basis; products of two of them
// are exact on the leading block far from the truncation edge.
struct FockOperators {
  Eigen::MatrixXcd q2, d, p2;
};

FockOperators fock_operators(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd ad = a.adjoint();
  const std::complex<double> i(0.0, 1.0);
  const Eigen::MatrixXcd q = (a + ad) / std::sqrt(2.0);
  const Eigen::MatrixXcd p = i * (ad - a) / std::sqrt(2.0);
  return {q * q, q * p + p * q, p * p};
}

}  // namespace

TEST_CASE("oscillator adjoint matrices match the printed table") {
  const auto a = adjoint_matrices(oscillator_algebra());
  Eigen::Matrix3d a1, a2, a3;
  a1 << 0, 0, 0, -4, 0, 0, 0, -2, 0;
  a2 << 4, 0, 0, 0, 0, 0, 0, 0, -4;
  a3 << 0, 2, 0, 0, 0, 4, 0, 0, 0;
  CHECK(max_abs(a[0] - a1) == 0.0);
  CHECK(max_abs(a[1] - a2) == 0.0);
  CHECK(max_abs(a[2] - a3) == 0.0);
  // [A1,A2] = 4 A1, [A2,A3] = 4 A3, [A3,A1] = -2 A2
  CHECK(max_abs(commutator(a[0], a[1]) - 4 * a[0]) <= 1e-12);
  CHECK(max_abs(commutator(a[1], a[2]) - 4 * a[2]) <= 1e-12);
  CHECK(max_abs(commutator(a[2], a[0]) + 2 * a[1]) <= 1e-12);
}

TEST_CASE("oscillator structure constants agree with operator commutators") {
  const int dim = 40;
  const int block = 12;
  const FockOperators f = fock_operators(dim);
  const std::complex<double> i(0.0, 1.0);
  const std::vector<Eigen::MatrixXcd> ops = {i * f.q2, i * f.d, i * f.p2};
  const LieStructure s = oscillator_algebra();
  for (int h = 0; h < 3; ++h)
    for (int j = 0; j < 3; ++j) {
      const Eigen::MatrixXcd c = ops[h] * ops[j] - ops[j] * ops[h];
      Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(dim, dim);
      for (int k = 0; k < 3; ++k) rebuilt += s(h, j, k) * ops[k];
      CHECK((c - rebuilt).topLeftCorner(block, block).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("transposed adjoint matrices form a representation") {
  for (const LieStructure& s : {oscillator_algebra(), spin_algebra(), gell_mann_basis(3)}) {
    const auto a = adjoint_matrices(s);
    for (int h = 0; h < s.n; ++h)
      for (int j = 0; j < s.n; ++j) {
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(s.n, s.n);
        for (int k = 0; k < s.n; ++k) rhs -= s(h, j, k) * a[k];
        CHECK(max_abs(commutator(a[h], a[j]) - rhs) <= 1e-12);
      }
  }
}

TEST_CASE("abelian algebra has zero adjoints and Killing form") {
  const auto a = adjoint_matrices(abelian_algebra(1));
  REQUIRE(a.size() == 1);
  CHECK(a[0].rows() == 1);
  CHECK(a[0](0, 0) == 0.0);
  const KillingForm k = killing_form(abelian_algebra(4));
  CHECK(max_abs(k.matrix) == 0.0);
  CHECK(k.definiteness == Definiteness::zero);
}

TEST_CASE("spin adjoints are skew and close with sqrt(2)") {
  const auto a = adjoint_matrices(spin_algebra());
  const double r = std::sqrt(2.0);
  for (const auto& m : a) CHECK(max_abs(m + m.transpose()) == 0.0);
  CHECK(max_abs(commutator(a[0], a[1]) - r * a[2]) <= 1e-12);
  CHECK(max_abs(commutator(a[1], a[2]) - r * a[0]) <= 1e-12);
  CHECK(max_abs(commutator(a[2], a[0]) - r * a[1]) <= 1e-12);
}

TEST_CASE("spin structure constants agree with Pauli-matrix commutators") {
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  const double r = std::sqrt(2.0);
  const LieStructure from_ops = structure_from_matrices({i * s1 / r, i * s2 / r, i * s3 / r});
  const LieStructure builtin = spin_algebra();
  for (std::size_t n = 0; n < builtin.gamma.size(); ++n)
    CHECK(from_ops.gamma[n] == doctest::Approx(builtin.gamma[n]).epsilon(1e-14));
}

TEST_CASE("Lie checks on built-ins and fault injection") {
  for (const LieStructure& s : {oscillator_algebra(), spin_algebra()}) {
    const LieCheck c = check_lie_algebra(s);
    CHECK(c.antisymmetric_first_pair);
    CHECK(c.jacobi_residual <= 1e-12);
  }
  LieStructure bad = oscillator_algebra();
  bad(2, 0, 1) = -2.0;  // antisymmetry partner left unchanged
  const LieCheck c = check_lie_algebra(bad);
  CHECK_FALSE(c.antisymmetric_first_pair);
  CHECK(c.jacobi_residual > 0.1);
}

TEST_CASE("Jacobi residual matches nested matrix commutators") {
  // Independent evaluation: the transposed adjoints satisfy the bracket
  // relations only when the Jacobi identity holds.
  LieStructure bad = spin_algebra();
  bad(0, 1, 0) = 1.0;
  bad(1, 0, 0) = -1.0;
  const auto a = adjoint_matrices(bad);
  double defect = 0.0;
  for (int h = 0; h < 3; ++h)
    for (int j = 0; j < 3; ++j) {
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(3, 3);
      for (int k = 0; k < 3; ++k) rhs -= bad(h, j, k) * a[k];
      defect = std::max(defect, max_abs(commutator(a[h], a[j]) - rhs));
    }
  const LieCheck c = check_lie_algebra(bad);
  CHECK(c.antisymmetric_first_pair);
  CHECK(defect > 0.1);
  CHECK(c.jacobi_residual > 0.1);
}

TEST_CASE("oscillator Killing form is indefinite") {
  const KillingForm k = killing_form(oscillator_algebra());
  Eigen::Matrix3d expected;
  expected << 0, 0, -16, 0, 32, 0, -16, 0, 0;
  CHECK(max_abs(k.matrix - expected) == 0.0);
  CHECK(k.eigenvalues(0) == doctest::Approx(-16.0).epsilon(1e-14));
  CHECK(k.eigenvalues(1) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(k.eigenvalues(2) == doctest::Approx(32.0).epsilon(1e-14));
  CHECK(k.definiteness == Definiteness::indefinite);
}

TEST_CASE("spin Killing form is a negative multiple of the identity") {
  const KillingForm k = killing_form(spin_algebra());
  CHECK(max_abs(k.matrix + 4.0 * Eigen::Matrix3d::Identity()) <= 1e-14);
  CHECK(k.definiteness == Definiteness::negative_definite);
}

TEST_CASE("total antisymmetry dichotomy") {
  CHECK(is_totally_antisymmetric(spin_algebra()).totally_antisymmetric);
  const AntisymmetryCheck osc = is_totally_antisymmetric(oscillator_algebra());
  CHECK_FALSE(osc.totally_antisymmetric);
  CHECK(osc.max_violation >= 2.0);
  CHECK(is_totally_antisymmetric(gell_mann_basis(2)).totally_antisymmetric);
}

TEST_CASE("su(M) families") {
  for (int m = 2; m <= 5; ++m) {
    const LieStructure s = gell_mann_basis(m);
    CHECK(s.n == m * m - 1);
    const LieCheck c = check_lie_algebra(s);
    CHECK(c.antisymmetric_first_pair);
    CHECK(c.jacobi_residual <= 1e-12);
    const AntisymmetryCheck t = is_totally_antisymmetric(s);
    CHECK(t.totally_antisymmetric);
    const KillingForm k = killing_form(s);
    CHECK(k.definiteness == Definiteness::negative_definite);
    // Orthonormal generators: K = -2M I.
    CHECK(max_abs(k.matrix + 2.0 * m * Eigen::MatrixXd::Identity(s.n, s.n)) <= 1e-12);
  }
  CHECK_THROWS_AS(gell_mann_basis(1), NumericalError);
  CHECK_THROWS_AS(gell_mann_basis(6), NumericalError);
}

TEST_CASE("su(2) is isomorphic to the spin algebra") {
  const LieStructure su2 = gell_mann_basis(2);
  const KillingForm k = killing_form(su2);
  CHECK(max_abs(k.matrix + 4.0 * Eigen::Matrix3d::Identity()) <= 1e-12);
  for (double g : su2.gamma) {
    const bool allowed = std::abs(g) <= 1e-14 || std::abs(std::abs(g) - std::sqrt(2.0)) <= 1e-14;
    CHECK(allowed);
  }
}

TEST_CASE("u(2) keeps antisymmetry and gains one Killing zero mode") {
  const LieStructure u2 = gell_mann_basis(2, true);
  CHECK(u2.n == 4);
  CHECK(is_totally_antisymmetric(u2).totally_antisymmetric);
  const KillingForm k = killing_form(u2);
  CHECK(k.definiteness == Definiteness::negative_semidefinite);
  int zeros = 0;
  for (double v : k.eigenvalues) zeros += std::abs(v) <= 1e-10;
  CHECK(zeros == 1);
  CHECK_THROWS_AS(orthonormalize_killing(u2), NumericalError);
}

TEST_CASE("textbook diagonal scaling is restored by Killing orthonormalization") {
  const LieStructure raw = gell_mann_basis(3, false, GellMannScaling::textbook);
  CHECK_FALSE(is_totally_antisymmetric(raw).totally_antisymmetric);
  const LieStructure ortho = orthonormalize_killing(raw);
  const KillingForm k = killing_form(ortho);
  CHECK(max_abs(k.matrix + Eigen::MatrixXd::Identity(8, 8)) <= 1e-12);
  CHECK(is_totally_antisymmetric(ortho).max_violation <= 1e-12);
  CHECK(check_lie_algebra(ortho).jacobi_residual <= 1e-12);
}

TEST_CASE("change of basis matches explicit matrix brackets") {
  const auto gens = gell_mann_matrices(2);
  Eigen::Matrix3d c;
  c << 1.0, 0.5, 0.0, -0.3, 2.0, 0.1, 0.0, 0.7, -1.2;
  std::vector<Eigen::MatrixXcd> mixed(3, Eigen::MatrixXcd::Zero(2, 2));
  for (int a = 0; a < 3; ++a)
    for (int m = 0; m < 3; ++m) mixed[a] += c(a, m) * gens[m];
  const LieStructure direct = structure_from_matrices(mixed);
  const LieStructure transformed = change_basis(gell_mann_basis(2), c);
  for (std::size_t n = 0; n < direct.gamma.size(); ++n)
    CHECK(transformed.gamma[n] == doctest::Approx(direct.gamma[n]).epsilon(1e-12));
}

TEST_CASE("transformed Killing form") {
  const KillingForm k = killing_form(gell_mann_basis(3));
  const KillingForm same = transformed_killing(Eigen::MatrixXd::Identity(8, 8), k);
  CHECK(max_abs(same.matrix - k.matrix) == 0.0);

  const KillingForm minus_identity = classify_form(-Eigen::MatrixXd::Identity(5, 5));
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = 1 + trial % 5;
    Eigen::MatrixXd c(rows, 5);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < 5; ++j) c(i, j) = test::uniform(-1.0, 1.0);
    const KillingForm kp = transformed_killing(c, minus_identity);
    CHECK(max_abs(kp.matrix + c * c.transpose()) <= 1e-14);
    CHECK(max_abs(kp.matrix - kp.matrix.transpose()) == 0.0);
    CHECK(kp.definiteness == Definiteness::negative_definite);
  }

  Eigen::MatrixXd rank_deficient(2, 5);
  rank_deficient << 1, 2, 3, 4, 5, 2, 4, 6, 8, 10;
  CHECK_THROWS_AS(transformed_killing(rank_deficient, minus_identity), NumericalError);
}

TEST_CASE("sub-block of orthonormalized su(2)") {
  const LieStructure ortho = orthonormalize_killing(gell_mann_basis(2));
  const KillingForm k = killing_form(ortho);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(3, 3).topRows(2);
  const KillingForm sub = transformed_killing(c, k);
  CHECK(sub.matrix.rows() == 2);
  CHECK(max_abs(sub.matrix + Eigen::MatrixXd::Identity(2, 2)) <= 1e-12);
  CHECK(sub.definiteness == Definiteness::negative_definite);
}

TEST_CASE("JSON round trip") {
  const LieStructure s = gell_mann_basis(3);
  const auto j = to_json(s);
  CHECK(j["gamma"].size() == 512);
  const LieStructure back = lie_structure_from_json(nlohmann::ordered_json::parse(j.dump()));
  CHECK(back.n == s.n);
  CHECK(back.labels == s.labels);
  CHECK(back.gamma == s.gamma);
  nlohmann::ordered_json broken = j;
  broken["gamma"].erase(0);
  CHECK_THROWS_AS(lie_structure_from_json(broken), NumericalError);
}
