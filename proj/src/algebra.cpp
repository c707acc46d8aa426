#include "otto/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otto/error.hpp"

namespace otto::algebra {

namespace {

void require(bool ok, NumericalError::Kind kind, const std::string& what) {
  if (!ok) throw NumericalError(kind, what);
}

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

}  // namespace

LieStructure::LieStructure(int dim, std::vector<std::string> names)
    : n(dim), gamma(static_cast<std::size_t>(dim) * dim * dim, 0.0), labels(std::move(names)) {
  require(dim >= 1, NumericalError::Kind::invalid_argument, "Lie algebra dimension must be >= 1");
  if (labels.empty()) labels = default_labels(dim);
  require(static_cast<int>(labels.size()) == dim, NumericalError::Kind::invalid_argument,
          "label count does not match algebra dimension");
}

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::negative_definite: return "negative-definite";
    case Definiteness::negative_semidefinite: return "negative-semidefinite";
    case Definiteness::indefinite: return "indefinite";
    case Definiteness::positive_semidefinite: return "positive-semidefinite";
    case Definiteness::positive_definite: return "positive-definite";
    case Definiteness::zero: return "zero";
  }
  return "unknown";
}

std::vector<Eigen::MatrixXd> adjoint_matrices(const LieStructure& s) {
  std::vector<Eigen::MatrixXd> out(s.n, Eigen::MatrixXd::Zero(s.n, s.n));
  for (int h = 0; h < s.n; ++h)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) out[h](j, k) = s(h, j, k);
  return out;
}

LieCheck check_lie_algebra(const LieStructure& s) {
  LieCheck out;
  for (int h = 0; h < s.n; ++h)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k)
        out.antisymmetry_violation =
            std::max(out.antisymmetry_violation, std::abs(s(h, j, k) + s(j, h, k)));
  out.antisymmetric_first_pair = out.antisymmetry_violation <= kIdentityTol;

  // [e_h,[e_j,e_k]] + [e_k,[e_h,e_j]] + [e_j,[e_k,e_h]], component l.
  for (int h = 0; h < s.n; ++h)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k)
        for (int l = 0; l < s.n; ++l) {
          double sum = 0.0;
          for (int m = 0; m < s.n; ++m) {
            sum += s(j, k, m) * s(h, m, l) + s(h, j, m) * s(k, m, l) + s(k, h, m) * s(j, m, l);
          }
          out.jacobi_residual = std::max(out.jacobi_residual, std::abs(sum));
        }
  return out;
}

KillingForm classify_form(const Eigen::MatrixXd& matrix) {
  KillingForm out;
  out.matrix = matrix;
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  out.eigenvalues = solver.eigenvalues();

  const double scale = std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  const double tol = kDefinitenessTol * scale;
  int neg = 0, pos = 0, zero = 0;
  for (double v : out.eigenvalues) {
    if (v < -tol) ++neg;
    else if (v > tol) ++pos;
    else ++zero;
  }
  if (neg == 0 && pos == 0) out.definiteness = Definiteness::zero;
  else if (neg > 0 && pos > 0) out.definiteness = Definiteness::indefinite;
  else if (neg > 0) out.definiteness = zero ? Definiteness::negative_semidefinite : Definiteness::negative_definite;
  else out.definiteness = zero ? Definiteness::positive_semidefinite : Definiteness::positive_definite;
  return out;
}

KillingForm killing_form(const LieStructure& s) {
  const auto a = adjoint_matrices(s);
  Eigen::MatrixXd k(s.n, s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) k(i, j) = (a[i] * a[j]).trace();
  return classify_form(k);
}

AntisymmetryCheck is_totally_antisymmetric(const LieStructure& s) {
  AntisymmetryCheck out;
  for (int h = 0; h < s.n; ++h)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) {
        const double g = s(h, j, k);
        out.max_violation = std::max({out.max_violation, std::abs(g + s(j, h, k)),
                                      std::abs(g + s(h, k, j)), std::abs(g + s(k, j, h))});
      }
  out.totally_antisymmetric = out.max_violation <= kIdentityTol;
  return out;
}

LieStructure structure_from_matrices(const std::vector<Eigen::MatrixXcd>& basis,
                                     std::vector<std::string> labels) {
  const int n = static_cast<int>(basis.size());
  require(n >= 1, NumericalError::Kind::invalid_argument, "empty matrix basis");
  LieStructure s(n, std::move(labels));

  auto inner = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return (x.adjoint() * y).trace().real();
  };
  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gram(a, b) = inner(basis[a], basis[b]);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  require(ldlt.info() == Eigen::Success && ldlt.isPositive() &&
              ldlt.vectorD().minCoeff() > 1e-12 * gram.diagonal().maxCoeff(),
          NumericalError::Kind::degenerate_basis, "matrix basis is linearly dependent");

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Eigen::MatrixXcd c = basis[a] * basis[b] - basis[b] * basis[a];
      Eigen::VectorXd rhs(n);
      for (int k = 0; k < n; ++k) rhs(k) = inner(basis[k], c);
      const Eigen::VectorXd coeff = ldlt.solve(rhs);
      Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(c.rows(), c.cols());
      for (int k = 0; k < n; ++k) {
        s(a, b, k) = coeff(k);
        rebuilt += coeff(k) * basis[k];
      }
      require((rebuilt - c).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, c.cwiseAbs().maxCoeff()),
              NumericalError::Kind::invalid_argument,
              "matrix basis is not closed under commutators");
    }
  return s;
}

std::vector<Eigen::MatrixXcd> gell_mann_matrices(int m, bool with_identity, GellMannScaling scaling) {
  require(m >= 2 && m <= 5, NumericalError::Kind::invalid_argument,
          "Gell-Mann basis supports 2 <= M <= 5, got " + std::to_string(m));
  using Mat = Eigen::MatrixXcd;
  const std::complex<double> i(0.0, 1.0);
  const double rt2 = std::sqrt(2.0);
  std::vector<Mat> out;

  for (int n = 1; n <= m - 1; ++n) {
    const double norm = scaling == GellMannScaling::textbook ? std::sqrt(2.0 / (n * (n + 1)))
                                                             : std::sqrt(1.0 / (n * (n + 1)));
    Mat chi = Mat::Zero(m, m);
    for (int k = 0; k < n; ++k) chi(k, k) = 1.0;
    chi(n, n) = -static_cast<double>(n);
    out.push_back(i * norm * chi);
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      Mat y = Mat::Zero(m, m);
      y(a, b) = 1.0 / rt2;
      y(b, a) = -1.0 / rt2;
      out.push_back(y);
    }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      Mat z = Mat::Zero(m, m);
      z(a, b) = i / rt2;
      z(b, a) = i / rt2;
      out.push_back(z);
    }
  if (with_identity) out.push_back(i / std::sqrt(static_cast<double>(m)) * Mat::Identity(m, m));
  return out;
}

LieStructure gell_mann_basis(int m, bool with_identity, GellMannScaling scaling) {
  std::vector<std::string> labels;
  for (int n = 1; n <= m - 1; ++n) labels.push_back("chi" + std::to_string(n));
  for (const char* family : {"Y", "Z"})
    for (int a = 1; a <= m; ++a)
      for (int b = a + 1; b <= m; ++b)
        labels.push_back(family + std::to_string(a) + std::to_string(b));
  if (with_identity) labels.push_back("1");
  return structure_from_matrices(gell_mann_matrices(m, with_identity, scaling), std::move(labels));
}

LieStructure change_basis(const LieStructure& s, const Eigen::MatrixXd& c) {
  require(c.rows() == s.n && c.cols() == s.n, NumericalError::Kind::invalid_argument,
          "basis change must be square of the algebra dimension");
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(c);
  require(lu.isInvertible(), NumericalError::Kind::degenerate_basis, "basis change is singular");
  const Eigen::MatrixXd cinv = lu.inverse();

  std::vector<std::string> labels;
  for (int a = 1; a <= s.n; ++a) labels.push_back("f" + std::to_string(a));
  LieStructure out(s.n, std::move(labels));
  const int n = s.n;
  // Gamma'_abq = sum C_am C_bn Gamma_mnp (C^-1)_pq
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Eigen::VectorXd mixed = Eigen::VectorXd::Zero(n);
      for (int mi = 0; mi < n; ++mi)
        for (int ni = 0; ni < n; ++ni) {
          const double w = c(a, mi) * c(b, ni);
          if (w == 0.0) continue;
          for (int p = 0; p < n; ++p) mixed(p) += w * s(mi, ni, p);
        }
      const Eigen::VectorXd row = cinv.transpose() * mixed;
      for (int q = 0; q < n; ++q) out(a, b, q) = row(q);
    }
  return out;
}

Eigen::MatrixXd killing_orthonormal_transform(const LieStructure& s) {
  const Eigen::MatrixXd metric = -killing_form(s).matrix;
  const double scale = std::max(1.0, metric.cwiseAbs().maxCoeff());
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(s.n, s.n);
  for (int a = 0; a < s.n; ++a) {
    Eigen::VectorXd v = c.row(a).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (int b = 0; b < a; ++b) {
        const Eigen::VectorXd u = c.row(b).transpose();
        v -= (u.dot(metric * v)) * u;
      }
    const double norm_sq = v.dot(metric * v);
    require(norm_sq > 1e-10 * scale, NumericalError::Kind::degenerate_basis,
            "negative Killing form is not positive definite; no orthonormal basis");
    c.row(a) = v.transpose() / std::sqrt(norm_sq);
  }
  return c;
}

LieStructure orthonormalize_killing(const LieStructure& s) {
  return change_basis(s, killing_orthonormal_transform(s));
}

KillingForm transformed_killing(const Eigen::MatrixXd& c, const KillingForm& k) {
  const auto n = k.matrix.rows();
  require(c.cols() == n && c.rows() <= n && c.rows() >= 1, NumericalError::Kind::invalid_argument,
          "transformation must be N' x N with N' <= N");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  const auto sv = svd.singularValues();
  require(sv(sv.size() - 1) > 1e-12 * std::max(1.0, sv(0)), NumericalError::Kind::degenerate_basis,
          "transformation rows are linearly dependent");
  return classify_form(c * k.matrix * c.transpose());
}

LieStructure oscillator_algebra() {
  LieStructure s(3, {"iQ2", "iD", "iP2"});
  // [iQ2, iD] = -4 iQ2, [iD, iP2] = -4 iP2, [iP2, iQ2] = +2 iD.
  s(0, 1, 0) = -4.0;
  s(1, 0, 0) = 4.0;
  s(1, 2, 2) = -4.0;
  s(2, 1, 2) = 4.0;
  s(2, 0, 1) = 2.0;
  s(0, 2, 1) = -2.0;
  return s;
}

LieStructure spin_algebra() {
  LieStructure s(3, {"iB1", "iB2", "iB3"});
  const double r = std::sqrt(2.0);
  // [iB_h, iB_j] = -[B_h, B_j] = -sqrt(2) eps_hjk iB_k
  for (int h = 0; h < 3; ++h) {
    const int j = (h + 1) % 3;
    const int k = (h + 2) % 3;
    s(h, j, k) = -r;
    s(j, h, k) = r;
  }
  return s;
}

LieStructure abelian_algebra(int n) { return LieStructure(n); }

nlohmann::ordered_json to_json(const LieStructure& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["labels"] = s.labels;
  j["gamma"] = s.gamma;
  return j;
}

LieStructure lie_structure_from_json(const nlohmann::ordered_json& j) {
  const int n = j.at("n").get<int>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  LieStructure s(n, std::move(labels));
  auto gamma = j.at("gamma").get<std::vector<double>>();
  require(gamma.size() == s.gamma.size(), NumericalError::Kind::invalid_argument,
          "gamma must hold n^3 entries");
  s.gamma = std::move(gamma);
  return s;
}

}  // namespace otto::algebra
