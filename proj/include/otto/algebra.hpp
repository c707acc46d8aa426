#pragma once

// Finite-dimensional real Lie algebras given by structure constants.
//
// Index convention: for a basis {e_h} the bracket is
//   [e_h, e_j] = sum_k gamma(h, j, k) e_k,
// and the adjoint matrix A_h has entries (A_h)(j, k) = gamma(h, j, k). With this
// placement the A_h are the transposes of the adjoint representation, so
//   [A_h, A_j] = -sum_k gamma(h, j, k) A_k.
// Total antisymmetry is tested with indices lowered by the Euclidean metric of
// the chosen basis, which is only meaningful on an orthonormal basis.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

namespace otto::algebra {

struct LieStructure {
  int n = 0;
  std::vector<double> gamma;  // n^3 entries, (h, j, k) lexicographic
  std::vector<std::string> labels;

  LieStructure() = default;
  explicit LieStructure(int dim, std::vector<std::string> names = {});

  double operator()(int h, int j, int k) const { return gamma[index(h, j, k)]; }
  double& operator()(int h, int j, int k) { return gamma[index(h, j, k)]; }

 private:
  std::size_t index(int h, int j, int k) const {
    return (static_cast<std::size_t>(h) * n + j) * n + k;
  }
};

enum class Definiteness {
  negative_definite,
  negative_semidefinite,
  indefinite,
  positive_semidefinite,
  positive_definite,
  zero,
};

std::string to_string(Definiteness d);

struct KillingForm {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;  // ascending
  Definiteness definiteness = Definiteness::zero;
};

struct LieCheck {
  bool antisymmetric_first_pair = false;
  double antisymmetry_violation = 0.0;
  double jacobi_residual = 0.0;
};

struct AntisymmetryCheck {
  bool totally_antisymmetric = false;
  double max_violation = 0.0;
};

inline constexpr double kIdentityTol = 1e-12;
inline constexpr double kDefinitenessTol = 1e-10;

std::vector<Eigen::MatrixXd> adjoint_matrices(const LieStructure& s);

LieCheck check_lie_algebra(const LieStructure& s);

/// K_ij = Trace(A_i A_j).
KillingForm killing_form(const LieStructure& s);

/// Wraps a symmetric matrix, computing its spectrum and definiteness class.
KillingForm classify_form(const Eigen::MatrixXd& matrix);

AntisymmetryCheck is_totally_antisymmetric(const LieStructure& s);

/// Structure constants of the real span of the given (linearly independent)
/// complex matrices, which must be closed under commutators. Coefficients are
/// recovered from the Hilbert-Schmidt Gram system.
LieStructure structure_from_matrices(const std::vector<Eigen::MatrixXcd>& basis,
                                     std::vector<std::string> labels = {});

enum class GellMannScaling {
  orthonormal,  // every generator has unit Hilbert-Schmidt norm
  textbook,     // diagonal generators with Tr(chi_n^2) = 2
};

/// Anti-hermitian generators of su(M): the diagonal family i*chi_n followed by
/// the Y_nm and Z_nm families for n < m. With `with_identity` the generator
/// i*1/sqrt(M) is appended, giving u(M).
std::vector<Eigen::MatrixXcd> gell_mann_matrices(int m, bool with_identity = false,
                                                 GellMannScaling scaling = GellMannScaling::orthonormal);

/// su(M) (or u(M)) structure for 2 <= M <= 5.
LieStructure gell_mann_basis(int m, bool with_identity = false,
                             GellMannScaling scaling = GellMannScaling::orthonormal);

/// Structure constants in the basis e'_a = sum_m C(a, m) e_m (C square, invertible).
LieStructure change_basis(const LieStructure& s, const Eigen::MatrixXd& c);

/// Gram-Schmidt with respect to the inner product -K. Returns C with
/// C (-K) C^T = I; throws degenerate_basis unless -K is positive definite.
Eigen::MatrixXd killing_orthonormal_transform(const LieStructure& s);

LieStructure orthonormalize_killing(const LieStructure& s);

/// K'_jk = sum_mn C(j, m) C(k, n) K_mn for a full-row-rank N' x N matrix C.
KillingForm transformed_killing(const Eigen::MatrixXd& c, const KillingForm& k);

/// Harmonic-oscillator algebra on the basis {iQ^2, iD, iP^2}, hbar = 1.
LieStructure oscillator_algebra();

/// Coupled-spin algebra on {iB_1, iB_2, iB_3} with [B_1, B_2] = sqrt(2) i B_3 (cyclic).
LieStructure spin_algebra();

LieStructure abelian_algebra(int n);

nlohmann::ordered_json to_json(const LieStructure& s);
LieStructure lie_structure_from_json(const nlohmann::ordered_json& j);

}  // namespace otto::algebra
