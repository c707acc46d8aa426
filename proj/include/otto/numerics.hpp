#pragma once

// Dense kernels for the 3x3 and 4x4 real matrices that appear as generators and
// propagators: exponential, principal logarithm, eigendecomposition and linear
// solves. All functions are pure.

#include <complex>

#include <Eigen/Dense>

#include "otto/error.hpp"

namespace otto::numerics {

using Complex = std::complex<double>;

template <int N>
using Matrix = Eigen::Matrix<double, N, N>;
template <int N>
using Vector = Eigen::Matrix<double, N, 1>;
template <int N>
using ComplexMatrix = Eigen::Matrix<Complex, N, N>;
template <int N>
using ComplexVector = Eigen::Matrix<Complex, N, 1>;

using Matrix3 = Matrix<3>;
using Matrix4 = Matrix<4>;
using Vector3 = Vector<3>;
using Vector4 = Vector<4>;

template <int N>
concept SupportedDim = (N == 3 || N == 4);

/// Two eigenvalues are coalescing when |a - b| <= tol * max(1, |a|).
inline constexpr double kCoalescenceTol = 1e-6;

/// Eigenvalues with unit-norm eigenvectors (columns of `eigenvectors`).
/// Ordered by descending real part, then descending imaginary part.
/// `condition` is |det T| of the eigenvector matrix; it vanishes at a
/// non-hermitian degeneracy.
template <int N>
struct Spectrum {
  ComplexVector<N> eigenvalues;
  ComplexMatrix<N> eigenvectors;
  double condition = 0.0;
};

bool coalescing(Complex a, Complex b, double tol = kCoalescenceTol);

/// Maximum absolute entry.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Induced infinity norm (maximum absolute row sum).
template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Power-of-two diagonal scaling d such that diag(d)^-1 A diag(d) has rows and
/// columns of comparable norm. The similarity is exact in floating point.
template <int N>
  requires SupportedDim<N>
Vector<N> balancing_scale(const Matrix<N>& a);

/// exp(t A) by balancing, scaling to norm <= 1/2, a Taylor series summed to
/// machine convergence, and repeated squaring. Throws magnitude_overflow when
/// the result is not representable.
template <int N>
  requires SupportedDim<N>
Matrix<N> mat_exp(const Matrix<N>& a, double t = 1.0);

template <int N>
  requires SupportedDim<N>
ComplexMatrix<N> mat_exp(const ComplexMatrix<N>& a);

/// Principal logarithm: the unique log whose eigenvalues have imaginary parts
/// in (-pi, pi]. Computed on the complex Schur form by inverse scaling and
/// squaring. Throws branch_cut when an eigenvalue lies on the closed negative
/// real axis (|Im| <= 1e-10 |lambda|), singular_system when U is singular.
template <int N>
  requires SupportedDim<N>
ComplexMatrix<N> mat_log_principal(const Matrix<N>& u);

/// Full eigendecomposition. Near-defective input still returns all
/// eigenvalues; nearly parallel eigenvectors show up as a small `condition`.
/// Throws spectral_failure if the QR iteration does not converge.
template <int N>
  requires SupportedDim<N>
Spectrum<N> eig(const Matrix<N>& a);

/// Solves M x = b with partial pivoting on the balanced system and one step of
/// iterative refinement. Throws singular_system when |det M| falls below
/// 1e-12 ||M||^N (norms taken after balancing).
template <int N>
  requires SupportedDim<N>
Vector<N> solve_linear(const Matrix<N>& m, const Vector<N>& b);

/// Determinant by LU on the balanced matrix.
template <int N>
  requires SupportedDim<N>
double determinant(const Matrix<N>& m);

#define OTTO_NUMERICS_EXTERN(N)                                                   \
  extern template Vector<N> balancing_scale<N>(const Matrix<N>&);                 \
  extern template Matrix<N> mat_exp<N>(const Matrix<N>&, double);                 \
  extern template ComplexMatrix<N> mat_exp<N>(const ComplexMatrix<N>&);           \
  extern template ComplexMatrix<N> mat_log_principal<N>(const Matrix<N>&);        \
  extern template Spectrum<N> eig<N>(const Matrix<N>&);                           \
  extern template Vector<N> solve_linear<N>(const Matrix<N>&, const Vector<N>&);  \
  extern template double determinant<N>(const Matrix<N>&);

OTTO_NUMERICS_EXTERN(3)
OTTO_NUMERICS_EXTERN(4)
#undef OTTO_NUMERICS_EXTERN

}  // namespace otto::numerics
