#include "otto/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "otto/format.hpp"

namespace otto::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kBranchCutTol = 1e-10;
constexpr double kSingularDetTol = 1e-12;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

// Taylor core with scaling and squaring; works for real and complex scalars.
template <typename Scalar, int N>
Eigen::Matrix<Scalar, N, N> expm_core(Eigen::Matrix<Scalar, N, N> m) {
  using M = Eigen::Matrix<Scalar, N, N>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const Real norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm) / 0.5)));
    m /= std::ldexp(Real(1), squarings);
  }
  const Real eps = std::numeric_limits<Real>::epsilon();
  M result = M::Identity();
  M term = M::Identity();
  for (int k = 1; k <= 40; ++k) {
    term = (term * m) / static_cast<Real>(k);
    result += term;
    if (term.cwiseAbs().rowwise().sum().maxCoeff() <=
        eps * result.cwiseAbs().rowwise().sum().maxCoeff()) {
      break;
    }
  }
  for (int i = 0; i < squarings; ++i) {
    result = result * result;
    if (!result.allFinite()) break;
  }
  return result;
}

// Upper-triangular principal square root (Bjorck-Hammarling recurrence).
template <int N>
ComplexMatrix<N> sqrtm_upper(const ComplexMatrix<N>& t) {
  ComplexMatrix<N> r = ComplexMatrix<N>::Zero();
  for (int j = 0; j < N; ++j) {
    r(j, j) = std::sqrt(t(j, j));
    for (int i = j - 1; i >= 0; --i) {
      Complex s = 0.0;
      for (int k = i + 1; k < j; ++k) s += r(i, k) * r(k, j);
      r(i, j) = (t(i, j) - s) / (r(i, i) + r(j, j));
    }
  }
  return r;
}

template <int N>
[[noreturn]] void spectral_failure(const Matrix<N>& a, const char* what) {
  throw NumericalError(NumericalError::Kind::spectral_failure,
                       std::string(what) + " for matrix " + format_matrix(a));
}

template <int N>
void require_finite(const Matrix<N>& a, const char* op) {
  if (!all_finite(a)) {
    throw NumericalError(NumericalError::Kind::invalid_argument,
                         std::string(op) + ": non-finite input " + format_matrix(a));
  }
}

}  // namespace

bool coalescing(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

template <int N>
  requires SupportedDim<N>
Vector<N> balancing_scale(const Matrix<N>& a) {
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  Vector<N> d = Vector<N>::Ones();
  if (!all_finite(a)) return d;
  Matrix<N> b = a;
  bool done = false;
  for (int sweep = 0; !done && sweep < 200; ++sweep) {
    done = true;
    for (int i = 0; i < N; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        c += std::abs(b(j, i));
        r += std::abs(b(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix_sq;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        d(i) *= f;
        b.row(i) /= f;
        b.col(i) *= f;
      }
    }
  }
  return d;
}

template <int N>
  requires SupportedDim<N>
Matrix<N> mat_exp(const Matrix<N>& a, double t) {
  if (!std::isfinite(t)) {
    throw NumericalError(NumericalError::Kind::invalid_argument, "mat_exp: non-finite time");
  }
  require_finite(a, "mat_exp");
  const Matrix<N> m = t * a;
  const Vector<N> d = balancing_scale<N>(m);
  const Matrix<N> balanced = d.cwiseInverse().asDiagonal() * m * d.asDiagonal();
  // Extended precision keeps the squaring phase from amplifying rounding in
  // strongly non-normal propagators.
  using LongMatrix = Eigen::Matrix<long double, N, N>;
  Matrix<N> e = expm_core<long double, N>(LongMatrix(balanced.template cast<long double>()))
                    .template cast<double>();
  e = d.asDiagonal() * e * d.cwiseInverse().asDiagonal();
  if (!e.allFinite()) {
    throw NumericalError(NumericalError::Kind::magnitude_overflow,
                         "mat_exp: magnitude overflow for t*A = " + format_matrix(m));
  }
  return e;
}

template <int N>
  requires SupportedDim<N>
ComplexMatrix<N> mat_exp(const ComplexMatrix<N>& a) {
  if (!a.allFinite()) {
    throw NumericalError(NumericalError::Kind::invalid_argument, "mat_exp: non-finite input");
  }
  ComplexMatrix<N> e = expm_core<Complex, N>(a);
  if (!e.allFinite()) {
    throw NumericalError(NumericalError::Kind::magnitude_overflow, "mat_exp: magnitude overflow");
  }
  return e;
}

template <int N>
  requires SupportedDim<N>
ComplexMatrix<N> mat_log_principal(const Matrix<N>& u) {
  require_finite(u, "mat_log_principal");
  const Vector<N> d = balancing_scale<N>(u);
  const Matrix<N> balanced = d.cwiseInverse().asDiagonal() * u * d.asDiagonal();

  Eigen::ComplexSchur<ComplexMatrix<N>> schur(balanced.template cast<Complex>());
  if (schur.info() != Eigen::Success) spectral_failure(u, "complex Schur did not converge");
  ComplexMatrix<N> t = schur.matrixT();
  const ComplexMatrix<N> q = schur.matrixU();

  const double scale = std::max(inf_norm(balanced), std::numeric_limits<double>::min());
  for (int i = 0; i < N; ++i) {
    const Complex lambda = t(i, i);
    if (std::abs(lambda) <= kEps * scale) {
      throw NumericalError(NumericalError::Kind::singular_system,
                           "mat_log_principal: singular matrix " + format_matrix(u));
    }
    if (lambda.real() < 0.0 && std::abs(lambda.imag()) <= kBranchCutTol * std::abs(lambda)) {
      throw NumericalError(NumericalError::Kind::branch_cut,
                           "mat_log_principal: eigenvalue on the negative real axis for " +
                               format_matrix(u));
    }
  }

  const ComplexMatrix<N> identity = ComplexMatrix<N>::Identity();
  int roots = 0;
  while ((t - identity).norm() > 0.25) {
    if (++roots > 100) spectral_failure(u, "inverse scaling and squaring did not converge");
    t = sqrtm_upper<N>(t);
  }

  // log(T) = 2 atanh(Z) with Z = (T - I)(T + I)^-1; T - I and T + I commute.
  const ComplexMatrix<N> z =
      (t + identity).template triangularView<Eigen::Upper>().solve(t - identity);
  const ComplexMatrix<N> z2 = z * z;
  ComplexMatrix<N> power = z;
  ComplexMatrix<N> log_t = z;
  for (int k = 3; k < 200; k += 2) {
    power = power * z2;
    const ComplexMatrix<N> term = power / static_cast<double>(k);
    log_t += term;
    if (term.norm() <= kEps * std::max(log_t.norm(), kEps)) break;
  }
  log_t *= 2.0 * std::ldexp(1.0, roots);

  ComplexMatrix<N> result = q * log_t * q.adjoint();
  const ComplexVector<N> dc = d.template cast<Complex>();
  result = dc.asDiagonal() * result * dc.cwiseInverse().asDiagonal();
  return result;
}

template <int N>
  requires SupportedDim<N>
Spectrum<N> eig(const Matrix<N>& a) {
  require_finite(a, "eig");
  const Vector<N> d = balancing_scale<N>(a);
  const Matrix<N> balanced = d.cwiseInverse().asDiagonal() * a * d.asDiagonal();

  Eigen::EigenSolver<Matrix<N>> solver(balanced, true);
  if (solver.info() != Eigen::Success) spectral_failure(a, "QR iteration did not converge");

  const ComplexVector<N> values = solver.eigenvalues();
  ComplexMatrix<N> vectors = d.template cast<Complex>().asDiagonal() * solver.eigenvectors();

  for (int j = 0; j < N; ++j) {
    auto col = vectors.col(j);
    const double norm = col.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) spectral_failure(a, "degenerate eigenvector");
    col /= norm;
    // Phase: first component that is not negligible is real and positive.
    for (int i = 0; i < N; ++i) {
      if (std::abs(col(i)) > 1e-12) {
        col *= std::conj(col(i)) / std::abs(col(i));
        col(i) = std::abs(col(i));
        break;
      }
    }
  }

  std::array<int, N> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    if (values(l).real() != values(r).real()) return values(l).real() > values(r).real();
    return values(l).imag() > values(r).imag();
  });

  Spectrum<N> out;
  for (int k = 0; k < N; ++k) {
    out.eigenvalues(k) = values(order[k]);
    out.eigenvectors.col(k) = vectors.col(order[k]);
  }
  out.condition = std::abs(out.eigenvectors.determinant());
  return out;
}

template <int N>
  requires SupportedDim<N>
double determinant(const Matrix<N>& m) {
  const Vector<N> d = balancing_scale<N>(m);
  const Matrix<N> balanced = d.cwiseInverse().asDiagonal() * m * d.asDiagonal();
  return Eigen::PartialPivLU<Matrix<N>>(balanced).determinant();
}

template <int N>
  requires SupportedDim<N>
Vector<N> solve_linear(const Matrix<N>& m, const Vector<N>& b) {
  require_finite(m, "solve_linear");
  if (!b.allFinite()) {
    throw NumericalError(NumericalError::Kind::invalid_argument, "solve_linear: non-finite rhs");
  }
  const Vector<N> d = balancing_scale<N>(m);
  const Matrix<N> balanced = d.cwiseInverse().asDiagonal() * m * d.asDiagonal();
  const Eigen::PartialPivLU<Matrix<N>> lu(balanced);
  const double det = lu.determinant();
  const double norm = inf_norm(balanced);
  if (!(std::abs(det) >= kSingularDetTol * std::pow(norm, N)) || norm == 0.0) {
    throw NumericalError(NumericalError::Kind::singular_system,
                         "solve_linear: singular system " + format_matrix(m));
  }
  const Vector<N> dinv = d.cwiseInverse();
  Vector<N> x = d.asDiagonal() * lu.solve(dinv.asDiagonal() * b);
  const Vector<N> residual = b - m * x;
  x += d.asDiagonal() * lu.solve(dinv.asDiagonal() * residual);
  return x;
}

#define OTTO_NUMERICS_INSTANTIATE(N)                                      \
  template Vector<N> balancing_scale<N>(const Matrix<N>&);                \
  template Matrix<N> mat_exp<N>(const Matrix<N>&, double);                \
  template ComplexMatrix<N> mat_exp<N>(const ComplexMatrix<N>&);          \
  template ComplexMatrix<N> mat_log_principal<N>(const Matrix<N>&);       \
  template Spectrum<N> eig<N>(const Matrix<N>&);                          \
  template Vector<N> solve_linear<N>(const Matrix<N>&, const Vector<N>&); \
  template double determinant<N>(const Matrix<N>&);

OTTO_NUMERICS_INSTANTIATE(3)
OTTO_NUMERICS_INSTANTIATE(4)

}  // namespace otto::numerics
