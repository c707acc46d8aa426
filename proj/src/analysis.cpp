#include "otto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otto/algebra.hpp"
#include "otto/error.hpp"
#include "otto/format.hpp"

namespace otto::analysis {

namespace {

using numerics::Vector3;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string& what) {
  if (!ok) throw NumericalError(NumericalError::Kind::invalid_argument, what);
}

std::array<Complex, 3> to_array(const numerics::ComplexVector<3>& v) { return {v(0), v(1), v(2)}; }

const Eigen::Matrix<double, 9, 3>& oscillator_basis() {
  static const Eigen::Matrix<double, 9, 3> basis = [] {
    const auto adj = algebra::adjoint_matrices(algebra::oscillator_algebra());
    Eigen::Matrix<double, 9, 3> b;
    for (int h = 0; h < 3; ++h) b.col(h) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(Matrix3(adj[h]).data());
    return b;
  }();
  return basis;
}

// Real part of T log(D) T^-1 with the principal branch on each eigenvalue.
// Only used when the principal logarithm itself is undefined.
Matrix3 eigen_log_real(const Matrix3& v) {
  const auto s = numerics::eig<3>(v);
  numerics::ComplexMatrix<3> d = numerics::ComplexMatrix<3>::Zero();
  for (int i = 0; i < 3; ++i) d(i, i) = std::log(s.eigenvalues(i));
  const numerics::ComplexMatrix<3> l = s.eigenvectors * d * s.eigenvectors.inverse();
  return l.real();
}

int sign_of(double v, double noise) {
  if (!std::isfinite(v) || std::abs(v) <= noise) return 0;
  return v > 0.0 ? 1 : -1;
}

template <typename F>
std::array<double, 2> bisect(const F& f, double lo, double hi, int sign_lo) {
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) * sign_lo > 0.0) lo = mid;
    else hi = mid;
  }
  return {lo, hi};
}

double stroke_offset(const CycleSpec& spec, Stroke s) {
  double t = 0.0;
  for (Stroke k : {Stroke::hot, Stroke::expansion, Stroke::cold, Stroke::compression}) {
    if (k == s) break;
    t += propagation::stroke_duration(spec, k);
  }
  return t;
}

double stroke_end_omega(const CycleSpec& spec, Stroke s) {
  return (s == Stroke::hot || s == Stroke::compression) ? spec.omega_H : spec.omega_C;
}

}  // namespace

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable_spiral: return "stable-spiral";
    case Stability::stable_node: return "stable-node";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "unknown";
}

std::string to_string(ScanParameter p) { return p == ScanParameter::tau_H ? "tau_H" : "tau_C"; }

Stability classify_stability(const std::array<Complex, 3>& eigenvalues) {
  double rho = 0.0;
  bool complex_pair = false;
  for (const Complex& l : eigenvalues) {
    rho = std::max(rho, std::abs(l));
    if (l.imag() != 0.0) complex_pair = true;
  }
  if (rho > 1.0 + kMarginalBand) return Stability::unstable;
  if (rho < 1.0 - kMarginalBand) return complex_pair ? Stability::stable_spiral : Stability::stable_node;
  return Stability::marginal;
}

LimitCycleResult limit_cycle(const Propagator& u) {
  const Matrix3 lin = u.linear_part();
  const auto spectrum = numerics::eig<3>(lin);
  LimitCycleResult r;
  r.eigenvalues = to_array(spectrum.eigenvalues);
  std::array<double, 3> moduli{};
  for (int i = 0; i < 3; ++i) moduli[i] = std::abs(r.eigenvalues[i]);
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  r.spectral_radius = moduli[0];
  r.convergence_rate = moduli[1];
  r.stability = classify_stability(r.eigenvalues);

  Vector3 x;
  try {
    x = numerics::solve_linear<3>(Matrix3::Identity() - lin, u.translation());
  } catch (const NumericalError& e) {
    if (e.kind() != NumericalError::Kind::singular_system) throw;
    throw NumericalError(NumericalError::Kind::no_isolated_fixed_point,
                         "no isolated fixed point: 1 - U is singular (spectral radius " +
                             format_double(r.spectral_radius) + ")");
  }
  r.fixed_point << x, 1.0;
  return r;
}

double damping_exponent(const CycleSpec& spec) {
  return spec.bath_H.gamma * spec.tau_H + spec.bath_C.gamma * spec.tau_C;
}

OmegaCoefficients omega_coefficients(const Propagator& u, double gamma_sum) {
  const Matrix3 v = std::exp(gamma_sum) * u.linear_part();
  OmegaCoefficients out;
  Matrix3 log_v;
  try {
    const numerics::ComplexMatrix<3> l = numerics::mat_log_principal<3>(v);
    log_v = l.real();
    if (numerics::max_abs(l.imag()) > 1e-8 * std::max(1.0, numerics::max_abs(log_v))) out.flagged = true;
  } catch (const NumericalError& e) {
    if (e.kind() != NumericalError::Kind::branch_cut) throw;
    out.flagged = true;
    log_v = eigen_log_real(v);
  }

  const Eigen::Matrix<double, 9, 1> target = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(log_v.data());
  const auto& basis = oscillator_basis();
  const Vector3 a = basis.colPivHouseholderQr().solve(target);
  out.alpha = {a(0), a(1), a(2)};
  out.projection_residual =
      (basis * a - target).cwiseAbs().maxCoeff() / std::max(1.0, target.cwiseAbs().maxCoeff());
  if (!(out.projection_residual <= 1e-8)) out.flagged = true;

  out.discriminant = 16.0 * (a(1) * a(1) - a(0) * a(2));
  const Complex w = std::sqrt(Complex(out.discriminant, 0.0));
  out.w_eigenvalues = {Complex(0.0, 0.0), w, -w};
  return out;
}

double eigenvector_det(const Propagator& u, Block which) {
  if (which == Block::linear) return numerics::eig<3>(u.linear_part()).condition;
  return numerics::eig<4>(u.matrix()).condition;
}

double real_spectrum_indicator(const Propagator& u, double gamma_sum) {
  return std::exp(gamma_sum) * u.linear_part().trace() - 3.0;
}

double spectral_radius(const Propagator& u) {
  return numerics::eig<3>(u.linear_part()).eigenvalues.cwiseAbs().maxCoeff();
}

CycleSpec at_parameter(const CycleSpec& spec, ScanParameter p, double value) {
  CycleSpec s = spec;
  (p == ScanParameter::tau_H ? s.tau_H : s.tau_C) = value;
  return s;
}

std::vector<ExceptionalPoint> find_exceptional_points(const CycleFamily& family, const ScanRange& range,
                                                      int n_samples) {
  require(n_samples >= 16, "exceptional-point scan needs at least 16 samples");
  require(range.lo > 0.0 && range.hi > range.lo, "scan range must satisfy 0 < lo < hi");

  const auto spec_at = [&](double x) { return at_parameter(family.base(), range.parameter, x); };
  const auto cycle_at = [&](double x) {
    const CycleSpec s = spec_at(x);
    return family.cycle(s.tau_H, s.tau_C);
  };
  const auto indicator = [&](double x) { return real_spectrum_indicator(cycle_at(x), damping_exponent(spec_at(x))); };
  const auto radius_excess = [&](double x) { return spectral_radius(cycle_at(x)) - 1.0; };

  std::vector<double> xs(n_samples), ind(n_samples), rad(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    xs[i] = i + 1 == n_samples ? range.hi : range.lo + (range.hi - range.lo) * i / (n_samples - 1);
    ind[i] = indicator(xs[i]);
    rad[i] = radius_excess(xs[i]);
  }

  constexpr double kIndicatorNoise = 1e-12;
  constexpr double kRadiusNoise = 1e-14;
  std::vector<ExceptionalPoint> points;
  const auto refine = [&](const auto& f, double lo, double hi, int sign_lo, int order) {
    ExceptionalPoint ep;
    ep.order = order;
    ep.bracketing_interval = bisect(f, lo, hi, sign_lo);
    ep.parameter_value = 0.5 * (ep.bracketing_interval[0] + ep.bracketing_interval[1]);
    const Propagator u = cycle_at(ep.parameter_value);
    ep.eigenvalues = to_array(numerics::eig<3>(u.linear_part()).eigenvalues);
    ep.det_T = eigenvector_det(u, order == 3 ? Block::linear : Block::full);
    points.push_back(ep);
  };
  for (int i = 0; i + 1 < n_samples; ++i) {
    const int a = sign_of(ind[i], kIndicatorNoise);
    const int b = sign_of(ind[i + 1], kIndicatorNoise);
    if (a * b < 0) refine(indicator, xs[i], xs[i + 1], a, 3);
    const int c = sign_of(rad[i], kRadiusNoise);
    const int d = sign_of(rad[i + 1], kRadiusNoise);
    if (c * d < 0) refine(radius_excess, xs[i], xs[i + 1], c, 2);
  }
  std::sort(points.begin(), points.end(),
            [](const ExceptionalPoint& x, const ExceptionalPoint& y) { return x.parameter_value < y.parameter_value; });
  return points;
}

std::vector<ExceptionalPoint> find_exceptional_points(const CycleSpec& spec, const ScanRange& range,
                                                      int n_samples) {
  return find_exceptional_points(CycleFamily(spec), range, n_samples);
}

std::vector<SpectrumSample> scan_spectrum(const CycleFamily& family, const ScanRange& range, int n) {
  require(n >= 2, "spectrum scan needs at least 2 samples");
  require(range.lo > 0.0 && range.hi > range.lo, "scan range must satisfy 0 < lo < hi");
  std::vector<SpectrumSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x = i + 1 == n ? range.hi : range.lo + (range.hi - range.lo) * i / (n - 1);
    const CycleSpec s = at_parameter(family.base(), range.parameter, x);
    const Propagator u = family.cycle(s.tau_H, s.tau_C);
    const auto spectrum = numerics::eig<3>(u.linear_part());
    SpectrumSample row;
    row.parameter_value = x;
    row.eigenvalues = to_array(spectrum.eigenvalues);
    row.spectral_radius = spectrum.eigenvalues.cwiseAbs().maxCoeff();
    row.det_T_linear = spectrum.condition;
    row.det_T_full = eigenvector_det(u, Block::full);
    row.real_spectrum_indicator = real_spectrum_indicator(u, damping_exponent(s));
    if (s.fluid.kind == models::FluidKind::harmonic) row.omega = omega_coefficients(u, damping_exponent(s));
    out.push_back(row);
  }
  return out;
}

std::string Trajectory::status_text() const {
  if (status == TrajectoryStatus::complete) return "complete";
  return "diverged at cycle " + std::to_string(diverged_at);
}

Trajectory iterate_trajectory(const CycleSpec& spec, const StateVec& x_init, long n_cycles,
                              int samples_per_stroke) {
  require(n_cycles >= 1, "trajectory needs at least one cycle");
  require(samples_per_stroke >= 1, "trajectory needs at least one sample per stroke");
  require(x_init(3) == 1.0, "initial state must have identity component 1");

  const StrokePropagators strokes = propagation::stroke_propagators(spec);
  constexpr std::array<Stroke, 4> order{Stroke::hot, Stroke::expansion, Stroke::cold, Stroke::compression};

  // partial[s][j] propagates from the start of stroke s to its j-th sample time.
  std::array<std::vector<Matrix4>, 4> partial;
  for (int k = 0; k < 4; ++k) {
    const Stroke s = order[k];
    const double tau = propagation::stroke_duration(spec, s);
    auto& p = partial[k];
    p.assign(samples_per_stroke, Matrix4::Identity());
    if (s == Stroke::hot || s == Stroke::cold) {
      const bool hot = s == Stroke::hot;
      const models::Generator g = models::generator(spec.fluid, hot ? spec.omega_H : spec.omega_C,
                                                    hot ? spec.bath_H : spec.bath_C);
      for (int j = 1; j < samples_per_stroke; ++j) p[j] = numerics::mat_exp<4>(g, tau * j / samples_per_stroke);
    } else {
      const bool expansion = s == Stroke::expansion;
      const auto schedule = models::adiabat_schedule(spec.fluid, expansion ? spec.omega_H : spec.omega_C,
                                                     expansion ? spec.omega_C : spec.omega_H, tau);
      for (int j = 1; j < samples_per_stroke; ++j) {
        const double t0 = tau * (j - 1) / samples_per_stroke;
        const double t1 = tau * j / samples_per_stroke;
        p[j] = propagation::integrate_adiabat(spec.fluid, schedule, t0, t1, spec.adiabat_tol)
                   .propagator.matrix() * p[j - 1];
      }
    }
  }

  Trajectory out;
  try {
    out.limit_cycle = limit_cycle(strokes.cycle());
  } catch (const NumericalError& e) {
    if (e.kind() != NumericalError::Kind::no_isolated_fixed_point) throw;
  }

  const auto escaped = [](const StateVec& x) {
    return !x.allFinite() || x.head<3>().norm() > kDivergenceCutoff;
  };
  const auto sample = [&](long cycle, Stroke s, double t, const StateVec& x) {
    TrajectorySample r;
    r.cycle = cycle;
    r.stroke = s;
    r.stroke_time = t;
    r.time = cycle * spec.period() + stroke_offset(spec, s) + t;
    r.state = x;
    r.omega = propagation::stroke_omega(spec, s, t);
    r.energy = models::energy(spec.fluid, r.omega, x);
    r.excitation = r.energy / r.omega;
    return r;
  };
  const auto record_cycle = [&](long cycle, const StateVec& x) {
    CycleRecord c;
    c.cycle = cycle;
    c.start = x;
    c.distance = out.limit_cycle ? (x - out.limit_cycle->fixed_point).head<3>().norm() : kNaN;
    out.cycles.push_back(c);
  };

  out.samples.reserve(static_cast<std::size_t>(std::min<long>(n_cycles, 100000)) * 4 * samples_per_stroke + 1);
  StateVec x = x_init;
  for (long n = 0; n < n_cycles; ++n) {
    record_cycle(n, x);
    for (int k = 0; k < 4; ++k) {
      const Stroke s = order[k];
      const double tau = propagation::stroke_duration(spec, s);
      for (int j = 0; j < samples_per_stroke; ++j) {
        const StateVec y = partial[k][j] * x;
        if (escaped(y)) {
          out.status = TrajectoryStatus::diverged;
          out.diverged_at = n;
          return out;
        }
        out.samples.push_back(sample(n, s, tau * j / samples_per_stroke, y));
      }
      x = strokes[s].apply(x);
    }
  }
  if (escaped(x)) {
    out.status = TrajectoryStatus::diverged;
    out.diverged_at = n_cycles;
    return out;
  }
  record_cycle(n_cycles, x);
  out.samples.push_back(sample(n_cycles, Stroke::hot, 0.0, x));
  return out;
}

CycleEnergetics cycle_energetics(const CycleSpec& spec, const StrokePropagators& strokes,
                                 const LimitCycleResult& lc) {
  CycleEnergetics e;
  StateVec x = lc.fixed_point;
  e.boundary_energies[0] = models::energy(spec.fluid, spec.omega_H, x);
  int i = 1;
  for (Stroke s : {Stroke::hot, Stroke::expansion, Stroke::cold, Stroke::compression}) {
    x = strokes[s].apply(x);
    e.boundary_energies[i++] = models::energy(spec.fluid, stroke_end_omega(spec, s), x);
  }
  const auto& h = e.boundary_energies;
  e.Q_H = h[1] - h[0];
  e.W_HC = -(h[2] - h[1]);
  e.Q_C = h[3] - h[2];
  e.W_CH = -(h[4] - h[3]);
  e.W_tot = e.W_HC + e.W_CH;
  e.P_avg = e.W_tot / spec.period();
  return e;
}

CycleEnergetics cycle_energetics(const CycleSpec& spec, const LimitCycleResult& lc) {
  return cycle_energetics(spec, propagation::stroke_propagators(spec), lc);
}

}  // namespace otto::analysis
