#include "otto/propagation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "otto/error.hpp"
#include "otto/format.hpp"

namespace otto::propagation {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw NumericalError(NumericalError::Kind::invalid_argument, what);
}

Matrix3 closed_block(const FluidParams& fluid, double omega) {
  return models::generator(fluid, omega).topLeftCorner<3, 3>();
}

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
struct GaussRule {
  static constexpr int n = 10;
  std::array<double, n> nodes{};
  std::array<double, n> weights{};

  GaussRule() {
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) <= 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussRule& gauss_rule() {
  static const GaussRule rule;
  return rule;
}

// Integral of A over [a, b] with one Gauss-Legendre panel.
template <typename F>
Matrix3 gauss_panel(const F& a_of_t, double a, double b) {
  const GaussRule& g = gauss_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Matrix3 sum = Matrix3::Zero();
  for (int i = 0; i < GaussRule::n; ++i) sum += g.weights[i] * a_of_t(mid + half * g.nodes[i]);
  return half * sum;
}

template <typename F>
Matrix3 magnus2_composite(const F& a_of_t, double tau, int panels) {
  const GaussRule& g = gauss_rule();
  const double width = tau / panels;
  Matrix3 omega1 = Matrix3::Zero();
  Matrix3 omega2 = Matrix3::Zero();
  for (int p = 0; p < panels; ++p) {
    const double lo = p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    for (int i = 0; i < GaussRule::n; ++i) {
      const double t1 = mid + half * g.nodes[i];
      const Matrix3 a1 = a_of_t(t1);
      const Matrix3 inner = omega1 + gauss_panel(a_of_t, lo, t1);
      omega2 += (g.weights[i] * half * 0.5) * (a1 * inner - inner * a1);
    }
    omega1 += gauss_panel(a_of_t, lo, lo + width);
  }
  return omega1 + omega2;
}

}  // namespace

Propagator::Propagator() : m_(Matrix4::Identity()), duration_(0.0) {}

Propagator::Propagator(const Matrix4& matrix, double duration) : m_(matrix), duration_(duration) {
  m_.row(3) << 0.0, 0.0, 0.0, 1.0;
}

Propagator Propagator::from_linear(const Matrix3& linear, double duration) {
  Matrix4 m = Matrix4::Identity();
  m.topLeftCorner<3, 3>() = linear;
  return Propagator(m, duration);
}

Propagator operator*(const Propagator& later, const Propagator& earlier) {
  return Propagator(later.matrix() * earlier.matrix(), later.duration() + earlier.duration());
}

Propagator isochore_propagator(const Generator& g, double tau) {
  require(tau > 0.0 && std::isfinite(tau), "isochore duration must be positive");
  return Propagator(numerics::mat_exp<4>(g, tau), tau);
}

Propagator adiabat_product(const FluidParams& fluid, const models::AdiabatSchedule& schedule,
                           double t0, double t1, long steps) {
  require(steps >= 1, "adiabat_product needs at least one step");
  const double h = (t1 - t0) / static_cast<double>(steps);
  Matrix3 u = Matrix3::Identity();
  for (long i = 0; i < steps; ++i) {
    const double tm = t0 + (static_cast<double>(i) + 0.5) * h;
    u = numerics::mat_exp<3>(closed_block(fluid, schedule.omega(tm)), h) * u;
  }
  return Propagator::from_linear(u, t1 - t0);
}

AdiabatIntegration integrate_adiabat(const FluidParams& fluid, const models::AdiabatSchedule& schedule,
                                     double t0, double t1, double tol, int max_doublings) {
  require(tol > 0.0, "adiabat tolerance must be positive");
  require(t1 >= t0, "adiabat interval must be ordered");
  AdiabatIntegration out;
  if (t1 == t0) {
    out.propagator = Propagator(Matrix4::Identity(), 0.0);
    return out;
  }
  long steps = kAdiabatInitialSteps;
  Propagator previous = adiabat_product(fluid, schedule, t0, t1, steps);
  for (int doubling = 1; doubling <= max_doublings; ++doubling) {
    steps *= 2;
    Propagator current = adiabat_product(fluid, schedule, t0, t1, steps);
    const double scale = numerics::max_abs(current.linear_part());
    const double change = numerics::max_abs(current.linear_part() - previous.linear_part()) / scale;
    if (change < tol) {
      out.propagator = current;
      out.steps = steps;
      out.last_change = change;
      return out;
    }
    previous = current;
  }
  throw NumericalError(NumericalError::Kind::adiabat_integration_failure,
                       "adiabat integration did not converge: omega " +
                           format_double(schedule.omega_i()) + " -> " +
                           format_double(schedule.omega_f()) + ", tau " + format_double(schedule.tau()));
}

Propagator adiabat_propagator(const FluidParams& fluid, double omega_i, double omega_f, double tau,
                              double tol) {
  const models::AdiabatSchedule schedule = models::adiabat_schedule(fluid, omega_i, omega_f, tau);
  return integrate_adiabat(fluid, schedule, 0.0, tau, tol).propagator;
}

Matrix3 magnus2_exponent(const FluidParams& fluid, double omega_i, double omega_f, double tau) {
  const models::AdiabatSchedule schedule = models::adiabat_schedule(fluid, omega_i, omega_f, tau);
  const auto a_of_t = [&](double t) { return closed_block(fluid, schedule.omega(t)); };
  Matrix3 previous = magnus2_composite(a_of_t, tau, 1);
  for (int panels = 2; panels <= 4096; panels *= 2) {
    const Matrix3 current = magnus2_composite(a_of_t, tau, panels);
    const double scale = std::max(numerics::max_abs(current), 1e-300);
    if (numerics::max_abs(current - previous) <= 1e-12 * scale) return current;
    previous = current;
  }
  return previous;
}

Propagator adiabat_propagator_magnus2(const FluidParams& fluid, double omega_i, double omega_f,
                                      double tau) {
  return Propagator::from_linear(numerics::mat_exp<3>(magnus2_exponent(fluid, omega_i, omega_f, tau)), tau);
}

std::vector<std::string> CycleSpec::validate() const {
  if (fluid.kind == models::FluidKind::harmonic) require(fluid.mass > 0.0, "mass must be positive");
  require(std::isfinite(fluid.coupling), "coupling must be finite");
  require(omega_H > 0.0 && omega_C > 0.0 && std::isfinite(omega_H) && std::isfinite(omega_C),
          "frequencies must be positive");
  for (const BathParams* b : {&bath_H, &bath_C}) {
    require(b->beta > 0.0 && std::isfinite(b->beta), "beta must be positive");
    require(b->gamma >= 0.0 && std::isfinite(b->gamma), "gamma must be non-negative");
  }
  for (double t : {tau_H, tau_HC, tau_C, tau_CH})
    require(t > 0.0 && std::isfinite(t), "stroke durations must be positive");
  require(adiabat_tol > 0.0, "adiabat tolerance must be positive");

  std::vector<std::string> warnings;
  if (!(bath_C.beta > bath_H.beta)) warnings.push_back("beta_C <= beta_H: not an engine ordering");
  if (!(omega_C < omega_H)) warnings.push_back("omega_C >= omega_H: not an engine ordering");
  return warnings;
}

std::string to_string(Stroke s) {
  switch (s) {
    case Stroke::hot: return "hot";
    case Stroke::expansion: return "expansion";
    case Stroke::cold: return "cold";
    case Stroke::compression: return "compression";
  }
  return "unknown";
}

double stroke_duration(const CycleSpec& spec, Stroke s) {
  switch (s) {
    case Stroke::hot: return spec.tau_H;
    case Stroke::expansion: return spec.tau_HC;
    case Stroke::cold: return spec.tau_C;
    case Stroke::compression: return spec.tau_CH;
  }
  return 0.0;
}

double stroke_omega(const CycleSpec& spec, Stroke s, double t) {
  switch (s) {
    case Stroke::hot: return spec.omega_H;
    case Stroke::cold: return spec.omega_C;
    case Stroke::expansion:
      return models::adiabat_schedule(spec.fluid, spec.omega_H, spec.omega_C, spec.tau_HC).omega(t);
    case Stroke::compression:
      return models::adiabat_schedule(spec.fluid, spec.omega_C, spec.omega_H, spec.tau_CH).omega(t);
  }
  return 0.0;
}

const Propagator& StrokePropagators::operator[](Stroke s) const {
  switch (s) {
    case Stroke::hot: return hot;
    case Stroke::expansion: return expansion;
    case Stroke::cold: return cold;
    case Stroke::compression: return compression;
  }
  return hot;
}

Propagator StrokePropagators::cycle() const { return compression * cold * expansion * hot; }

StrokePropagators stroke_propagators(const CycleSpec& spec) {
  return CycleFamily(spec).strokes(spec.tau_H, spec.tau_C);
}

Propagator compose_cycle(const CycleSpec& spec) { return stroke_propagators(spec).cycle(); }

CycleFamily::CycleFamily(const CycleSpec& base) : base_(base) {
  base_.validate();
  hot_generator_ = models::generator(base_.fluid, base_.omega_H, base_.bath_H);
  cold_generator_ = models::generator(base_.fluid, base_.omega_C, base_.bath_C);
  expansion_ = adiabat_propagator(base_.fluid, base_.omega_H, base_.omega_C, base_.tau_HC,
                                  base_.adiabat_tol);
  compression_ = adiabat_propagator(base_.fluid, base_.omega_C, base_.omega_H, base_.tau_CH,
                                    base_.adiabat_tol);
}

CycleSpec CycleFamily::spec(double tau_H, double tau_C) const {
  CycleSpec s = base_;
  s.tau_H = tau_H;
  s.tau_C = tau_C;
  return s;
}

CycleFamily CycleFamily::with_isochores(double tau_H, double tau_C) const {
  CycleFamily f = *this;
  f.base_ = spec(tau_H, tau_C);
  f.base_.validate();
  return f;
}

StrokePropagators CycleFamily::strokes(double tau_H, double tau_C) const {
  return {isochore_propagator(hot_generator_, tau_H), expansion_,
          isochore_propagator(cold_generator_, tau_C), compression_};
}

Propagator CycleFamily::cycle(double tau_H, double tau_C) const { return strokes(tau_H, tau_C).cycle(); }

}  // namespace otto::propagation
