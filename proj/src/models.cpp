#include "otto/models.hpp"

#include <cmath>

#include "otto/error.hpp"
#include "otto/format.hpp"

namespace otto::models {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw NumericalError(NumericalError::Kind::invalid_argument, what);
}

}  // namespace

std::string to_string(FluidKind k) { return k == FluidKind::harmonic ? "harmonic" : "spin"; }

std::string to_string(ScheduleKind k) {
  return k == ScheduleKind::constant_mu ? "constant-mu" : "linear";
}

FluidParams harmonic_fluid(double mass) {
  require(mass > 0.0 && std::isfinite(mass), "mass must be positive");
  return {FluidKind::harmonic, mass, 0.0, ScheduleKind::constant_mu};
}

FluidParams spin_fluid(double coupling, ScheduleKind schedule) {
  require(std::isfinite(coupling), "coupling must be finite");
  return {FluidKind::spin, 1.0, coupling, schedule};
}

double heq_harmonic(double beta, double omega) {
  require(beta > 0.0 && omega > 0.0, "heq_harmonic needs beta > 0 and omega > 0");
  // tanh is accurate for small arguments, so this is stable at both ends.
  return 0.5 * omega / std::tanh(0.5 * beta * omega);
}

double heq_spin(double beta, double omega, double coupling) {
  require(beta > 0.0, "heq_spin needs beta > 0");
  const double big_omega = std::hypot(omega, coupling);
  return big_omega * std::tanh(-0.5 * big_omega * beta);
}

double heq(const FluidParams& fluid, double beta, double omega) {
  return fluid.kind == FluidKind::harmonic ? heq_harmonic(beta, omega)
                                           : heq_spin(beta, omega, fluid.coupling);
}

TransitionRates transition_rates(double gamma, double beta, double omega) {
  require(gamma > 0.0 && beta > 0.0 && omega > 0.0,
          "transition_rates needs gamma, beta, omega > 0");
  const double boltzmann = std::exp(-beta * omega);
  const double denom = -std::expm1(-beta * omega);
  TransitionRates r;
  r.down = gamma / denom;
  r.up = gamma * boltzmann / denom;
  return r;
}

Generator generator_harmonic(double omega, double mass, std::optional<BathParams> bath) {
  require(omega > 0.0 && mass > 0.0, "generator_harmonic needs omega > 0 and m > 0");
  const double k = mass * omega * omega;
  const double j = 1.0 / mass;
  Generator a;
  a << 0, j, 0, 0,
       -2 * k, 0, 2 * j, 0,
       0, -k, 0, 0,
       0, 0, 0, 0;
  if (bath) {
    const double g = bath->gamma;
    const double h = heq_harmonic(bath->beta, omega);
    a(0, 0) = a(1, 1) = a(2, 2) = -g;
    a(0, 3) = g / k * h;
    a(2, 3) = g / j * h;
  }
  return a;
}

Generator generator_spin(double omega, double coupling, std::optional<BathParams> bath) {
  require(std::isfinite(omega) && std::isfinite(coupling), "generator_spin needs finite inputs");
  Generator a;
  a << 0, 0, coupling, 0,
       0, 0, -omega, 0,
       -coupling, omega, 0, 0,
       0, 0, 0, 0;
  if (bath) {
    const double g = bath->gamma;
    const double omega_sq = omega * omega + coupling * coupling;
    const double h = heq_spin(bath->beta, omega, coupling);
    a(0, 0) = a(1, 1) = a(2, 2) = -g;
    a(0, 3) = g * omega / omega_sq * h;
    a(1, 3) = g * coupling / omega_sq * h;
  }
  return a;
}

Generator generator(const FluidParams& fluid, double omega, std::optional<BathParams> bath) {
  return fluid.kind == FluidKind::harmonic ? generator_harmonic(omega, fluid.mass, bath)
                                           : generator_spin(omega, fluid.coupling, bath);
}

double energy(const FluidParams& fluid, double omega, const StateVec& x) {
  if (fluid.kind == FluidKind::harmonic) {
    const double k = fluid.mass * omega * omega;
    return 0.5 / fluid.mass * x(2) + 0.5 * k * x(0);
  }
  return omega * x(0) + fluid.coupling * x(1);
}

AdiabatSchedule::AdiabatSchedule(ScheduleKind kind, double omega_i, double omega_f, double tau)
    : kind_(kind), omega_i_(omega_i), omega_f_(omega_f), tau_(tau) {
  require(tau > 0.0 && std::isfinite(tau), "adiabat duration must be positive");
  if (kind == ScheduleKind::constant_mu) {
    require(omega_i > 0.0 && omega_f > 0.0, "constant-mu schedule needs positive frequencies");
    mu_ = (1.0 / omega_i - 1.0 / omega_f) / tau;
  } else {
    require(std::isfinite(omega_i) && std::isfinite(omega_f), "schedule frequencies must be finite");
  }
}

double AdiabatSchedule::omega(double t) const {
  if (t <= 0.0) return omega_i_;
  if (t >= tau_) return omega_f_;
  if (kind_ == ScheduleKind::linear) return omega_i_ + (omega_f_ - omega_i_) * (t / tau_);
  if (mu_ == 0.0) return omega_i_;
  return 1.0 / (1.0 / omega_i_ - mu_ * t);
}

AdiabatSchedule adiabat_schedule_harmonic(double omega_i, double omega_f, double tau) {
  return AdiabatSchedule(ScheduleKind::constant_mu, omega_i, omega_f, tau);
}

AdiabatSchedule adiabat_schedule(const FluidParams& fluid, double omega_i, double omega_f, double tau) {
  return AdiabatSchedule(fluid.schedule, omega_i, omega_f, tau);
}

StateVec thermal_state(const FluidParams& fluid, const BathParams& bath, double omega) {
  if (!(bath.gamma > 0.0)) {
    throw NumericalError(NumericalError::Kind::no_thermal_state,
                         "no unique thermal state: gamma = " + format_double(bath.gamma));
  }
  const double h = heq(fluid, bath.beta, omega);
  StateVec x;
  if (fluid.kind == FluidKind::harmonic) {
    const double k = fluid.mass * omega * omega;
    const double j = 1.0 / fluid.mass;
    x << h / k, 0.0, h / j, 1.0;
    require(uncertainty_margin(x) >= -1e-12 * x(0) * x(2),
            "thermal state violates the uncertainty bound");
  } else {
    const double omega_sq = omega * omega + fluid.coupling * fluid.coupling;
    if (!(omega_sq > 0.0)) {
      throw NumericalError(NumericalError::Kind::no_thermal_state,
                           "no unique thermal state: omega = J = 0");
    }
    x << omega / omega_sq * h, fluid.coupling / omega_sq * h, 0.0, 1.0;
  }
  return x;
}

double uncertainty_margin(const StateVec& x) { return x(0) * x(2) - 0.25 * x(1) * x(1) - 0.25; }

}  // namespace otto::models
