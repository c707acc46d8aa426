#pragma once

// Working-fluid models in the Heisenberg picture (hbar = 1).
//
// Harmonic oscillator: state (Q^2, D, P^2, 1) with D = QP + PQ,
//   H = (J/2) P^2 + (k/2) Q^2, k = m omega^2, J = 1/m.
// Coupled spins: state (B_1, B_2, B_3, 1), H = omega B_1 + J B_2.
//
// Generators are 4x4 with a zero bottom row; the last column carries the
// bath-driven affine term.

#include <optional>
#include <string>

#include "otto/numerics.hpp"

namespace otto::models {

using Generator = numerics::Matrix4;
using StateVec = numerics::Vector4;

enum class FluidKind { harmonic, spin };

/// Frequency profile along an adiabat.
enum class ScheduleKind {
  constant_mu,  // d omega / dt = mu omega^2
  linear,
};

std::string to_string(FluidKind k);
std::string to_string(ScheduleKind k);

struct FluidParams {
  FluidKind kind = FluidKind::harmonic;
  double mass = 1.0;      // harmonic only
  double coupling = 0.0;  // spin only
  ScheduleKind schedule = ScheduleKind::constant_mu;
};

FluidParams harmonic_fluid(double mass = 1.0);
FluidParams spin_fluid(double coupling, ScheduleKind schedule = ScheduleKind::linear);

struct BathParams {
  double beta = 1.0;
  double gamma = 0.0;
};

/// (omega/2) coth(beta omega / 2).
double heq_harmonic(double beta, double omega);

/// Omega tanh(-Omega beta / 2) with Omega = sqrt(omega^2 + J^2).
double heq_spin(double beta, double omega, double coupling);

double heq(const FluidParams& fluid, double beta, double omega);

struct TransitionRates {
  double down = 0.0;
  double up = 0.0;
};

/// Rates with k_down - k_up = gamma and k_up / k_down = exp(-beta omega).
TransitionRates transition_rates(double gamma, double beta, double omega);

Generator generator_harmonic(double omega, double mass, std::optional<BathParams> bath = std::nullopt);
Generator generator_spin(double omega, double coupling, std::optional<BathParams> bath = std::nullopt);
Generator generator(const FluidParams& fluid, double omega,
                    std::optional<BathParams> bath = std::nullopt);

/// Energy expectation for the given state at frequency omega.
double energy(const FluidParams& fluid, double omega, const StateVec& x);

class AdiabatSchedule {
 public:
  AdiabatSchedule(ScheduleKind kind, double omega_i, double omega_f, double tau);

  double omega(double t) const;
  double mu() const { return mu_; }
  double omega_i() const { return omega_i_; }
  double omega_f() const { return omega_f_; }
  double tau() const { return tau_; }
  ScheduleKind kind() const { return kind_; }

 private:
  ScheduleKind kind_;
  double omega_i_;
  double omega_f_;
  double tau_;
  double mu_ = 0.0;
};

/// Constant-mu schedule: mu = (1/omega_i - 1/omega_f)/tau, omega(t) = 1/(1/omega_i - mu t).
AdiabatSchedule adiabat_schedule_harmonic(double omega_i, double omega_f, double tau);

AdiabatSchedule adiabat_schedule(const FluidParams& fluid, double omega_i, double omega_f, double tau);

/// Stationary state of the isochore generator. Throws no_thermal_state when
/// gamma = 0.
StateVec thermal_state(const FluidParams& fluid, const BathParams& bath, double omega);

/// Q^2 P^2 - (D/2)^2 - 1/4 for a harmonic state (non-negative for physical states).
double uncertainty_margin(const StateVec& x);

}  // namespace otto::models
