#pragma once

// Stroke propagators and Otto-cycle composition. Every propagator has the
// block form (U~ | C~ ; 0 | 1): a linear part acting on the three operator
// expectations and a translation fed by the identity component.

#include <string>
#include <vector>

#include "otto/models.hpp"
#include "otto/numerics.hpp"

namespace otto::propagation {

using models::BathParams;
using models::FluidParams;
using models::Generator;
using models::StateVec;
using numerics::Matrix3;
using numerics::Matrix4;
using numerics::Vector3;

class Propagator {
 public:
  Propagator();
  /// The bottom row is overwritten with (0, 0, 0, 1).
  Propagator(const Matrix4& matrix, double duration);
  static Propagator from_linear(const Matrix3& linear, double duration);

  const Matrix4& matrix() const { return m_; }
  Matrix3 linear_part() const { return m_.topLeftCorner<3, 3>(); }
  Vector3 translation() const { return m_.topRightCorner<3, 1>(); }
  double duration() const { return duration_; }

  StateVec apply(const StateVec& x) const { return m_ * x; }

 private:
  Matrix4 m_;
  double duration_;
};

/// `later * earlier`: apply `earlier` first. Durations add.
Propagator operator*(const Propagator& later, const Propagator& earlier);

inline constexpr double kAdiabatTol = 1e-10;
inline constexpr int kAdiabatInitialSteps = 8;
inline constexpr int kAdiabatMaxDoublings = 22;

/// exp(tau A) for a time-independent generator.
Propagator isochore_propagator(const Generator& g, double tau);

struct AdiabatIntegration {
  Propagator propagator;
  long steps = 0;
  double last_change = 0.0;  // relative max-norm change at the final doubling
};

/// Time-ordered product of midpoint exponentials over [t0, t1] of the
/// schedule, doubling the step count until successive products differ by less
/// than `tol` relative to their max norm. Throws adiabat_integration_failure
/// after `max_doublings` doublings.
AdiabatIntegration integrate_adiabat(const FluidParams& fluid, const models::AdiabatSchedule& schedule,
                                     double t0, double t1, double tol = kAdiabatTol,
                                     int max_doublings = kAdiabatMaxDoublings);

/// Same product with a fixed number of midpoint steps.
Propagator adiabat_product(const FluidParams& fluid, const models::AdiabatSchedule& schedule,
                           double t0, double t1, long steps);

Propagator adiabat_propagator(const FluidParams& fluid, double omega_i, double omega_f, double tau,
                              double tol = kAdiabatTol);

/// Omega_1 + Omega_2 of the Magnus expansion over the whole stroke, by
/// composite nested Gauss-Legendre quadrature refined to relative 1e-10.
Matrix3 magnus2_exponent(const FluidParams& fluid, double omega_i, double omega_f, double tau);

/// exp(Omega_1 + Omega_2).
Propagator adiabat_propagator_magnus2(const FluidParams& fluid, double omega_i, double omega_f,
                                      double tau);

/// Otto cycle: hot isochore, expansion adiabat, cold isochore, compression adiabat.
struct CycleSpec {
  FluidParams fluid;
  double omega_H = 30.0;
  double omega_C = 15.0;
  BathParams bath_H{0.008, 0.7};
  BathParams bath_C{0.03, 0.7};
  double tau_H = 2.0;
  double tau_HC = 0.1;
  double tau_C = 2.0;
  double tau_CH = 0.1;
  double adiabat_tol = kAdiabatTol;

  double period() const { return tau_H + tau_HC + tau_C + tau_CH; }

  /// Throws invalid_argument for non-physical values; returns human-readable
  /// warnings when the engine ordering beta_C > beta_H, omega_C < omega_H fails.
  std::vector<std::string> validate() const;
};

enum class Stroke { hot, expansion, cold, compression };

std::string to_string(Stroke s);

/// Frequency at time t into the given stroke.
double stroke_omega(const CycleSpec& spec, Stroke s, double t);

double stroke_duration(const CycleSpec& spec, Stroke s);

struct StrokePropagators {
  Propagator hot;
  Propagator expansion;
  Propagator cold;
  Propagator compression;

  const Propagator& operator[](Stroke s) const;
  /// U_CH U_C U_HC U_H
  Propagator cycle() const;
};

StrokePropagators stroke_propagators(const CycleSpec& spec);

Propagator compose_cycle(const CycleSpec& spec);

/// Cycles that share everything except the isochore times. The adiabats are
/// integrated once at construction; evaluating a member is two 4x4
/// exponentials and three products. Thread-safe for concurrent const use.
class CycleFamily {
 public:
  explicit CycleFamily(const CycleSpec& base);

  const CycleSpec& base() const { return base_; }
  CycleSpec spec(double tau_H, double tau_C) const;
  /// Same family with the base isochore times replaced; no re-integration.
  CycleFamily with_isochores(double tau_H, double tau_C) const;
  StrokePropagators strokes(double tau_H, double tau_C) const;
  Propagator cycle(double tau_H, double tau_C) const;

 private:
  CycleSpec base_;
  Generator hot_generator_;
  Generator cold_generator_;
  Propagator expansion_;
  Propagator compression_;
};

}  // namespace otto::propagation
