#pragma once

// Limit cycles, stability, the traceless exponent of the cycle propagator,
// exceptional points along one-parameter scans, trajectories and energetics.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "otto/numerics.hpp"
#include "otto/propagation.hpp"

namespace otto::analysis {

using numerics::Complex;
using numerics::Matrix3;
using numerics::Matrix4;
using propagation::CycleFamily;
using propagation::CycleSpec;
using propagation::Propagator;
using propagation::Stroke;
using propagation::StrokePropagators;
using models::StateVec;

/// Width of the band around spectral radius 1 that counts as marginal.
inline constexpr double kMarginalBand = 1e-9;

enum class Stability { stable_spiral, stable_node, unstable, marginal };

std::string to_string(Stability s);

struct LimitCycleResult {
  StateVec fixed_point;
  Stability stability = Stability::marginal;
  double spectral_radius = 0.0;
  double convergence_rate = 0.0;  // second-largest eigenvalue modulus
  std::array<Complex, 3> eigenvalues{};

  bool stable() const {
    return stability == Stability::stable_spiral || stability == Stability::stable_node;
  }
};

/// Fixed point X = (1 - U~)^-1 C~ of the affine cycle map and its stability.
/// Throws no_isolated_fixed_point when 1 - U~ is singular.
LimitCycleResult limit_cycle(const Propagator& u);

/// Stability class from the eigenvalues of U~ alone.
Stability classify_stability(const std::array<Complex, 3>& eigenvalues);

struct OmegaCoefficients {
  std::array<double, 3> alpha{};  // along the oscillator basis (Q^2, D, P^2)
  std::array<Complex, 3> w_eigenvalues{};  // (0, w+, w-)
  double discriminant = 0.0;  // w+^2
  double projection_residual = 0.0;
  bool flagged = false;  // log hit the branch cut or left the algebra
};

/// Splits off the scalar damping exp(-gamma_sum) from the linear part of a
/// harmonic cycle propagator, takes the principal logarithm and projects it on
/// the oscillator algebra. For Omega = a1 A1 + a2 A2 + a3 A3 the nonzero
/// eigenvalues are +-w with w^2 = 16 (a2^2 - a1 a3).
OmegaCoefficients omega_coefficients(const Propagator& u, double gamma_sum);

/// Gamma_H tau_H + Gamma_C tau_C: the exponent of the scalar damping factor.
double damping_exponent(const CycleSpec& spec);

enum class Block { linear, full };

/// |det T| for the unit-norm eigenvector matrix of U~ (linear) or U (full).
double eigenvector_det(const Propagator& u, Block which);

/// lambda + 1/lambda - 2 for the pair of eigenvalues of exp(gamma_sum) U~ other
/// than the unit one. Positive when that pair is real, negative when it is a
/// complex conjugate pair on the unit circle; zero at a three-fold degeneracy.
double real_spectrum_indicator(const Propagator& u, double gamma_sum);

double spectral_radius(const Propagator& u);

enum class ScanParameter { tau_H, tau_C };

std::string to_string(ScanParameter p);

struct ScanRange {
  ScanParameter parameter = ScanParameter::tau_H;
  double lo = 0.05;
  double hi = 1.0;
};

/// Copy of `spec` with the scanned isochore time set to `value`.
CycleSpec at_parameter(const CycleSpec& spec, ScanParameter p, double value);

inline constexpr double kBisectionWidth = 1e-12;

struct ExceptionalPoint {
  double parameter_value = 0.0;
  int order = 0;
  double det_T = 0.0;
  std::array<double, 2> bracketing_interval{};
  std::array<Complex, 3> eigenvalues{};  // of U~ at the refined point
};

/// Samples the range uniformly, brackets sign changes of the real-spectrum
/// indicator (order 3) and of spectral radius - 1 (order 2), and bisects each
/// bracket to kBisectionWidth. Sorted by parameter value. Transitions closer
/// together than the sample spacing can be missed.
std::vector<ExceptionalPoint> find_exceptional_points(const CycleFamily& family, const ScanRange& range,
                                                      int n_samples);

std::vector<ExceptionalPoint> find_exceptional_points(const CycleSpec& spec, const ScanRange& range,
                                                      int n_samples);

struct SpectrumSample {
  double parameter_value = 0.0;
  std::array<Complex, 3> eigenvalues{};
  double spectral_radius = 0.0;
  double det_T_linear = 0.0;
  double det_T_full = 0.0;
  double real_spectrum_indicator = 0.0;
  std::optional<OmegaCoefficients> omega;  // harmonic fluids only
};

/// n evenly spaced samples including both ends.
std::vector<SpectrumSample> scan_spectrum(const CycleFamily& family, const ScanRange& range, int n);

inline constexpr double kDivergenceCutoff = 1e12;

struct TrajectorySample {
  long cycle = 0;
  Stroke stroke = Stroke::hot;
  double stroke_time = 0.0;
  double time = 0.0;
  StateVec state;
  double omega = 0.0;
  double energy = 0.0;
  double excitation = 0.0;  // H / omega, the N + 1/2 coordinate
};

struct CycleRecord {
  long cycle = 0;
  StateVec start;
  double distance = 0.0;  // Euclidean distance to the fixed point, NaN if there is none
};

enum class TrajectoryStatus { complete, diverged };

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<CycleRecord> cycles;
  TrajectoryStatus status = TrajectoryStatus::complete;
  long diverged_at = -1;
  std::optional<LimitCycleResult> limit_cycle;

  std::string status_text() const;
};

/// Runs n_cycles full cycles from x_init, sampling each stroke at
/// samples_per_stroke evenly spaced times, plus a final sample at the start of
/// the next cycle. Stops with status diverged once a state leaves the finite
/// range or its norm exceeds kDivergenceCutoff.
Trajectory iterate_trajectory(const CycleSpec& spec, const StateVec& x_init, long n_cycles,
                              int samples_per_stroke = 32);

struct CycleEnergetics {
  double Q_H = 0.0;
  double W_HC = 0.0;
  double Q_C = 0.0;
  double W_CH = 0.0;
  double W_tot = 0.0;
  double P_avg = 0.0;
  std::array<double, 5> boundary_energies{};  // H at the stroke boundaries, starting on the hot isochore
};

/// Energy bookkeeping along the limit cycle. Heat is positive when it flows
/// into the working medium; work is positive when it is extracted.
CycleEnergetics cycle_energetics(const CycleSpec& spec, const StrokePropagators& strokes,
                                 const LimitCycleResult& lc);

CycleEnergetics cycle_energetics(const CycleSpec& spec, const LimitCycleResult& lc);

}  // namespace otto::analysis
