#pragma once

// Classification of the (tau_H, tau_C) plane at fixed adiabat times.

#include <array>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "otto/analysis.hpp"

namespace otto::landscape {

using analysis::CycleEnergetics;
using numerics::Complex;
using propagation::CycleSpec;

enum class CellClass { divergent, marginal, wrong_heat_sign, negative_work, engine, undetermined };

std::string to_string(CellClass c);

struct AxisRange {
  double lo = 0.05;
  double hi = 3.0;
  int n = 200;

  /// i-th of n evenly spaced points, both ends included.
  double value(int i) const;
};

struct GridSpec {
  CycleSpec base;  // adiabat times, fluid and baths; isochore times are overwritten
  AxisRange tau_H;
  AxisRange tau_C;

  void validate() const;
};

struct LandscapeCell {
  double tau_H = 0.0;
  double tau_C = 0.0;
  CellClass cls = CellClass::undetermined;
  double P_avg = std::numeric_limits<double>::quiet_NaN();  // stable cells only
  double spectral_radius = 0.0;
  std::array<Complex, 3> eigs{};
  std::string status = "ok";
  std::optional<CycleEnergetics> energetics;
};

/// Classifies one cell. Priority: divergent > marginal > wrong-heat-sign >
/// negative-work > engine. Numerical failures give class undetermined with the
/// error in `status`; they never propagate.
LandscapeCell classify_cell(const propagation::CycleFamily& family, double tau_H, double tau_C);

/// One cell per grid point in row-major order (tau_C outer, tau_H inner).
/// `threads` <= 0 uses the hardware concurrency. The result does not depend on
/// the thread count.
std::vector<LandscapeCell> scan_landscape(const GridSpec& grid, int threads = 0);

std::vector<LandscapeCell> scan_landscape(const propagation::CycleFamily& family, const AxisRange& tau_H,
                                          const AxisRange& tau_C, int threads = 0);

inline constexpr const char* kCsvHeader =
    "tau_H,tau_C,class,P_avg,spectral_radius,eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,status";

void write_csv(std::ostream& out, const std::vector<LandscapeCell>& cells);

}  // namespace otto::landscape
