#include "otto/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "otto/error.hpp"
#include "otto/format.hpp"

namespace otto::landscape {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw NumericalError(NumericalError::Kind::invalid_argument, what);
}

void validate_axis(const AxisRange& a, const std::string& name) {
  require(std::isfinite(a.lo) && std::isfinite(a.hi) && a.lo > 0.0 && a.hi >= a.lo,
          name + " range must satisfy 0 < lo <= hi");
  require(a.n >= 2, name + " needs at least 2 points");
}

}  // namespace

std::string to_string(CellClass c) {
  switch (c) {
    case CellClass::divergent: return "divergent";
    case CellClass::marginal: return "marginal";
    case CellClass::wrong_heat_sign: return "wrong-heat-sign";
    case CellClass::negative_work: return "negative-work";
    case CellClass::engine: return "engine";
    case CellClass::undetermined: return "undetermined";
  }
  return "unknown";
}

double AxisRange::value(int i) const {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * i / (n - 1);
}

void GridSpec::validate() const {
  validate_axis(tau_H, "tau_H");
  validate_axis(tau_C, "tau_C");
  base.validate();
}

LandscapeCell classify_cell(const propagation::CycleFamily& family, double tau_H, double tau_C) {
  LandscapeCell cell;
  cell.tau_H = tau_H;
  cell.tau_C = tau_C;
  try {
    const auto strokes = family.strokes(tau_H, tau_C);
    const auto u = strokes.cycle();
    const auto spectrum = numerics::eig<3>(u.linear_part());
    for (int i = 0; i < 3; ++i) cell.eigs[i] = spectrum.eigenvalues(i);
    cell.spectral_radius = spectrum.eigenvalues.cwiseAbs().maxCoeff();

    if (cell.spectral_radius > 1.0 + analysis::kMarginalBand) {
      cell.cls = CellClass::divergent;
      return cell;
    }
    if (cell.spectral_radius >= 1.0 - analysis::kMarginalBand) {
      cell.cls = CellClass::marginal;
      return cell;
    }
    analysis::LimitCycleResult lc;
    try {
      lc = analysis::limit_cycle(u);
    } catch (const NumericalError& e) {
      if (e.kind() != NumericalError::Kind::no_isolated_fixed_point) throw;
      cell.cls = CellClass::marginal;
      cell.status = e.what();
      return cell;
    }
    const CycleEnergetics e = analysis::cycle_energetics(family.spec(tau_H, tau_C), strokes, lc);
    cell.energetics = e;
    cell.P_avg = e.P_avg;
    if (e.Q_H <= 0.0 || e.Q_C >= 0.0) cell.cls = CellClass::wrong_heat_sign;
    else if (e.W_tot <= 0.0) cell.cls = CellClass::negative_work;
    else cell.cls = CellClass::engine;
  } catch (const NumericalError& e) {
    cell.cls = CellClass::undetermined;
    cell.status = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return cell;
}

std::vector<LandscapeCell> scan_landscape(const propagation::CycleFamily& family, const AxisRange& tau_H,
                                          const AxisRange& tau_C, int threads) {
  validate_axis(tau_H, "tau_H");
  validate_axis(tau_C, "tau_C");
  const std::size_t total = static_cast<std::size_t>(tau_H.n) * tau_C.n;
  std::vector<LandscapeCell> cells(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const int ic = static_cast<int>(k / tau_H.n);
      const int ih = static_cast<int>(k % tau_H.n);
      cells[k] = classify_cell(family, tau_H.value(ih), tau_C.value(ic));
    }
  };

  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp<int>(n_threads, 1, static_cast<int>(std::min<std::size_t>(total, 256)));
  if (n_threads == 1) {
    worker();
    return cells;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return cells;
}

std::vector<LandscapeCell> scan_landscape(const GridSpec& grid, int threads) {
  grid.validate();
  return scan_landscape(propagation::CycleFamily(grid.base), grid.tau_H, grid.tau_C, threads);
}

void write_csv(std::ostream& out, const std::vector<LandscapeCell>& cells) {
  out << kCsvHeader << "\n";
  for (const LandscapeCell& c : cells) {
    out << format_double(c.tau_H) << ',' << format_double(c.tau_C) << ',' << to_string(c.cls) << ','
        << format_double(c.P_avg) << ',' << format_double(c.spectral_radius);
    for (const Complex& l : c.eigs) out << ',' << format_double(l.real()) << ',' << format_double(l.imag());
    out << ',' << csv_field(c.status) << "\n";
  }
}

}  // namespace otto::landscape
