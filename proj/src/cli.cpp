#include "otto/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "otto/algebra.hpp"
#include "otto/error.hpp"
#include "otto/format.hpp"

namespace otto::cli {

namespace {

using numerics::Complex;
using propagation::CycleSpec;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; }))
      fail(where, "unknown key \"" + item.key() + "\"");
  }
}

double get_number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_object() && v.size() == 1 && v.contains("sqrt")) {
    const json& r = v.at("sqrt");
    if (!r.is_number()) fail(where, "\"sqrt\" needs a number");
    const double x = r.get<double>();
    if (x < 0.0) fail(where, "\"sqrt\" of a negative number");
    return std::sqrt(x);
  }
  fail(where, "expected a number or {\"sqrt\": x}");
}

long get_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

template <typename F>
void with_key(const json& obj, const char* key, const std::string& where, F&& f) {
  if (obj.contains(key)) f(obj.at(key), where + "." + key);
}

void read_axis(const json& j, const std::string& where, landscape::AxisRange& axis) {
  allow_keys(j, where, {"lo", "hi", "n"});
  with_key(j, "lo", where, [&](const json& v, const std::string& w) { axis.lo = get_number(v, w); });
  with_key(j, "hi", where, [&](const json& v, const std::string& w) { axis.hi = get_number(v, w); });
  with_key(j, "n", where, [&](const json& v, const std::string& w) {
    const long n = get_integer(v, w);
    if (n < 2 || n > 100000) fail(w, "must be between 2 and 100000");
    axis.n = static_cast<int>(n);
  });
  if (!(axis.lo > 0.0) || !(axis.hi >= axis.lo) || !std::isfinite(axis.hi))
    fail(where, "range must satisfy 0 < lo <= hi");
}

std::vector<int> read_dimensions(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (const json& e : v) {
    const long m = get_integer(e, where);
    if (m < 2 || m > 5) fail(where, "dimensions must be between 2 and 5");
    out.push_back(static_cast<int>(m));
  }
  return out;
}

models::ScheduleKind read_schedule(const json& v, const std::string& where) {
  const std::string s = get_string(v, where);
  if (s == "constant-mu") return models::ScheduleKind::constant_mu;
  if (s == "linear") return models::ScheduleKind::linear;
  fail(where, "expected \"constant-mu\" or \"linear\"");
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json eigenvalues_json(const std::array<Complex, 3>& eigs) {
  json a = json::array();
  for (const Complex& z : eigs) a.push_back(complex_json(z));
  return a;
}

std::vector<std::string> state_names(const CycleSpec& spec) {
  if (spec.fluid.kind == models::FluidKind::harmonic) return {"Q2", "D", "P2"};
  return {"B1", "B2", "B3"};
}

models::StateVec initial_state(const RunConfig& c) {
  switch (c.initial) {
    case InitialState::cold_thermal:
      return models::thermal_state(c.cycle.fluid, c.cycle.bath_C, c.cycle.omega_C);
    case InitialState::hot_thermal:
      return models::thermal_state(c.cycle.fluid, c.cycle.bath_H, c.cycle.omega_H);
    case InitialState::limit_cycle:
      return analysis::limit_cycle(propagation::compose_cycle(c.cycle)).fixed_point;
    case InitialState::explicit_state: return c.initial_state;
  }
  return c.initial_state;
}

CommandResult trajectory_command(const RunConfig& c) {
  const analysis::Trajectory t =
      analysis::iterate_trajectory(c.cycle, initial_state(c), c.n_cycles, c.samples_per_stroke);
  std::ostringstream csv;
  const auto names = state_names(c.cycle);
  csv << "cycle,stroke,stroke_time,time," << names[0] << ',' << names[1] << ',' << names[2]
      << ",omega,energy,excitation,distance\n";
  for (const analysis::TrajectorySample& s : t.samples) {
    csv << s.cycle << ',' << propagation::to_string(s.stroke) << ',' << format_double(s.stroke_time) << ','
        << format_double(s.time);
    for (int i = 0; i < 3; ++i) csv << ',' << format_double(s.state(i));
    csv << ',' << format_double(s.omega) << ',' << format_double(s.energy) << ','
        << format_double(s.excitation) << ',' << format_double(t.cycles[s.cycle].distance) << '\n';
  }
  CommandResult r;
  r.content = csv.str();
  r.summary = {{"command", "trajectory"},
               {"status", t.status_text()},
               {"rows", t.samples.size()},
               {"spectral_radius", t.limit_cycle ? json(t.limit_cycle->spectral_radius) : json(nullptr)}};
  return r;
}

json energetics_json(const analysis::CycleEnergetics& e) {
  return {{"Q_H", e.Q_H}, {"W_HC", e.W_HC}, {"Q_C", e.Q_C},
          {"W_CH", e.W_CH}, {"W_tot", e.W_tot}, {"P_avg", e.P_avg}};
}

CommandResult limit_cycle_command(const RunConfig& c) {
  const auto strokes = propagation::stroke_propagators(c.cycle);
  const analysis::LimitCycleResult lc = analysis::limit_cycle(strokes.cycle());
  json out;
  out["parameters"] = cycle_to_json(c.cycle);
  json x = json::array();
  for (int i = 0; i < 4; ++i) x.push_back(lc.fixed_point(i));
  out["fixed_point"] = x;
  out["stability"] = analysis::to_string(lc.stability);
  out["spectral_radius"] = lc.spectral_radius;
  out["convergence_rate"] = lc.convergence_rate;
  out["eigenvalues"] = eigenvalues_json(lc.eigenvalues);
  out["energetics"] = lc.stable() ? energetics_json(analysis::cycle_energetics(c.cycle, strokes, lc)) : json(nullptr);
  CommandResult r;
  r.content = out.dump(2) + "\n";
  r.summary = {{"command", "limit-cycle"}, {"stability", out["stability"]}, {"spectral_radius", lc.spectral_radius}};
  return r;
}

CommandResult spectrum_scan_command(const RunConfig& c) {
  const propagation::CycleFamily family(c.cycle);
  const auto rows = analysis::scan_spectrum(family, c.scan, c.scan_points);
  const bool harmonic = c.cycle.fluid.kind == models::FluidKind::harmonic;
  std::ostringstream csv;
  csv << analysis::to_string(c.scan.parameter)
      << ",eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,spectral_radius,det_T_linear,det_T_full,"
         "real_spectrum_indicator";
  if (harmonic) csv << ",alpha1,alpha2,alpha3,w_squared,w_plus_re,w_plus_im,omega_flagged";
  csv << '\n';
  for (const analysis::SpectrumSample& s : rows) {
    csv << format_double(s.parameter_value);
    for (const Complex& z : s.eigenvalues) csv << ',' << format_double(z.real()) << ',' << format_double(z.imag());
    csv << ',' << format_double(s.spectral_radius) << ',' << format_double(s.det_T_linear) << ','
        << format_double(s.det_T_full) << ',' << format_double(s.real_spectrum_indicator);
    if (harmonic) {
      const analysis::OmegaCoefficients& w = *s.omega;
      for (double a : w.alpha) csv << ',' << format_double(a);
      csv << ',' << format_double(w.discriminant) << ',' << format_double(w.w_eigenvalues[1].real()) << ','
          << format_double(w.w_eigenvalues[1].imag()) << ',' << (w.flagged ? 1 : 0);
    }
    csv << '\n';
  }
  CommandResult r;
  r.content = csv.str();
  r.summary = {{"command", "spectrum-scan"}, {"rows", rows.size()}};
  return r;
}

CommandResult exceptional_points_command(const RunConfig& c) {
  const auto points = analysis::find_exceptional_points(c.cycle, c.scan, c.ep_samples);
  json out;
  out["parameters"] = cycle_to_json(c.cycle);
  out["scan"] = {{"parameter", analysis::to_string(c.scan.parameter)},
                 {"lo", c.scan.lo},
                 {"hi", c.scan.hi},
                 {"n_samples", c.ep_samples}};
  json list = json::array();
  int order3 = 0;
  int order2 = 0;
  for (const analysis::ExceptionalPoint& ep : points) {
    (ep.order == 3 ? order3 : order2)++;
    list.push_back({{"parameter_value", ep.parameter_value},
                    {"order", ep.order},
                    {"det_T", ep.det_T},
                    {"bracketing_interval", {ep.bracketing_interval[0], ep.bracketing_interval[1]}},
                    {"eigenvalues", eigenvalues_json(ep.eigenvalues)}});
  }
  out["points"] = list;
  out["counts"] = {{"order_3", order3}, {"order_2", order2}};
  CommandResult r;
  r.content = out.dump(2) + "\n";
  r.summary = {{"command", "exceptional-points"}, {"order_3", order3}, {"order_2", order2}};
  return r;
}

CommandResult landscape_command(const RunConfig& c, int threads) {
  landscape::GridSpec grid;
  grid.base = c.cycle;
  grid.tau_H = c.grid_tau_H;
  grid.tau_C = c.grid_tau_C;
  const auto cells = landscape::scan_landscape(grid, threads);
  std::ostringstream csv;
  landscape::write_csv(csv, cells);
  std::map<std::string, int> counts;
  for (const landscape::LandscapeCell& cell : cells) ++counts[landscape::to_string(cell.cls)];
  json classes = json::object();
  for (landscape::CellClass k : {landscape::CellClass::divergent, landscape::CellClass::marginal,
                                 landscape::CellClass::wrong_heat_sign, landscape::CellClass::negative_work,
                                 landscape::CellClass::engine, landscape::CellClass::undetermined})
    classes[landscape::to_string(k)] = counts[landscape::to_string(k)];
  CommandResult r;
  r.content = csv.str();
  r.summary = {{"command", "landscape"}, {"cells", cells.size()}, {"classes", classes}};
  return r;
}

json algebra_entry(const std::string& name, const algebra::LieStructure& s) {
  const algebra::LieCheck lie = algebra::check_lie_algebra(s);
  const algebra::KillingForm k = algebra::killing_form(s);
  const algebra::AntisymmetryCheck anti = algebra::is_totally_antisymmetric(s);
  json matrix = json::array();
  for (Eigen::Index i = 0; i < k.matrix.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < k.matrix.cols(); ++j) row.push_back(k.matrix(i, j));
    matrix.push_back(row);
  }
  json eigenvalues = json::array();
  for (Eigen::Index i = 0; i < k.eigenvalues.size(); ++i) eigenvalues.push_back(k.eigenvalues(i));
  return {{"name", name},
          {"dimension", s.n},
          {"labels", s.labels},
          {"lie_algebra",
           {{"antisymmetric_first_pair", lie.antisymmetric_first_pair},
            {"antisymmetry_violation", lie.antisymmetry_violation},
            {"jacobi_residual", lie.jacobi_residual}}},
          {"killing_form",
           {{"matrix", matrix},
            {"eigenvalues", eigenvalues},
            {"definiteness", algebra::to_string(k.definiteness)}}},
          {"totally_antisymmetric",
           {{"holds", anti.totally_antisymmetric}, {"max_violation", anti.max_violation}}},
          {"structure_constants", algebra::to_json(s)}};
}

CommandResult algebra_check_command(const RunConfig& c) {
  json list = json::array();
  list.push_back(algebra_entry("oscillator", algebra::oscillator_algebra()));
  list.push_back(algebra_entry("spin", algebra::spin_algebra()));
  for (int m : c.su_dimensions) list.push_back(algebra_entry("su(" + std::to_string(m) + ")", algebra::gell_mann_basis(m)));
  for (int m : c.u_dimensions)
    list.push_back(algebra_entry("u(" + std::to_string(m) + ")", algebra::gell_mann_basis(m, true)));
  CommandResult r;
  r.content = json{{"algebras", list}}.dump(2) + "\n";
  r.summary = {{"command", "algebra-check"}, {"algebras", list.size()}};
  return r;
}

std::string kind_id(NumericalError::Kind k) {
  std::string id(to_string(k));
  std::replace_if(id.begin(), id.end(), [](char ch) { return ch == ' ' || ch == '-'; }, '_');
  return id;
}

json error_line(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::trajectory: return "trajectory";
    case Command::limit_cycle: return "limit-cycle";
    case Command::spectrum_scan: return "spectrum-scan";
    case Command::exceptional_points: return "exceptional-points";
    case Command::landscape: return "landscape";
    case Command::algebra_check: return "algebra-check";
  }
  return "unknown";
}

std::optional<Command> command_from_string(const std::string& name) {
  for (Command c : {Command::trajectory, Command::limit_cycle, Command::spectrum_scan,
                    Command::exceptional_points, Command::landscape, Command::algebra_check})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "harmonic") {
    c.cycle.fluid = models::harmonic_fluid(1.0);
    return c;
  }
  if (name == "spin") {
    c.cycle.fluid = models::spin_fluid(2.0);
    c.cycle.omega_H = std::sqrt(41.0);
    c.cycle.omega_C = std::sqrt(11.0);
    c.cycle.bath_H = {0.008, 0.2};
    c.cycle.bath_C = {0.03, 0.2};
    c.cycle.tau_HC = c.cycle.tau_CH = 0.64;
    return c;
  }
  throw ConfigError("config.preset: expected \"harmonic\" or \"spin\"");
}

RunConfig parse_config(const json& j) {
  allow_keys(j, "config", {"preset", "fluid", "baths", "frequencies", "times", "adiabat_tolerance", "trajectory",
                           "scan", "landscape", "algebra"});
  RunConfig c = preset(j.contains("preset") ? get_string(j.at("preset"), "config.preset") : "harmonic");
  CycleSpec& s = c.cycle;

  with_key(j, "fluid", "config", [&](const json& f, const std::string& where) {
    allow_keys(f, where, {"kind", "mass", "coupling", "schedule"});
    with_key(f, "kind", where, [&](const json& v, const std::string& w) {
      const std::string kind = get_string(v, w);
      if (kind == "harmonic") {
        if (s.fluid.kind != models::FluidKind::harmonic) s.fluid = models::harmonic_fluid(1.0);
      } else if (kind == "spin") {
        if (s.fluid.kind != models::FluidKind::spin) s.fluid = models::spin_fluid(2.0);
      } else {
        fail(w, "expected \"harmonic\" or \"spin\"");
      }
    });
    const bool harmonic = s.fluid.kind == models::FluidKind::harmonic;
    with_key(f, "mass", where, [&](const json& v, const std::string& w) {
      if (!harmonic) fail(w, "only valid for a harmonic fluid");
      s.fluid.mass = get_number(v, w);
    });
    with_key(f, "coupling", where, [&](const json& v, const std::string& w) {
      if (harmonic) fail(w, "only valid for a spin fluid");
      s.fluid.coupling = get_number(v, w);
    });
    with_key(f, "schedule", where,
             [&](const json& v, const std::string& w) { s.fluid.schedule = read_schedule(v, w); });
  });

  with_key(j, "baths", "config", [&](const json& b, const std::string& where) {
    allow_keys(b, where, {"beta_H", "beta_C", "gamma_H", "gamma_C"});
    with_key(b, "beta_H", where, [&](const json& v, const std::string& w) { s.bath_H.beta = get_number(v, w); });
    with_key(b, "beta_C", where, [&](const json& v, const std::string& w) { s.bath_C.beta = get_number(v, w); });
    with_key(b, "gamma_H", where, [&](const json& v, const std::string& w) { s.bath_H.gamma = get_number(v, w); });
    with_key(b, "gamma_C", where, [&](const json& v, const std::string& w) { s.bath_C.gamma = get_number(v, w); });
  });

  with_key(j, "frequencies", "config", [&](const json& f, const std::string& where) {
    allow_keys(f, where, {"omega_H", "omega_C"});
    with_key(f, "omega_H", where, [&](const json& v, const std::string& w) { s.omega_H = get_number(v, w); });
    with_key(f, "omega_C", where, [&](const json& v, const std::string& w) { s.omega_C = get_number(v, w); });
  });

  with_key(j, "times", "config", [&](const json& t, const std::string& where) {
    allow_keys(t, where, {"tau_H", "tau_HC", "tau_C", "tau_CH"});
    with_key(t, "tau_H", where, [&](const json& v, const std::string& w) { s.tau_H = get_number(v, w); });
    with_key(t, "tau_HC", where, [&](const json& v, const std::string& w) { s.tau_HC = get_number(v, w); });
    with_key(t, "tau_C", where, [&](const json& v, const std::string& w) { s.tau_C = get_number(v, w); });
    with_key(t, "tau_CH", where, [&](const json& v, const std::string& w) { s.tau_CH = get_number(v, w); });
  });

  with_key(j, "adiabat_tolerance", "config",
           [&](const json& v, const std::string& w) { s.adiabat_tol = get_number(v, w); });

  with_key(j, "trajectory", "config", [&](const json& t, const std::string& where) {
    allow_keys(t, where, {"n_cycles", "samples_per_stroke", "initial_state"});
    with_key(t, "n_cycles", where, [&](const json& v, const std::string& w) {
      c.n_cycles = get_integer(v, w);
      if (c.n_cycles < 1) fail(w, "must be at least 1");
    });
    with_key(t, "samples_per_stroke", where, [&](const json& v, const std::string& w) {
      const long n = get_integer(v, w);
      if (n < 1 || n > 100000) fail(w, "must be between 1 and 100000");
      c.samples_per_stroke = static_cast<int>(n);
    });
    with_key(t, "initial_state", where, [&](const json& v, const std::string& w) {
      if (v.is_array()) {
        if (v.size() != 3) fail(w, "explicit state needs three components");
        c.initial = InitialState::explicit_state;
        for (int i = 0; i < 3; ++i) c.initial_state(i) = get_number(v[i], w);
        c.initial_state(3) = 1.0;
        return;
      }
      const std::string name = get_string(v, w);
      if (name == "cold-thermal") c.initial = InitialState::cold_thermal;
      else if (name == "hot-thermal") c.initial = InitialState::hot_thermal;
      else if (name == "limit-cycle") c.initial = InitialState::limit_cycle;
      else fail(w, "expected \"cold-thermal\", \"hot-thermal\", \"limit-cycle\" or [x1, x2, x3]");
    });
  });

  with_key(j, "scan", "config", [&](const json& t, const std::string& where) {
    allow_keys(t, where, {"parameter", "lo", "hi", "n_points", "n_samples"});
    with_key(t, "parameter", where, [&](const json& v, const std::string& w) {
      const std::string p = get_string(v, w);
      if (p == "tau_H") c.scan.parameter = analysis::ScanParameter::tau_H;
      else if (p == "tau_C") c.scan.parameter = analysis::ScanParameter::tau_C;
      else fail(w, "expected \"tau_H\" or \"tau_C\"");
    });
    with_key(t, "lo", where, [&](const json& v, const std::string& w) { c.scan.lo = get_number(v, w); });
    with_key(t, "hi", where, [&](const json& v, const std::string& w) { c.scan.hi = get_number(v, w); });
    with_key(t, "n_points", where, [&](const json& v, const std::string& w) {
      const long n = get_integer(v, w);
      if (n < 2 || n > 10000000) fail(w, "must be between 2 and 10000000");
      c.scan_points = static_cast<int>(n);
    });
    with_key(t, "n_samples", where, [&](const json& v, const std::string& w) {
      const long n = get_integer(v, w);
      if (n < 16 || n > 10000000) fail(w, "must be between 16 and 10000000");
      c.ep_samples = static_cast<int>(n);
    });
    if (!(c.scan.lo > 0.0) || !(c.scan.hi > c.scan.lo) || !std::isfinite(c.scan.hi))
      fail(where, "range must satisfy 0 < lo < hi");
  });

  with_key(j, "landscape", "config", [&](const json& t, const std::string& where) {
    allow_keys(t, where, {"tau_H", "tau_C"});
    with_key(t, "tau_H", where, [&](const json& v, const std::string& w) { read_axis(v, w, c.grid_tau_H); });
    with_key(t, "tau_C", where, [&](const json& v, const std::string& w) { read_axis(v, w, c.grid_tau_C); });
  });

  with_key(j, "algebra", "config", [&](const json& t, const std::string& where) {
    allow_keys(t, where, {"su_dimensions", "u_dimensions"});
    with_key(t, "su_dimensions", where,
             [&](const json& v, const std::string& w) { c.su_dimensions = read_dimensions(v, w); });
    with_key(t, "u_dimensions", where,
             [&](const json& v, const std::string& w) { c.u_dimensions = read_dimensions(v, w); });
  });

  try {
    s.validate();
  } catch (const NumericalError& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  json j;
  try {
    j = json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

json cycle_to_json(const CycleSpec& s) {
  json fluid;
  fluid["kind"] = models::to_string(s.fluid.kind);
  if (s.fluid.kind == models::FluidKind::harmonic) fluid["mass"] = s.fluid.mass;
  else fluid["coupling"] = s.fluid.coupling;
  fluid["schedule"] = models::to_string(s.fluid.schedule);
  return {{"fluid", fluid},
          {"baths",
           {{"beta_H", s.bath_H.beta}, {"beta_C", s.bath_C.beta}, {"gamma_H", s.bath_H.gamma},
            {"gamma_C", s.bath_C.gamma}}},
          {"frequencies", {{"omega_H", s.omega_H}, {"omega_C", s.omega_C}}},
          {"times", {{"tau_H", s.tau_H}, {"tau_HC", s.tau_HC}, {"tau_C", s.tau_C}, {"tau_CH", s.tau_CH}}},
          {"adiabat_tolerance", s.adiabat_tol}};
}

CommandResult run_command(Command c, const RunConfig& config, int threads) {
  CommandResult r;
  switch (c) {
    case Command::trajectory: r = trajectory_command(config); break;
    case Command::limit_cycle: r = limit_cycle_command(config); break;
    case Command::spectrum_scan: r = spectrum_scan_command(config); break;
    case Command::exceptional_points: r = exceptional_points_command(config); break;
    case Command::landscape: r = landscape_command(config, threads); break;
    case Command::algebra_check: r = algebra_check_command(config); break;
  }
  if (c != Command::algebra_check) r.warnings = config.cycle.validate();
  return r;
}

std::optional<std::string> plot_script(Command c, const RunConfig& config, const std::string& data_path) {
  std::ostringstream g;
  g << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "data = '" << data_path << "'\n";
  switch (c) {
    case Command::trajectory:
      g << "set xlabel 'omega'\nset ylabel 'H / omega'\n"
        << "plot data using 'omega':'excitation' with lines title 'trajectory'\n";
      return g.str();
    case Command::spectrum_scan: {
      const std::string p = analysis::to_string(config.scan.parameter);
      g << "set xlabel '" << p << "'\nset multiplot layout 2,1\n"
        << "set ylabel 'Re eigenvalue'\n"
        << "plot data using '" << p << "':'eig1_re' with lines, '' using '" << p
        << "':'eig2_re' with lines, '' using '" << p << "':'eig3_re' with lines\n"
        << "set ylabel '|det T|'\n"
        << "plot data using '" << p << "':'det_T_linear' with lines, '' using '" << p
        << "':'det_T_full' with lines\n"
        << "unset multiplot\n";
      return g.str();
    }
    case Command::landscape:
      g << "set xlabel 'tau_H'\nset ylabel 'tau_C'\nset cblabel 'P_avg'\n"
        << "plot data using 'tau_H':'tau_C':'P_avg' with image notitle\n";
      return g.str();
    default: return std::nullopt;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit cycles, stability and exceptional points of quantum Otto cycles", "otto-ep"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_path;
  std::string plot_path;
  int threads = 0;
  const std::map<Command, std::string> help{
      {Command::trajectory, "per-sample states of repeated cycles (CSV)"},
      {Command::limit_cycle, "fixed point, stability and energetics (JSON)"},
      {Command::spectrum_scan, "cycle-map spectrum along tau_H or tau_C (CSV)"},
      {Command::exceptional_points, "exceptional points along a scan (JSON)"},
      {Command::landscape, "classification and power over the (tau_H, tau_C) plane (CSV)"},
      {Command::algebra_check, "structure-constant and Killing-form report (JSON)"},
  };
  for (const auto& [cmd, text] : help) {
    CLI::App* sub = app.add_subcommand(to_string(cmd), text);
    sub->add_option("--config", config_path, "JSON configuration (defaults to the harmonic parameter set)");
    sub->add_option("--out", out_path, "output file, - for stdout")->required();
    sub->add_option("--threads", threads, "worker threads for landscape scans, 0 for all cores")
        ->check(CLI::NonNegativeNumber);
    if (plot_script(cmd, RunConfig{}, "").has_value())
      sub->add_option("--plot-script", plot_path, "also write a gnuplot script for the output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_line("usage", e.what()).dump() << '\n';
    return 1;
  }
  const Command cmd = *command_from_string(app.get_subcommands().front()->get_name());

  RunConfig config;
  try {
    config = config_path.empty() ? preset("harmonic") : load_config(config_path);
  } catch (const ConfigError& e) {
    err << error_line("config", e.what()).dump() << '\n';
    return 1;
  }

  CommandResult result;
  try {
    result = run_command(cmd, config, threads);
  } catch (const NumericalError& e) {
    json line{{"error", "numerical"},
              {"kind", kind_id(e.kind())},
              {"message", e.what()},
              {"parameters", cycle_to_json(config.cycle)}};
    err << line.dump() << '\n';
    return 2;
  }
  for (const std::string& w : result.warnings) err << json{{"warning", w}}.dump() << '\n';

  if (out_path == "-") {
    out << result.content;
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!(file << result.content)) {
      err << error_line("io", "cannot write " + out_path).dump() << '\n';
      return 1;
    }
    result.summary["out"] = out_path;
    out << result.summary.dump() << '\n';
  }
  if (!plot_path.empty()) {
    std::ofstream file(plot_path, std::ios::binary);
    if (!(file << *plot_script(cmd, config, out_path))) {
      err << error_line("io", "cannot write " + plot_path).dump() << '\n';
      return 1;
    }
  }
  return 0;
}

}  // namespace otto::cli
