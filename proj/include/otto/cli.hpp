#pragma once

// Configuration, subcommand dispatch and output formatting for otto-ep.
//
// Exit codes: 0 success, 1 malformed configuration or usage, 2 numerical
// failure. Errors are written to stderr as one line of JSON.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "otto/analysis.hpp"
#include "otto/landscape.hpp"

namespace otto::cli {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { trajectory, limit_cycle, spectrum_scan, exceptional_points, landscape, algebra_check };

std::string to_string(Command c);
std::optional<Command> command_from_string(const std::string& name);

enum class InitialState { cold_thermal, hot_thermal, limit_cycle, explicit_state };

struct RunConfig {
  propagation::CycleSpec cycle;

  long n_cycles = 50;
  int samples_per_stroke = 32;
  InitialState initial = InitialState::cold_thermal;
  models::StateVec initial_state = models::StateVec(0, 0, 0, 1);

  analysis::ScanRange scan{analysis::ScanParameter::tau_H, 0.05, 1.0};
  int scan_points = 500;
  int ep_samples = 4000;

  landscape::AxisRange grid_tau_H;
  landscape::AxisRange grid_tau_C;

  std::vector<int> su_dimensions{2, 3, 4, 5};
  std::vector<int> u_dimensions{2};
};

/// Named parameter sets. "harmonic" is the default for a config without a preset.
RunConfig preset(const std::string& name);

/// Validates against the schema: unknown keys, wrong types and non-physical
/// values throw ConfigError. Numbers may be given as {"sqrt": x}.
RunConfig parse_config(const json& j);

RunConfig load_config(const std::string& path);

/// The cycle parameters in config-block form; parse_config of the result
/// reproduces `spec`.
json cycle_to_json(const propagation::CycleSpec& spec);

struct CommandResult {
  std::string content;  // the output file
  json summary;         // one-line digest printed when the output goes to a file
  std::vector<std::string> warnings;
};

CommandResult run_command(Command c, const RunConfig& config, int threads = 0);

/// gnuplot script plotting `data_path`. Only the CSV-producing subcommands
/// have one.
std::optional<std::string> plot_script(Command c, const RunConfig& config, const std::string& data_path);

/// Full command line entry point.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace otto::cli
