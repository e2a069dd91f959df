#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dmx/linalg.hpp"
#include "dmx/minimax_continuous.hpp"

namespace dmx::harness {

enum class Command { simulate, filter, observability, riccati, compare };

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct RunConfig {
  Command command = Command::simulate;
  std::string model_source;  // path or builtin:NAME
  std::uint64_t seed = 0;
  std::optional<std::size_t> horizon;
  std::optional<double> step;
  std::vector<Vector> directions;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> measurements;
  RiccatiConvention convention = RiccatiConvention::dual;
  CoefficientForm form = CoefficientForm::corrected;
  double margin = 1.0;
  ToleranceConfig tol;

  /// Throws ConfigError when a command-specific field is missing or invalid.
  void validate() const;
};

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::string message;
};

/// Reads one direction per line; entries separated by commas or blanks, '#' starts a comment.
std::vector<Vector> load_directions(const std::filesystem::path& path);

/// trajectory.csv (k,x1..xn,y1..yp) and realization.csv (k,q*,f*,g*,psi).
RunSummary run_simulate(const RunConfig& cfg);

/// estimates.csv plus component_<i>.csv per state component when the true state is known.
RunSummary run_filter(const RunConfig& cfg);

/// observability.csv: rank, index of non-causality and per-direction observability.
RunSummary run_observability(const RunConfig& cfg);

/// riccati.csv: K and x_hat on the model grid of a continuous model.
RunSummary run_riccati(const RunConfig& cfg);

/// compare.csv: minimax filter against the full-rank recursion, step by step.
RunSummary run_compare(const RunConfig& cfg);

RunSummary run(const RunConfig& cfg);

}  // namespace dmx::harness
