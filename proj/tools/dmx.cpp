#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dmx/errors.hpp"
#include "dmx/harness.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

dmx::Vector parse_inline_direction(const std::string& text) {
  std::string s = text;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(s);
  std::vector<double> values;
  double v = 0.0;
  while (is >> v) values.push_back(v);
  if (!is.eof() || values.empty()) throw dmx::ConfigError("bad direction '" + text + "'");
  return Eigen::Map<const dmx::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax state estimation for descriptor systems"};
  app.require_subcommand(1);

  std::string model;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string directions_file;
  std::vector<std::string> directions_inline;
  std::string convention = "dual";
  std::size_t horizon = 0;
  double step = 0.0;
  std::string measurements;
  double margin = 1.0;
  bool verbatim = false;

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "sample an admissible disturbance and write the trajectory"},
      {"filter", "run the minimax filter on measured or simulated outputs"},
      {"observability", "rank, index of non-causality and observable directions per step"},
      {"riccati", "integrate the continuous-time Riccati equation and filter"},
      {"compare", "minimax filter against the full-rank recursion"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--model", model, "model JSON path or builtin:NAME")->required();
    sub->add_option("--seed", seed, "disturbance seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--horizon", horizon, "override the discrete horizon N");
    sub->add_option("--margin", margin, "target value of Psi_N for sampled disturbances");
    if (std::string(name) != "simulate") {
      sub->add_option("--measurements", measurements, "CSV with y1..yp columns (optional x1..xn)");
      sub->add_option("--directions", directions_file, "file with one direction per line");
      sub->add_option("--direction", directions_inline, "direction as comma-separated entries");
    }
    if (std::string(name) == "riccati") {
      sub->add_option("--step", step, "integration step (must divide every grid interval)");
      sub->add_option("--convention", convention, "Riccati sign convention")
          ->check(CLI::IsMember({"paper", "dual"}));
      sub->add_flag("--verbatim", verbatim, "use the literal product forms for M and G");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    dmx::harness::RunConfig cfg;
    cfg.command = dmx::harness::parse_command(app.get_subcommands().front()->get_name());
    auto* sub = app.get_subcommands().front();
    cfg.model_source = model;
    cfg.seed = seed;
    cfg.out_dir = out;
    cfg.margin = margin;
    cfg.tol = dmx::ToleranceConfig::from_environment();
    if (sub->count("--horizon") > 0) cfg.horizon = horizon;
    if (sub->get_option_no_throw("--step") != nullptr && sub->count("--step") > 0) cfg.step = step;
    if (!measurements.empty()) cfg.measurements = measurements;
    if (!directions_file.empty()) cfg.directions = dmx::harness::load_directions(directions_file);
    for (const auto& d : directions_inline) cfg.directions.push_back(parse_inline_direction(d));
    cfg.convention = convention == "paper" ? dmx::RiccatiConvention::paper : dmx::RiccatiConvention::dual;
    cfg.form = verbatim ? dmx::CoefficientForm::verbatim : dmx::CoefficientForm::corrected;

    const auto summary = dmx::harness::run(cfg);
    for (const auto& f : summary.files) std::cout << f.string() << '\n';
    std::cerr << summary.message << '\n';
    return 0;
  } catch (const dmx::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
