#include "dmx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include <fmt/format.h>

#include "dmx/csv.hpp"
#include "dmx/errors.hpp"
#include "dmx/minimax_discrete.hpp"
#include "dmx/model_io.hpp"

namespace dmx::harness {
namespace {

namespace fs = std::filesystem;
using csv::format_number;

constexpr const char* kInfinity = "inf";
constexpr const char* kNotAvailable = "na";

struct DiscreteData {
  Scenario scenario;
  std::vector<Vector> y;
  std::optional<std::vector<Vector>> x_true;
  std::optional<DisturbanceRealization> realization;
};

Scenario load_discrete(const RunConfig& cfg) {
  auto loaded = io::load_model(cfg.model_source, cfg.horizon);
  if (auto* sc = std::get_if<Scenario>(&loaded)) return std::move(*sc);
  throw ConfigError(fmt::format("{} needs a discrete model", command_name(cfg.command)));
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(fmt::format("{}{}", prefix, i));
  return out;
}

void append(std::vector<std::string>& a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
}

void append_vector(std::vector<std::string>& cells, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) cells.push_back(format_number(v[i]));
}

fs::path prepare_out(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(fmt::format("cannot create {}: {}", cfg.out_dir.string(), ec.message()));
  return cfg.out_dir;
}

std::vector<Vector> default_directions(std::size_t n) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Vector::Unit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i)));
  return out;
}

std::vector<Vector> directions_for(const RunConfig& cfg, std::size_t dim) {
  if (cfg.directions.empty()) return default_directions(dim);
  for (const auto& l : cfg.directions) {
    if (static_cast<std::size_t>(l.size()) != dim) {
      throw ConfigError(fmt::format("direction of length {} given, expected {}", l.size(), dim));
    }
  }
  return cfg.directions;
}

double parse_cell(const std::string& cell, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", where, cell));
  }
  return v;
}

// Reads columns prefix1..prefixdim from every row; nullopt if the first column is absent.
std::optional<std::vector<Vector>> read_block(const csv::Table& table, const std::string& prefix,
                                              std::size_t dim, bool required) {
  std::vector<int> cols;
  for (std::size_t i = 1; i <= dim; ++i) {
    const int c = csv::column(table, fmt::format("{}{}", prefix, i));
    if (c < 0) {
      if (required || i > 1) {
        throw ConfigError(fmt::format("measurement file lacks column {}{}", prefix, i));
      }
      return std::nullopt;
    }
    cols.push_back(c);
  }
  std::vector<Vector> out;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      v[static_cast<Eigen::Index>(i)] = parse_cell(
          table.rows()[r][static_cast<std::size_t>(cols[i])], fmt::format("row {}", r + 1));
    }
    out.push_back(v);
  }
  return out;
}

DisturbanceRealization simulate_realization(const Scenario& sc, const RunConfig& cfg) {
  return sample_disturbance(sc.model, cfg.seed, cfg.margin, sc.q, cfg.tol);
}

DiscreteData discrete_data(const RunConfig& cfg) {
  DiscreteData data{load_discrete(cfg), {}, std::nullopt, std::nullopt};
  const auto& model = data.scenario.model;
  if (cfg.measurements) {
    const csv::Table table = csv::read(*cfg.measurements);
    data.y = *read_block(table, "y", model.p, true);
    data.x_true = read_block(table, "x", model.n, false);
    if (data.y.empty() || data.y.size() > model.horizon + 1) {
      throw ConfigError(fmt::format("measurement file has {} rows, model allows 1..{}",
                                    data.y.size(), model.horizon + 1));
    }
    return data;
  }
  data.realization = simulate_realization(data.scenario, cfg);
  const Trajectory traj = propagate(model, *data.realization, data.scenario.free, cfg.tol);
  data.y = traj.y;
  data.x_true = traj.x;
  return data;
}

std::string error_cell(const EstimateReport& rep, const Vector& l) {
  if (rep.inconsistent) return kNotAvailable;
  const ErrorBound e = directional_error(rep, l);
  return e.infinite ? kInfinity : format_number(e.value);
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "simulate") return Command::simulate;
  if (name == "filter") return Command::filter;
  if (name == "observability") return Command::observability;
  if (name == "riccati") return Command::riccati;
  if (name == "compare") return Command::compare;
  throw ConfigError(fmt::format("unknown command '{}'", name));
}

std::string command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::filter: return "filter";
    case Command::observability: return "observability";
    case Command::riccati: return "riccati";
    case Command::compare: return "compare";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (model_source.empty()) throw ConfigError("--model is required");
  if (out_dir.empty()) throw ConfigError("--out is required");
  if (!(margin > 0.0 && margin <= 1.0)) throw ConfigError("--margin must lie in (0, 1]");
  if (step && !(*step > 0.0)) throw ConfigError("--step must be positive");
  if (measurements && command == Command::simulate) {
    throw ConfigError("simulate does not take --measurements");
  }
  try {
    tol.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
}

std::vector<Vector> load_directions(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(fmt::format("cannot open directions file '{}'", path.string()));
  std::vector<Vector> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> values;
    std::string token;
    while (ls >> token) values.push_back(parse_cell(token, fmt::format("{}:{}", path.string(), lineno)));
    if (values.empty()) continue;
    out.push_back(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  if (out.empty()) throw ConfigError(fmt::format("no directions in '{}'", path.string()));
  return out;
}

RunSummary run_simulate(const RunConfig& cfg) {
  cfg.validate();
  const Scenario sc = load_discrete(cfg);
  const auto& model = sc.model;
  const DisturbanceRealization d = simulate_realization(sc, cfg);
  const Trajectory traj = propagate(model, d, sc.free, cfg.tol);
  const fs::path out = prepare_out(cfg);

  std::vector<std::string> header{"k"};
  append(header, numbered("x", model.n));
  append(header, numbered("y", model.p));
  csv::Table trajectory(header);
  for (std::size_t k = 0; k <= model.horizon; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    append_vector(row, traj.x[k]);
    append_vector(row, traj.y[k]);
    trajectory.add_row(std::move(row));
  }

  std::vector<std::string> rheader{"k"};
  append(rheader, numbered("q", model.m));
  append(rheader, numbered("f", model.m));
  append(rheader, numbered("g", model.p));
  rheader.push_back("psi");
  csv::Table realization(rheader);
  for (std::size_t k = 0; k <= model.horizon; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    if (k == 0) {
      append_vector(row, d.q);
    } else {
      row.insert(row.end(), model.m, "");
    }
    if (k < model.horizon) {
      append_vector(row, d.f[k]);
    } else {
      row.insert(row.end(), model.m, "");
    }
    append_vector(row, d.g[k]);
    row.push_back(format_number(psi_value(model, d, k)));
    realization.add_row(std::move(row));
  }

  RunSummary summary;
  summary.files = {out / "trajectory.csv", out / "realization.csv"};
  trajectory.write(summary.files[0]);
  realization.write(summary.files[1]);
  summary.message = fmt::format("simulated {} steps, Psi_N = {}", model.horizon + 1,
                                format_number(psi_value(model, d, model.horizon)));
  return summary;
}

RunSummary run_filter(const RunConfig& cfg) {
  cfg.validate();
  const DiscreteData data = discrete_data(cfg);
  const auto& model = data.scenario.model;
  const auto dirs = directions_for(cfg, model.n);
  const MinimaxRun run = run_minimax(model, data.y, std::nullopt, cfg.tol);
  const fs::path out = prepare_out(cfg);
  const bool truth = data.x_true.has_value();

  std::vector<std::string> header{"k"};
  append(header, numbered("x_hat_", model.n));
  header.push_back("beta_hat");
  header.push_back("index");
  append(header, numbered("rho_", dirs.size()));
  append(header, numbered("ppinv_quad_", dirs.size()));
  if (truth) append(header, numbered("abs_err_", model.n));
  csv::Table estimates(header);

  std::size_t inconsistent = 0;
  for (const auto& rep : run.reports) {
    std::vector<std::string> row{std::to_string(rep.k)};
    append_vector(row, rep.x_hat);
    row.push_back(format_number(rep.beta_hat));
    row.push_back(std::to_string(rep.index));
    for (const auto& l : dirs) row.push_back(error_cell(rep, l));
    for (const auto& l : dirs) row.push_back(format_number(l.dot(rep.p_pinv * l)));
    if (truth) append_vector(row, ((*data.x_true)[rep.k] - rep.x_hat).cwiseAbs());
    if (rep.inconsistent) ++inconsistent;
    estimates.add_row(std::move(row));
  }

  RunSummary summary;
  summary.files.push_back(out / "estimates.csv");
  estimates.write(summary.files.back());

  if (truth) {
    for (std::size_t i = 0; i < model.n; ++i) {
      const Vector e = Vector::Unit(static_cast<Eigen::Index>(model.n), static_cast<Eigen::Index>(i));
      csv::Table comp({"k", "x", "x_hat", "abs_err", "minimax_err", "ppinv_quad"});
      for (const auto& rep : run.reports) {
        const double x = (*data.x_true)[rep.k][static_cast<Eigen::Index>(i)];
        const double xh = rep.x_hat[static_cast<Eigen::Index>(i)];
        comp.add_row({std::to_string(rep.k), format_number(x), format_number(xh),
                      format_number(std::abs(x - xh)), error_cell(rep, e),
                      format_number(rep.p_pinv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)))});
      }
      summary.files.push_back(out / fmt::format("component_{}.csv", i + 1));
      comp.write(summary.files.back());
    }
  }
  summary.message = fmt::format("filtered {} steps, {} inconsistent", run.reports.size(), inconsistent);
  return summary;
}

RunSummary run_observability(const RunConfig& cfg) {
  cfg.validate();
  const Scenario sc = load_discrete(cfg);
  const auto& model = sc.model;
  const auto dirs = directions_for(cfg, model.n);
  // P_k does not depend on the outputs.
  const std::vector<Vector> zeros(model.horizon + 1, Vector::Zero(static_cast<Eigen::Index>(model.p)));
  const MinimaxRun run = run_minimax(model, zeros, std::nullopt, cfg.tol);
  const fs::path out = prepare_out(cfg);

  std::vector<std::string> header{"k", "rank", "index", "near_threshold", "stacked_rank"};
  append(header, numbered("observable_", dirs.size()));
  csv::Table table(header);
  std::size_t max_index = 0;
  for (const auto& rep : run.reports) {
    Matrix stacked(model.F[rep.k].rows() + model.H[rep.k].rows(), static_cast<Eigen::Index>(model.n));
    stacked << model.F[rep.k], model.H[rep.k];
    std::vector<std::string> row{std::to_string(rep.k), std::to_string(rep.rank),
                                 std::to_string(rep.index), rep.near_rank_threshold ? "1" : "0",
                                 std::to_string(linalg::numeric_rank(stacked, cfg.tol))};
    for (const auto& l : dirs) row.push_back(directional_error(rep, l).infinite ? "0" : "1");
    max_index = std::max(max_index, rep.index);
    table.add_row(std::move(row));
  }
  RunSummary summary;
  summary.files.push_back(out / "observability.csv");
  table.write(summary.files.back());
  summary.message = fmt::format("{} steps, max index of non-causality {}", run.reports.size(), max_index);
  return summary;
}

RunSummary run_compare(const RunConfig& cfg) {
  cfg.validate();
  const DiscreteData data = discrete_data(cfg);
  const auto& model = data.scenario.model;
  const MinimaxRun run = run_minimax(model, data.y, std::nullopt, cfg.tol);
  const fs::path out = prepare_out(cfg);

  csv::Table table({"k", "stacked_rank", "full_rank", "index", "kalman_active", "max_abs_dev"});
  std::optional<KalmanFullRankState> kalman;
  bool chain_alive = true;
  double worst = 0.0;
  std::vector<std::size_t> flagged;
  for (std::size_t k = 0; k < data.y.size(); ++k) {
    const bool full = stacked_full_rank(model.F[k], model.H[k], cfg.tol);
    if (!full) flagged.push_back(k);
    if (chain_alive) {
      try {
        kalman = k == 0 ? kalman_init(model, data.y[0], std::nullopt, cfg.tol)
                        : kalman_fullrank_step(*kalman, slice_at(model, k), data.y[k], cfg.tol);
      } catch (const RankPrecondition&) {
        chain_alive = false;
        kalman.reset();
      }
    }
    const auto& rep = run.reports[k];
    Matrix stacked(model.F[k].rows() + model.H[k].rows(), static_cast<Eigen::Index>(model.n));
    stacked << model.F[k], model.H[k];
    std::vector<std::string> row{std::to_string(k),
                                 std::to_string(linalg::numeric_rank(stacked, cfg.tol)),
                                 full ? "1" : "0", std::to_string(rep.index),
                                 chain_alive ? "1" : "0"};
    if (chain_alive) {
      const double dev = (rep.x_hat - kalman->x_filt).cwiseAbs().maxCoeff();
      worst = std::max(worst, dev);
      row.push_back(format_number(dev));
    } else {
      row.push_back(kNotAvailable);
    }
    table.add_row(std::move(row));
  }
  RunSummary summary;
  summary.files.push_back(out / "compare.csv");
  table.write(summary.files.back());
  summary.message = flagged.empty()
                        ? fmt::format("max deviation {}", format_number(worst))
                        : fmt::format("max deviation {} before rank loss; rank deficient at {} steps "
                                      "(first k = {})",
                                      format_number(worst), flagged.size(), flagged.front());
  return summary;
}

RunSummary run_riccati(const RunConfig& cfg) {
  cfg.validate();
  auto loaded = io::load_model(cfg.model_source, cfg.horizon);
  auto* sc = std::get_if<io::ContinuousScenario>(&loaded);
  if (sc == nullptr) throw ConfigError("riccati needs a continuous model");
  const ReducedModel red = svd_reduce(sc->model, cfg.tol);

  double step = 0.0;
  if (cfg.step) {
    step = *cfg.step;
  } else {
    step = red.grid[1] - red.grid[0];
    for (std::size_t i = 2; i < red.grid.size(); ++i) step = std::min(step, red.grid[i] - red.grid[i - 1]);
  }

  std::vector<Vector> y;
  if (cfg.measurements) {
    const csv::Table table = csv::read(*cfg.measurements);
    y = *read_block(table, "y", red.p, true);
  } else if (sc->y) {
    y = *sc->y;
  } else {
    y.assign(red.grid.size(), Vector::Zero(static_cast<Eigen::Index>(red.p)));
  }

  RiccatiOptions opts;
  opts.convention = cfg.convention;
  opts.form = cfg.form;
  const RiccatiTrajectory ric = riccati_integrate(red, step, opts, cfg.tol);
  const ContinuousEstimate est = filter_integrate(red, ric, y, cfg.tol);
  const auto K_grid = ric.on_grid(red.grid);
  const auto dirs = directions_for(cfg, red.m);
  const fs::path out = prepare_out(cfg);

  std::vector<std::string> header{"t"};
  for (std::size_t i = 1; i <= red.r; ++i) {
    for (std::size_t j = 1; j <= red.r; ++j) {
      header.push_back(red.r < 10 ? fmt::format("K_{}{}", i, j) : fmt::format("K_{}_{}", i, j));
    }
  }
  append(header, numbered("x_hat_", red.r));
  append(header, numbered("sigma_", dirs.size()));
  append(header, numbered("estimate_", dirs.size()));
  csv::Table table(header);
  for (std::size_t g = 0; g < red.grid.size(); ++g) {
    std::vector<std::string> row{format_number(red.grid[g])};
    for (Eigen::Index i = 0; i < K_grid[g].rows(); ++i) {
      for (Eigen::Index j = 0; j < K_grid[g].cols(); ++j) row.push_back(format_number(K_grid[g](i, j)));
    }
    append_vector(row, est.x_hat[g]);
    for (const auto& l : dirs) {
      const Vector l1 = red.reduce_direction(l);
      row.push_back(format_number(l1.dot(K_grid[g] * l1)));
    }
    for (const auto& l : dirs) row.push_back(format_number(red.reduce_direction(l).dot(est.x_hat[g])));
    table.add_row(std::move(row));
  }
  RunSummary summary;
  summary.files.push_back(out / "riccati.csv");
  table.write(summary.files.back());
  summary.message = fmt::format("integrated {} steps of size {}, rank(F) = {}, |K(T)| = {}",
                                ric.times.size() - 1, format_number(step), red.r,
                                format_number(est.K_terminal.norm()));
  return summary;
}

RunSummary run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::simulate: return run_simulate(cfg);
    case Command::filter: return run_filter(cfg);
    case Command::observability: return run_observability(cfg);
    case Command::riccati: return run_riccati(cfg);
    case Command::compare: return run_compare(cfg);
  }
  throw ConfigError("unknown command");
}

}  // namespace dmx::harness
