#include "dmx/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "dmx/errors.hpp"

namespace dmx::io {
namespace {

using nlohmann::json;

constexpr std::size_t kDefaultSection3Horizon = 40;
constexpr std::size_t kDefaultScalarHorizon = 20;

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(fmt::format("missing field '{}'", key));
  return doc.at(key);
}

std::size_t get_count(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(fmt::format("field '{}' must be a non-negative integer", key));
  }
  return v.get<std::size_t>();
}

double get_number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(fmt::format("{} must be a number", name));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(fmt::format("{} is not finite", name));
  return x;
}

Vector parse_vector(const json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError(fmt::format("{} must be an array of numbers", name));
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = get_number(j[i], fmt::format("{}[{}]", name, i));
  }
  return v;
}

bool is_matrix_list(const json& j) {
  return j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
}

// One matrix held constant, or a list with exactly `count` matrices.
std::vector<Matrix> parse_sequence(const json& j, std::size_t count, const std::string& name) {
  std::vector<Matrix> out;
  if (is_matrix_list(j) || (j.is_array() && j.empty() && count == 0)) {
    if (j.size() != count) {
      throw ConfigError(fmt::format("{} lists {} matrices, expected {}", name, j.size(), count));
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(parse_matrix(j[i], fmt::format("{}[{}]", name, i)));
    }
    return out;
  }
  const Matrix single = parse_matrix(j, name);
  out.assign(count, single);
  return out;
}

Scenario parse_discrete(const json& doc, std::optional<std::size_t> horizon_override) {
  if (doc.contains("builtin")) {
    const json& b = doc.at("builtin");
    if (!b.is_string()) throw ConfigError("'builtin' must be a string");
    const std::string name = b.get<std::string>();
    std::size_t horizon = 0;
    if (horizon_override) {
      horizon = *horizon_override;
    } else if (doc.contains("N")) {
      horizon = get_count(doc, "N");
    } else {
      horizon = name == "section3" ? kDefaultSection3Horizon : kDefaultScalarHorizon;
    }
    if (name == "section3") return builtin_section3(horizon);
    if (name == "scalar-example") return builtin_scalar_example(horizon);
    throw ConfigError(fmt::format("unknown builtin model '{}'", name));
  }

  DiscreteDescriptorModel model;
  model.n = get_count(doc, "n");
  model.m = get_count(doc, "m");
  model.p = get_count(doc, "p");
  model.horizon = horizon_override ? *horizon_override : get_count(doc, "N");
  const std::size_t N = model.horizon;
  model.F = parse_sequence(require(doc, "F"), N + 1, "F");
  model.C = parse_sequence(require(doc, "C"), N, "C");
  model.H = parse_sequence(require(doc, "H"), N + 1, "H");
  model.S = parse_matrix(require(doc, "S"), "S");
  model.S_seq = parse_sequence(require(doc, "S_seq"), N, "S_seq");
  model.R_seq = parse_sequence(require(doc, "R_seq"), N + 1, "R_seq");
  try {
    model.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(fmt::format("invalid model: {}", e.what()));
  }

  Scenario scenario;
  if (doc.contains("free")) {
    const json& f = doc.at("free");
    if (!f.is_array()) throw ConfigError("'free' must be a list of coordinate vectors");
    std::vector<Vector> coords;
    for (std::size_t k = 0; k < f.size(); ++k) coords.push_back(parse_vector(f[k], fmt::format("free[{}]", k)));
    scenario.free = fixed_free_schedule(std::move(coords));
  }
  if (doc.contains("q")) {
    scenario.q = parse_vector(doc.at("q"), "q");
    if (static_cast<std::size_t>(scenario.q->size()) != model.m) {
      throw ConfigError("'q' length must equal m");
    }
  }
  scenario.model = std::move(model);
  return scenario;
}

ContinuousScenario parse_continuous(const json& doc) {
  ContinuousScenario sc;
  auto& model = sc.model;
  model.n = get_count(doc, "n");
  model.m = get_count(doc, "m");
  model.p = get_count(doc, "p");
  model.F = parse_matrix(require(doc, "F"), "F");
  const json& grid = require(doc, "grid");
  const Vector g = parse_vector(grid, "grid");
  model.grid.assign(g.data(), g.data() + g.size());
  const std::size_t L = model.grid.size();
  model.C = parse_sequence(require(doc, "C"), L, "C");
  model.H = parse_sequence(require(doc, "H"), L, "H");
  model.Q = parse_sequence(require(doc, "Q"), L, "Q");
  model.R = parse_sequence(require(doc, "R"), L, "R");
  try {
    model.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(fmt::format("invalid continuous model: {}", e.what()));
  }
  if (doc.contains("y")) {
    const json& y = doc.at("y");
    if (!y.is_array() || y.size() != L) throw ConfigError("'y' needs one sample per grid point");
    std::vector<Vector> samples;
    for (std::size_t i = 0; i < L; ++i) {
      samples.push_back(parse_vector(y[i], fmt::format("y[{}]", i)));
      if (static_cast<std::size_t>(samples.back().size()) != model.p) {
        throw ConfigError(fmt::format("y[{}] must have length p", i));
      }
    }
    sc.y = std::move(samples);
  }
  return sc;
}

}  // namespace

Matrix parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError(fmt::format("{} must be a non-empty array of rows", name));
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix mat(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ConfigError(fmt::format("{}: row {} has the wrong length", name, i));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          get_number(j[i][c], fmt::format("{}[{}][{}]", name, i, c));
    }
  }
  return mat;
}

LoadedModel parse_model(const json& doc, std::optional<std::size_t> horizon_override) {
  if (!doc.is_object()) throw ConfigError("model document must be a JSON object");
  try {
    if (doc.contains("kind")) {
      const json& kind = doc.at("kind");
      if (!kind.is_string()) throw ConfigError("'kind' must be a string");
      if (kind == "continuous") return parse_continuous(doc);
      if (kind != "discrete") throw ConfigError(fmt::format("unknown model kind {}", kind.dump()));
    }
    return parse_discrete(doc, horizon_override);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed model: {}", e.what()));
  }
}

ContinuousScenario builtin_scalar_riccati() {
  ContinuousScenario sc;
  auto& model = sc.model;
  model.n = model.m = model.p = 1;
  model.F = Matrix::Ones(1, 1);
  std::vector<Vector> y;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.1 * i;
    model.grid.push_back(t);
    model.C.push_back(Matrix::Zero(1, 1));
    model.H.push_back(Matrix::Ones(1, 1));
    model.Q.push_back(Matrix::Ones(1, 1));
    model.R.push_back(Matrix::Ones(1, 1));
    y.push_back(Vector::Constant(1, std::sin(t)));
  }
  sc.y = std::move(y);
  return sc;
}

LoadedModel load_model(const std::string& source, std::optional<std::size_t> horizon_override) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string name = source.substr(prefix.size());
    if (name == "section3") {
      return builtin_section3(horizon_override.value_or(kDefaultSection3Horizon));
    }
    if (name == "scalar-example") {
      return builtin_scalar_example(horizon_override.value_or(kDefaultScalarHorizon));
    }
    if (name == "scalar-riccati") return builtin_scalar_riccati();
    throw ConfigError(fmt::format("unknown builtin model '{}'", name));
  }
  std::ifstream is(source, std::ios::binary);
  if (!is) throw ConfigError(fmt::format("cannot open model file '{}'", source));
  std::stringstream buffer;
  buffer << is.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: JSON parse error: {}", source, e.what()));
  }
  return parse_model(doc, horizon_override);
}

}  // namespace dmx::io
