#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dmx/descriptor_model.hpp"
#include "dmx/minimax_continuous.hpp"

namespace dmx::io {

/// A continuous model with optional output samples on its grid.
struct ContinuousScenario {
  ContinuousDescriptorModel model;
  std::optional<std::vector<Vector>> y;
};

using LoadedModel = std::variant<Scenario, ContinuousScenario>;

/// Parses a model document.
///
/// Discrete documents carry `n, m, p, N` and the matrices `F, C, H, S, S_seq,
/// R_seq`; every sequence field accepts either one matrix (held constant) or a
/// list with one matrix per step. Matrices are arrays of rows. An optional
/// `free` list gives null-space coordinates per step, and `q` fixes the initial
/// data. `"builtin": "section3" | "scalar-example"` selects a built-in scenario.
/// Documents with `"kind": "continuous"` carry `n, m, p, F, grid, C, H, Q, R`
/// and optional `y` samples. Throws ConfigError on malformed input.
LoadedModel parse_model(const nlohmann::json& doc, std::optional<std::size_t> horizon_override);

/// Resolves `builtin:NAME` or reads and parses a JSON file.
LoadedModel load_model(const std::string& source, std::optional<std::size_t> horizon_override);

/// Built-in continuous scenario with A = 0, M = 1, G = 1 on [0, 2].
ContinuousScenario builtin_scalar_riccati();

Matrix parse_matrix(const nlohmann::json& j, const std::string& name);

}  // namespace dmx::io
