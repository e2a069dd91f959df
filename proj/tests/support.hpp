#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dmx/descriptor_model.hpp"
#include "dmx/linalg.hpp"

namespace dmx::testing {

using Rng = std::mt19937_64;

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Matrix random_spd(Rng& rng, Eigen::Index n);
Matrix random_rank(Rng& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index rank);

/// Random matrix with singular values spread log-uniformly in [1/cond, 1].
Matrix random_conditioned(Rng& rng, Eigen::Index rows, Eigen::Index cols, double cond);

struct RandomModelShape {
  std::size_t n = 3, m = 2, p = 2, horizon = 10;
};

enum class StackRank { any, full, deficient_F };

/// sigma_min / sigma_max of [F_k; H_k] required by StackRank::full.
inline constexpr double kFullStackConditioning = 0.1;

/// Random model with SPD weights. `full` enforces rank([F_k; H_k]) = n at every
/// step with sigma_min >= kFullStackConditioning * sigma_max (p is raised to
/// n - m when needed); `deficient_F` forces every F_k to lose rank.
DiscreteDescriptorModel random_model(Rng& rng, const RandomModelShape& shape, StackRank stack);

/// Random shape within the given bounds (each dimension at least 1).
RandomModelShape random_shape(Rng& rng, std::size_t n_max, std::size_t p_max, std::size_t N_max);

/// Measurements of a simulated admissible trajectory for `model`.
struct Simulated {
  DisturbanceRealization d;
  Trajectory traj;
};
Simulated simulate(const DiscreteDescriptorModel& model, std::uint64_t seed, double margin = 1.0);

}  // namespace dmx::testing
