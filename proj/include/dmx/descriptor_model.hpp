#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dmx/linalg.hpp"

namespace dmx {

/// Discrete-time uncertain descriptor system
///
///   F_{k+1} x_{k+1} - C_k x_k = f_k,   F_0 x_0 = q,
///   y_k = H_k x_k + g_k,               k = 0..horizon,
///
/// with (q, f, g) confined to the joint ellipsoid
///   (S q, q) + sum_{k<tau} (S_k f_k, f_k) + sum_{k<=tau} (R_k g_k, g_k) <= 1.
struct DiscreteDescriptorModel {
  std::size_t n = 0;        // state dimension
  std::size_t m = 0;        // equation dimension
  std::size_t p = 0;        // output dimension
  std::size_t horizon = 0;  // last step index N

  std::vector<Matrix> F;      // N+1 matrices, m x n
  std::vector<Matrix> C;      // N matrices, m x n
  std::vector<Matrix> H;      // N+1 matrices, p x n
  Matrix S;                   // m x m weight on q
  std::vector<Matrix> S_seq;  // N weights on f_k
  std::vector<Matrix> R_seq;  // N+1 weights on g_k

  /// Checks sequence lengths, shapes and that every weight is SPD.
  void validate(const ToleranceConfig& tol = {}) const;
};

/// One realization of the uncertain parameters.
struct DisturbanceRealization {
  Vector q;               // length m
  std::vector<Vector> f;  // N vectors of length m
  std::vector<Vector> g;  // N+1 vectors of length p
};

struct Trajectory {
  std::vector<Vector> x;  // N+1 states
  std::vector<Vector> y;  // N+1 outputs
};

/// Coordinates of the undetermined part of x_k in the null-space basis of F_k.
///
/// Called once per step with the step index and the determined (minimum-norm)
/// part of x_k; must return a vector whose length equals dim N(F_k).
using FreeSchedule = std::function<Vector(std::size_t step, const Vector& determined)>;

/// Fixed coordinates per step; missing or empty entries mean zero.
FreeSchedule fixed_free_schedule(std::vector<Vector> coordinates);

/// Psi_tau: the ellipsoid quadratic form truncated to the data available at step tau.
double psi_value(const DiscreteDescriptorModel& model, const DisturbanceRealization& d,
                 std::size_t tau);

/// Generates x_0..x_N and y_0..y_N from a realization.
///
/// Each step solves F x = rhs through the pseudoinverse and adds Z * free,
/// where Z = linalg::null_space_basis(F). Throws InfeasibleStep when rhs has a
/// component outside R(F) larger than 1e-10 * (1 + |rhs|).
Trajectory propagate(const DiscreteDescriptorModel& model, const DisturbanceRealization& d,
                     const FreeSchedule& free = {}, const ToleranceConfig& tol = {});

/// Seeded Gaussian realization rescaled so that Psi_N equals `margin`.
///
/// q and f_k are projected onto R(F_0) and R(F_{k+1}) respectively. When
/// `fixed_q` is given it is kept as is and only f, g are rescaled, which needs
/// (S q, q) < margin.
DisturbanceRealization sample_disturbance(const DiscreteDescriptorModel& model,
                                          std::uint64_t seed, double margin,
                                          const std::optional<Vector>& fixed_q = std::nullopt,
                                          const ToleranceConfig& tol = {});

/// A built-in model together with the data needed to simulate it.
struct Scenario {
  DiscreteDescriptorModel model;
  FreeSchedule free;
  std::optional<Vector> q;  // fixed initial data, if the scenario pins it
};

/// Three-state non-causal example with four outputs and alternating observability.
///
/// F_k = [[1,0,0],[0,k,0]], x_{1,0} = 1, x_{2,0} = -3; the third component is
/// free and follows `third_component(k)`.
Scenario builtin_section3(std::size_t horizon);
double section3_third_component(std::size_t k);

/// Scalar nonlinear system x_{k+1} = c_k x_k + v_k(x_k) + f_k embedded as a
/// descriptor model with F = (1, 0), C_k = (c_k, 1), H_k = (h_k, 0), h_0 = 1.
Scenario builtin_scalar_example(std::size_t horizon);
double scalar_example_c(std::size_t k);
double scalar_example_h(std::size_t k);

}  // namespace dmx
