#include "dmx/descriptor_model.hpp"

#include <cmath>
#include <random>
#include <utility>

#include <fmt/format.h>

#include "dmx/errors.hpp"

namespace dmx {
namespace {

void expect_shape(const Matrix& mat, std::size_t rows, std::size_t cols, const std::string& name) {
  if (static_cast<std::size_t>(mat.rows()) != rows || static_cast<std::size_t>(mat.cols()) != cols) {
    throw DimensionMismatch(fmt::format("{} is {}x{}, expected {}x{}", name, mat.rows(),
                                        mat.cols(), rows, cols));
  }
  if (!mat.allFinite()) throw ContractViolation(fmt::format("{} has non-finite entries", name));
}

void expect_count(std::size_t actual, std::size_t expected, const char* name) {
  if (actual != expected) {
    throw DimensionMismatch(fmt::format("{} has {} entries, expected {}", name, actual, expected));
  }
}

void expect_spd(const Matrix& w, const ToleranceConfig& tol, const std::string& name) {
  if (!linalg::is_spd(w, tol)) {
    throw ContractViolation(fmt::format("{} is not symmetric positive definite", name));
  }
}

void expect_length(const Vector& v, std::size_t len, const std::string& name) {
  if (static_cast<std::size_t>(v.size()) != len) {
    throw DimensionMismatch(fmt::format("{} has length {}, expected {}", name, v.size(), len));
  }
}

void check_realization(const DiscreteDescriptorModel& model, const DisturbanceRealization& d) {
  expect_length(d.q, model.m, "q");
  expect_count(d.f.size(), model.horizon, "f");
  expect_count(d.g.size(), model.horizon + 1, "g");
  for (std::size_t k = 0; k < d.f.size(); ++k) expect_length(d.f[k], model.m, fmt::format("f[{}]", k));
  for (std::size_t k = 0; k < d.g.size(); ++k) expect_length(d.g[k], model.p, fmt::format("g[{}]", k));
}

// Solves F x = rhs for the state at `step`, adding the free component. An empty
// vector from the schedule means zero coordinates.
Vector solve_step(const Matrix& F, const Vector& rhs, std::size_t step, const FreeSchedule& free,
                  const ToleranceConfig& tol) {
  const Vector determined = linalg::pinv(F, tol) * rhs;
  const double residual = (F * determined - rhs).norm();
  if (residual > 1e-10 * (1.0 + rhs.norm())) {
    throw InfeasibleStep(step, fmt::format("step {}: F x = rhs is inconsistent (residual {:.3e})",
                                           step, residual));
  }
  const Matrix basis = linalg::null_space_basis(F, tol);
  if (basis.cols() == 0) return determined;
  Vector coords = Vector::Zero(basis.cols());
  if (free) {
    Vector supplied = free(step, determined);
    if (supplied.size() != 0) {
      if (supplied.size() != basis.cols()) {
        throw DimensionMismatch(fmt::format("step {}: free schedule returned {} coordinates, null "
                                            "space of F has dimension {}",
                                            step, supplied.size(), basis.cols()));
      }
      coords = supplied;
    }
  }
  return determined + basis * coords;
}

}  // namespace

void DiscreteDescriptorModel::validate(const ToleranceConfig& tol) const {
  if (n == 0 || m == 0) throw DimensionMismatch("model needs n > 0 and m > 0");
  expect_count(F.size(), horizon + 1, "F");
  expect_count(C.size(), horizon, "C");
  expect_count(H.size(), horizon + 1, "H");
  expect_count(S_seq.size(), horizon, "S_seq");
  expect_count(R_seq.size(), horizon + 1, "R_seq");
  expect_shape(S, m, m, "S");
  expect_spd(S, tol, "S");
  for (std::size_t k = 0; k <= horizon; ++k) {
    expect_shape(F[k], m, n, fmt::format("F[{}]", k));
    expect_shape(H[k], p, n, fmt::format("H[{}]", k));
    if (p > 0) {
      expect_shape(R_seq[k], p, p, fmt::format("R_seq[{}]", k));
      expect_spd(R_seq[k], tol, fmt::format("R_seq[{}]", k));
    }
  }
  for (std::size_t k = 0; k < horizon; ++k) {
    expect_shape(C[k], m, n, fmt::format("C[{}]", k));
    expect_shape(S_seq[k], m, m, fmt::format("S_seq[{}]", k));
    expect_spd(S_seq[k], tol, fmt::format("S_seq[{}]", k));
  }
}

FreeSchedule fixed_free_schedule(std::vector<Vector> coordinates) {
  return [values = std::move(coordinates)](std::size_t step, const Vector&) -> Vector {
    if (step < values.size()) return values[step];
    return Vector();
  };
}

double psi_value(const DiscreteDescriptorModel& model, const DisturbanceRealization& d,
                 std::size_t tau) {
  if (tau > model.horizon) {
    throw ContractViolation(fmt::format("tau = {} exceeds horizon {}", tau, model.horizon));
  }
  check_realization(model, d);
  double value = d.q.dot(model.S * d.q);
  for (std::size_t k = 0; k < tau; ++k) value += d.f[k].dot(model.S_seq[k] * d.f[k]);
  for (std::size_t k = 0; k <= tau; ++k) value += d.g[k].dot(model.R_seq[k] * d.g[k]);
  return value;
}

Trajectory propagate(const DiscreteDescriptorModel& model, const DisturbanceRealization& d,
                     const FreeSchedule& free, const ToleranceConfig& tol) {
  check_realization(model, d);
  Trajectory traj;
  traj.x.reserve(model.horizon + 1);
  traj.y.reserve(model.horizon + 1);
  traj.x.push_back(solve_step(model.F[0], d.q, 0, free, tol));
  for (std::size_t k = 0; k < model.horizon; ++k) {
    const Vector rhs = model.C[k] * traj.x[k] + d.f[k];
    traj.x.push_back(solve_step(model.F[k + 1], rhs, k + 1, free, tol));
  }
  for (std::size_t k = 0; k <= model.horizon; ++k) {
    traj.y.push_back(model.H[k] * traj.x[k] + d.g[k]);
  }
  return traj;
}

DisturbanceRealization sample_disturbance(const DiscreteDescriptorModel& model,
                                          std::uint64_t seed, double margin,
                                          const std::optional<Vector>& fixed_q,
                                          const ToleranceConfig& tol) {
  if (!(margin > 0.0 && margin <= 1.0)) {
    throw ContractViolation(fmt::format("margin = {} must lie in (0, 1]", margin));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](std::size_t len) {
    Vector v(static_cast<Eigen::Index>(len));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    return v;
  };

  DisturbanceRealization d;
  d.q = linalg::column_space_projector(model.F[0], tol) * draw(model.m);
  for (std::size_t k = 0; k < model.horizon; ++k) {
    d.f.push_back(linalg::column_space_projector(model.F[k + 1], tol) * draw(model.m));
  }
  for (std::size_t k = 0; k <= model.horizon; ++k) d.g.push_back(draw(model.p));

  double q_part = d.q.dot(model.S * d.q);
  double rest = 0.0;
  for (std::size_t k = 0; k < model.horizon; ++k) rest += d.f[k].dot(model.S_seq[k] * d.f[k]);
  for (std::size_t k = 0; k <= model.horizon; ++k) rest += d.g[k].dot(model.R_seq[k] * d.g[k]);

  double rest_scale = 1.0;
  if (fixed_q) {
    expect_length(*fixed_q, model.m, "fixed q");
    d.q = *fixed_q;
    q_part = d.q.dot(model.S * d.q);
    if (q_part >= margin) {
      throw ContractViolation(
          fmt::format("fixed q alone gives (Sq,q) = {} which leaves no room under margin {}",
                      q_part, margin));
    }
    rest_scale = rest > 0.0 ? std::sqrt((margin - q_part) / rest) : 0.0;
  } else {
    const double total = q_part + rest;
    const double scale = total > 0.0 ? std::sqrt(margin / total) : 0.0;
    d.q *= scale;
    rest_scale = scale;
  }
  for (auto& v : d.f) v *= rest_scale;
  for (auto& v : d.g) v *= rest_scale;
  return d;
}

}  // namespace dmx
