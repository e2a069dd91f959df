#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dmx/errors.hpp"
#include "dmx/minimax_continuous.hpp"

namespace dmx {
namespace {

struct MeshInterval {
  double start;
  double length;
  std::size_t steps;
};

std::vector<MeshInterval> build_mesh(const std::vector<double>& grid, double step) {
  if (!(step > 0.0)) throw ContractViolation("integration step must be positive");
  std::vector<MeshInterval> mesh;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double len = grid[i + 1] - grid[i];
    const double ratio = len / step;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-6) {
      throw ContractViolation(fmt::format(
          "step {} does not divide grid interval [{}, {}]", step, grid[i], grid[i + 1]));
    }
    mesh.push_back({grid[i], len, static_cast<std::size_t>(steps)});
  }
  return mesh;
}

Matrix riccati_rhs(const Coefficients& c, const Matrix& K, RiccatiConvention conv) {
  const Matrix lin = c.A * K + K * c.A.transpose();
  const Matrix quad = K * c.M * K;
  return conv == RiccatiConvention::dual ? Matrix(lin - quad + c.G) : Matrix(lin + quad - c.G);
}

Vector interpolate_output(const std::vector<double>& grid, const std::vector<Vector>& y, double t) {
  if (t <= grid.front()) return y.front();
  if (t >= grid.back()) return y.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const double w = (t - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
  return (1.0 - w) * y[hi - 1] + w * y[hi];
}

}  // namespace

Matrix RiccatiTrajectory::at(double t) const {
  if (t <= times.front()) return K.front();
  if (t >= times.back()) return K.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - times.begin()) - 1;
  const double h = times[j + 1] - times[j];
  const double s = (t - times[j]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * K[j] + (s3 - 2 * s2 + s) * h * K_dot[j] +
         (-2 * s3 + 3 * s2) * K[j + 1] + (s3 - s2) * h * K_dot[j + 1];
}

std::vector<Matrix> RiccatiTrajectory::on_grid(const std::vector<double>& grid) const {
  std::vector<Matrix> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(at(t));
  return out;
}

RiccatiTrajectory riccati_integrate(const ReducedModel& red, double step,
                                    const RiccatiOptions& options, const ToleranceConfig& tol) {
  const auto mesh = build_mesh(red.grid, step);
  const Eigen::Index r = static_cast<Eigen::Index>(red.r);
  auto rhs = [&](double t, const Matrix& K) {
    return riccati_rhs(assemble_coefficients(red, red.sample_at(t), options.form, tol), K,
                       options.convention);
  };

  RiccatiTrajectory traj;
  traj.step = step;
  traj.options = options;
  Matrix K = Matrix::Zero(r, r);
  double t = red.grid.front();
  traj.times.push_back(t);
  traj.K.push_back(K);
  traj.K_dot.push_back(rhs(t, K));

  for (const auto& interval : mesh) {
    const double h = interval.length / static_cast<double>(interval.steps);
    for (std::size_t j = 0; j < interval.steps; ++j) {
      t = interval.start + static_cast<double>(j) * h;
      const Matrix k1 = traj.K_dot.back();
      const Matrix k2 = rhs(t + 0.5 * h, K + 0.5 * h * k1);
      const Matrix k3 = rhs(t + 0.5 * h, K + 0.5 * h * k2);
      const Matrix k4 = rhs(t + h, K + h * k3);
      K = linalg::symmetrize(K + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
      const double t_next = j + 1 == interval.steps ? interval.start + interval.length : t + h;
      if (!K.allFinite() || K.norm() > options.blowup_bound) {
        throw FiniteEscape(t_next, fmt::format("Riccati solution escapes at t = {}", t_next));
      }
      traj.times.push_back(t_next);
      traj.K.push_back(K);
      traj.K_dot.push_back(rhs(t_next, K));
    }
  }
  return traj;
}

double ContinuousEstimate::estimate(const Vector& l1) const { return l1.dot(x_hat.back()); }

double ContinuousEstimate::error(const Vector& l1) const { return l1.dot(K_terminal * l1); }

ContinuousEstimate filter_integrate(const ReducedModel& red, const RiccatiTrajectory& riccati,
                                    const std::vector<Vector>& y, const ToleranceConfig& tol) {
  if (y.size() != red.grid.size()) {
    throw DimensionMismatch(
        fmt::format("{} output samples for a grid of {} points", y.size(), red.grid.size()));
  }
  for (const auto& v : y) {
    if (static_cast<std::size_t>(v.size()) != red.p) throw DimensionMismatch("output sample length");
  }
  if (riccati.times.empty() || riccati.times.front() != red.grid.front() ||
      std::abs(riccati.times.back() - red.grid.back()) > 1e-12 * std::max(1.0, std::abs(red.grid.back()))) {
    throw ContractViolation("Riccati trajectory does not span the model grid");
  }
  const CoefficientForm form = riccati.options.form;

  auto field = [&](double t, const Matrix& K, const Vector& x) -> Vector {
    const Coefficients c = assemble_coefficients(red, red.sample_at(t), form, tol);
    const Vector yt = interpolate_output(red.grid, y, t);
    const Vector drive1 = c.HtR1 * yt;
    const Vector drive2 = c.c_bar(K).transpose() * (c.HtR2 * yt);
    const Vector input = form == CoefficientForm::corrected ? Vector(K * drive1 + drive2)
                                                            : Vector(K * (drive1 + drive2));
    return (c.A - K * c.M) * x + input;
  };

  ContinuousEstimate est;
  Vector x = Vector::Zero(static_cast<Eigen::Index>(red.r));
  std::size_t next_grid = 0;
  auto record = [&](double t) {
    while (next_grid < red.grid.size() &&
           std::abs(t - red.grid[next_grid]) <= 1e-9 * std::max(1.0, std::abs(t))) {
      est.times.push_back(red.grid[next_grid]);
      est.x_hat.push_back(x);
      ++next_grid;
    }
  };
  record(riccati.times.front());
  for (std::size_t j = 0; j + 1 < riccati.times.size(); ++j) {
    const double t = riccati.times[j];
    const double h = riccati.times[j + 1] - t;
    const Matrix K_mid = riccati.at(t + 0.5 * h);
    const Vector k1 = field(t, riccati.K[j], x);
    const Vector k2 = field(t + 0.5 * h, K_mid, x + 0.5 * h * k1);
    const Vector k3 = field(t + 0.5 * h, K_mid, x + 0.5 * h * k2);
    const Vector k4 = field(t + h, riccati.K[j + 1], x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(riccati.times[j + 1]);
  }
  if (est.times.size() != red.grid.size()) {
    throw ContractViolation("Riccati mesh does not contain every grid point");
  }
  est.K_terminal = riccati.terminal();
  return est;
}

}  // namespace dmx
