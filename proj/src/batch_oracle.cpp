#include <fmt/format.h>

#include "dmx/errors.hpp"
#include "dmx/minimax_discrete.hpp"

namespace dmx {
namespace {

// Upper factor L' of W = L L', so that (W v, v) = |L' v|^2.
Matrix weight_root(const Matrix& w) {
  Eigen::LLT<Matrix> llt(linalg::symmetrize(w));
  if (llt.info() != Eigen::Success) throw NumericalFailure("weight matrix is not positive definite");
  return llt.matrixU();
}

}  // namespace

BatchSolution batch_oracle(const DiscreteDescriptorModel& model, const std::vector<Vector>& y,
                           std::size_t tau, const std::optional<Vector>& q_anchor,
                           const ToleranceConfig& tol) {
  if (tau > model.horizon) {
    throw ContractViolation(fmt::format("tau = {} exceeds horizon {}", tau, model.horizon));
  }
  if (y.size() < tau + 1) {
    throw DimensionMismatch(fmt::format("{} outputs given, need {}", y.size(), tau + 1));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(model.n);
  const Eigen::Index m = static_cast<Eigen::Index>(model.m);
  const Eigen::Index p = static_cast<Eigen::Index>(model.p);
  const Eigen::Index steps = static_cast<Eigen::Index>(tau) + 1;
  const Eigen::Index rows = m + static_cast<Eigen::Index>(tau) * m + steps * p;

  Matrix A = Matrix::Zero(rows, steps * n);
  Vector b = Vector::Zero(rows);
  Eigen::Index row = 0;

  const Matrix root_S = weight_root(model.S);
  A.block(row, 0, m, n) = root_S * model.F[0];
  if (q_anchor) b.segment(row, m) = root_S * *q_anchor;
  row += m;

  for (std::size_t k = 0; k < tau; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(k) * n;
    const Matrix root = weight_root(model.S_seq[k]);
    A.block(row, col, m, n) = -root * model.C[k];
    A.block(row, col + n, m, n) = root * model.F[k + 1];
    row += m;
  }
  for (std::size_t k = 0; k <= tau; ++k) {
    if (p == 0) break;
    if (y[k].size() != p) throw DimensionMismatch(fmt::format("y[{}] has wrong length", k));
    const Eigen::Index col = static_cast<Eigen::Index>(k) * n;
    const Matrix root = weight_root(model.R_seq[k]);
    A.block(row, col, p, n) = root * model.H[k];
    b.segment(row, p) = root * y[k];
    row += p;
  }

  const Vector x = linalg::pinv(A, tol) * b;
  BatchSolution sol;
  sol.psi_min = (A * x - b).squaredNorm();
  for (Eigen::Index k = 0; k < steps; ++k) sol.x.push_back(x.segment(k * n, n));
  sol.x_tau = sol.x.back();
  return sol;
}

}  // namespace dmx
