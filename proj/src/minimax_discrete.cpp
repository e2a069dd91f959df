#include "dmx/minimax_discrete.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dmx/errors.hpp"

namespace dmx {
namespace {

constexpr double kInconsistencySlack = 1e-8;

void expect_length(const Vector& v, Eigen::Index len, const char* name) {
  if (v.size() != len) {
    throw DimensionMismatch(fmt::format("{} has length {}, expected {}", name, v.size(), len));
  }
}

void expect_cols(const Matrix& a, Eigen::Index cols, const char* name) {
  if (a.cols() != cols) {
    throw DimensionMismatch(fmt::format("{} has {} columns, expected {}", name, a.cols(), cols));
  }
}

// J with P = J J'. Negative rounding noise is dropped; rank decisions are left to B.
Matrix psd_factor(const Matrix& P) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::symmetrize(P));
  if (es.info() != Eigen::Success) throw NumericalFailure("eigen-decomposition of P failed");
  const Vector& lambda = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 0.0) keep.push_back(i);
  }
  Matrix J(P.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    J.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) * std::sqrt(lambda[keep[j]]);
  }
  return J;
}

}  // namespace

StepSlice slice_at(const DiscreteDescriptorModel& model, std::size_t k) {
  if (k == 0 || k > model.horizon) {
    throw ContractViolation(fmt::format("step slice {} outside 1..{}", k, model.horizon));
  }
  return {model.F[k], model.C[k - 1], model.H[k], model.S_seq[k - 1], model.R_seq[k]};
}

FilterState filter_init(const DiscreteDescriptorModel& model, const Vector& y0,
                        const std::optional<Vector>& q_anchor) {
  const Matrix& F0 = model.F.at(0);
  const Matrix& H0 = model.H.at(0);
  const Matrix& R0 = model.R_seq.at(0);
  expect_length(y0, H0.rows(), "y0");

  FilterState state;
  state.k = 0;
  state.P = linalg::symmetrize(F0.transpose() * model.S * F0 + H0.transpose() * R0 * H0);
  state.r = H0.transpose() * (R0 * y0);
  state.alpha = y0.dot(R0 * y0);
  if (q_anchor) {
    expect_length(*q_anchor, F0.rows(), "q_anchor");
    state.r += F0.transpose() * (model.S * *q_anchor);
    state.alpha += q_anchor->dot(model.S * *q_anchor);
  }
  return state;
}

FilterState filter_step(const FilterState& state, const StepSlice& s, const Vector& y,
                        const ToleranceConfig& tol) {
  const Eigen::Index n = state.P.rows();
  expect_cols(s.F, n, "F_k");
  expect_cols(s.C_prev, n, "C_{k-1}");
  expect_cols(s.H, n, "H_k");
  expect_length(y, s.H.rows(), "y_k");
  if (s.F.rows() != s.C_prev.rows() || s.S_prev.rows() != s.C_prev.rows() ||
      s.R.rows() != s.H.rows()) {
    throw DimensionMismatch(fmt::format("step {}: inconsistent slice shapes", state.k + 1));
  }

  // Square-root form: with P = J J' and S = L L', B = K' K for K = [J'; L' C].
  // From K = U diag(sigma) V', B^+ = V diag(sigma^-2) V' and
  // S - S C B^+ C' S = L (I - Pi) L' restricted to the lower block, where
  // I - Pi = U_0 U_0' projects onto N(K'). The bracket stays PSD in floating point.
  const Matrix J = psd_factor(state.P);
  const Eigen::LLT<Matrix> llt(s.S_prev);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure(fmt::format("step {}: S_{{k-1}} has no Cholesky factor", state.k + 1));
  }
  const Matrix L = llt.matrixL();
  const Eigen::Index m = s.C_prev.rows();
  Matrix K(J.cols() + m, n);
  K << J.transpose(), L.transpose() * s.C_prev;
  const Eigen::JacobiSVD<Matrix> svd(K, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? std::sqrt(tol.rank_rel_tol) * sigma[0] : 0.0;
  Eigen::Index q = 0;
  while (q < sigma.size() && sigma[q] > 0.0 && sigma[q] >= cutoff) ++q;

  const Matrix Vq = svd.matrixV().leftCols(q);
  const Matrix B_pinv = Vq * sigma.head(q).cwiseInverse().cwiseAbs2().asDiagonal() * Vq.transpose();
  const Matrix W = svd.matrixU().rightCols(K.rows() - q).bottomRows(m);
  const Matrix LW = L * W;
  const Matrix inner = LW * LW.transpose();
  const Matrix SCBp = s.S_prev * s.C_prev * B_pinv;  // S_{k-1} C_{k-1} B_{k-1}^+

  FilterState next;
  next.k = state.k + 1;
  next.P = linalg::symmetrize(s.H.transpose() * s.R * s.H + s.F.transpose() * inner * s.F);
  next.r = s.F.transpose() * (SCBp * state.r) + s.H.transpose() * (s.R * y);
  next.alpha = state.alpha + y.dot(s.R * y) - state.r.dot(B_pinv * state.r);
  return next;
}

EstimateReport estimate(const FilterState& state, const ToleranceConfig& tol) {
  EstimateReport rep;
  rep.k = state.k;
  const auto info = linalg::rank_info(state.P, tol);
  rep.rank = info.rank;
  rep.index = static_cast<std::size_t>(state.P.rows()) - info.rank;
  rep.near_rank_threshold = info.near_threshold;
  rep.p_pinv = linalg::symmetrize(linalg::pinv(state.P, tol));
  rep.projector = linalg::range_projector(state.P, tol);
  rep.x_hat = rep.p_pinv * state.r;
  rep.beta_hat = 1.0 - state.alpha + rep.x_hat.dot(state.P * rep.x_hat);
  rep.inconsistent = rep.beta_hat < -kInconsistencySlack;
  return rep;
}

ErrorBound directional_error(const EstimateReport& report, const Vector& l, double rel_tol) {
  expect_length(l, report.projector.rows(), "direction");
  if (report.inconsistent) {
    throw ContractViolation(
        fmt::format("step {}: beta_hat = {} < 0, data are inconsistent", report.k, report.beta_hat));
  }
  if ((report.projector * l - l).norm() > rel_tol * l.norm()) return ErrorBound::unbounded();
  const double beta = std::max(report.beta_hat, 0.0);
  const double quad = std::max(l.dot(report.p_pinv * l), 0.0);
  return ErrorBound::bounded(std::sqrt(beta) * std::sqrt(quad));
}

bool membership(const EstimateReport& report, const FilterState& state, const Vector& x,
                double slack) {
  expect_length(x, state.P.rows(), "x");
  const Vector e = x - report.x_hat;
  return e.dot(state.P * e) <= report.beta_hat + slack;
}

MinimaxRun run_minimax(const DiscreteDescriptorModel& model, const std::vector<Vector>& y,
                       const std::optional<Vector>& q_anchor, const ToleranceConfig& tol) {
  if (y.empty() || y.size() > model.horizon + 1) {
    throw DimensionMismatch(
        fmt::format("{} outputs given for a model with horizon {}", y.size(), model.horizon));
  }
  MinimaxRun run;
  run.states.reserve(y.size());
  run.reports.reserve(y.size());
  run.states.push_back(filter_init(model, y[0], q_anchor));
  run.reports.push_back(estimate(run.states.back(), tol));
  for (std::size_t k = 1; k < y.size(); ++k) {
    run.states.push_back(filter_step(run.states.back(), slice_at(model, k), y[k], tol));
    run.reports.push_back(estimate(run.states.back(), tol));
  }
  return run;
}

}  // namespace dmx
