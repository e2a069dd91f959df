#include <fmt/format.h>

#include "dmx/errors.hpp"
#include "dmx/minimax_discrete.hpp"

namespace dmx {
namespace {

Matrix checked_inverse(const Matrix& a, const char* what, std::size_t step) {
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) {
    throw NumericalFailure(fmt::format("step {}: {} is singular", step, what));
  }
  return lu.inverse();
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

void require_full_rank(const Matrix& F, const Matrix& H, std::size_t step,
                       const ToleranceConfig& tol) {
  if (!stacked_full_rank(F, H, tol)) {
    throw RankPrecondition(step, fmt::format("step {}: rank([F; H]) = {} < n = {}", step,
                                             linalg::numeric_rank(stack(F, H), tol), F.cols()));
  }
}

}  // namespace

bool stacked_full_rank(const Matrix& F, const Matrix& H, const ToleranceConfig& tol) {
  if (F.cols() != H.cols()) throw DimensionMismatch("F and H column counts differ");
  return linalg::numeric_rank(stack(F, H), tol) == static_cast<std::size_t>(F.cols());
}

KalmanFullRankState kalman_init(const DiscreteDescriptorModel& model, const Vector& y0,
                                const std::optional<Vector>& q_anchor,
                                const ToleranceConfig& tol) {
  const Matrix& F0 = model.F.at(0);
  const Matrix& H0 = model.H.at(0);
  const Matrix& R0 = model.R_seq.at(0);
  if (y0.size() != H0.rows()) throw DimensionMismatch("y0 length does not match H_0");
  require_full_rank(F0, H0, 0, tol);

  KalmanFullRankState st;
  st.k = 0;
  st.P_filt = linalg::symmetrize(
      checked_inverse(F0.transpose() * model.S * F0 + H0.transpose() * R0 * H0, "P_{0|0}^{-1}", 0));
  Vector rhs = H0.transpose() * (R0 * y0);
  if (q_anchor) {
    if (q_anchor->size() != F0.rows()) throw DimensionMismatch("q_anchor length does not match F_0");
    rhs += F0.transpose() * (model.S * *q_anchor);
  }
  st.x_filt = st.P_filt * rhs;
  return st;
}

KalmanFullRankState kalman_fullrank_step(const KalmanFullRankState& state, const StepSlice& s,
                                         const Vector& y, const ToleranceConfig& tol) {
  const std::size_t k = state.k + 1;
  if (y.size() != s.H.rows()) throw DimensionMismatch("y_k length does not match H_k");
  require_full_rank(s.F, s.H, k, tol);

  const Matrix S_inv = checked_inverse(s.S_prev, "S_{k-1}", k);
  const Matrix A = linalg::symmetrize(
      checked_inverse(S_inv + s.C_prev * state.P_filt * s.C_prev.transpose(), "A_{k-1}^{-1}", k));
  const Matrix info = s.F.transpose() * A * s.F + s.H.transpose() * s.R * s.H;

  KalmanFullRankState next;
  next.k = k;
  next.P_filt = linalg::symmetrize(checked_inverse(info, "P_{k|k}^{-1}", k));
  next.x_filt = next.P_filt * (s.F.transpose() * (A * (s.C_prev * state.x_filt)) +
                               s.H.transpose() * (s.R * y));
  return next;
}

}  // namespace dmx
