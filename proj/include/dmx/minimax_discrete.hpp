#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dmx/descriptor_model.hpp"
#include "dmx/linalg.hpp"

namespace dmx {

/// Information-form carrier of the recursive minimax filter at step k.
///
/// The a posteriori set at step k is {x : (P (x - xh), x - xh) <= beta} with
/// xh = P^+ r and beta = 1 - alpha + (P xh, xh).
struct FilterState {
  std::size_t k = 0;
  Matrix P;
  Vector r;
  double alpha = 0.0;
};

/// Matrices entering one step k-1 -> k.
struct StepSlice {
  Matrix F;       // F_k
  Matrix C_prev;  // C_{k-1}
  Matrix H;       // H_k
  Matrix S_prev;  // S_{k-1}
  Matrix R;       // R_k
};

StepSlice slice_at(const DiscreteDescriptorModel& model, std::size_t k);

/// Worst-case error in one direction. Infinite off the observable subspace.
struct ErrorBound {
  bool infinite = false;
  double value = 0.0;

  static ErrorBound unbounded() { return {true, 0.0}; }
  static ErrorBound bounded(double v) { return {false, v}; }
};

struct EstimateReport {
  std::size_t k = 0;
  Vector x_hat;
  double beta_hat = 0.0;
  Matrix projector;      // P^+ P, projector onto the observable subspace
  std::size_t rank = 0;  // numeric rank of P
  std::size_t index = 0; // n - rank: index of non-causality
  Matrix p_pinv;
  // beta_hat < -1e-8: the outputs cannot come from any admissible realization.
  bool inconsistent = false;
  // A singular value of P sits within a factor 10 of the rank cutoff.
  bool near_rank_threshold = false;
};

/// P_0 = F_0' S F_0 + H_0' R_0 H_0, r_0 = H_0' R_0 y_0 (+ F_0' S q when anchored).
FilterState filter_init(const DiscreteDescriptorModel& model, const Vector& y0,
                        const std::optional<Vector>& q_anchor = std::nullopt);

/// Advances the recursion by one step.
///
///   B   = P + C' S C
///   P_k = H' R H + F' [S - S C B^+ C' S] F     (symmetrized)
///   r_k = F' S C B^+ r + H' R y
///   a_k = a + (R y, y) - (B^+ r, r)
FilterState filter_step(const FilterState& state, const StepSlice& slice, const Vector& y,
                        const ToleranceConfig& tol = {});

EstimateReport estimate(const FilterState& state, const ToleranceConfig& tol = {});

/// sqrt(beta) * sqrt((P^+ l, l)) when P^+ P l = l, otherwise infinite.
///
/// `rel_tol` bounds |P^+ P l - l| relative to |l|. Throws ContractViolation
/// when the report is flagged inconsistent.
ErrorBound directional_error(const EstimateReport& report, const Vector& l,
                             double rel_tol = 1e-8);

/// (P (x - xh), x - xh) <= beta + slack.
bool membership(const EstimateReport& report, const FilterState& state, const Vector& x,
                double slack = 1e-9);

/// States and reports for steps 0..tau of a model fed with outputs y_0..y_tau.
struct MinimaxRun {
  std::vector<FilterState> states;
  std::vector<EstimateReport> reports;
};

MinimaxRun run_minimax(const DiscreteDescriptorModel& model, const std::vector<Vector>& y,
                       const std::optional<Vector>& q_anchor = std::nullopt,
                       const ToleranceConfig& tol = {});

/// Covariance-form recursion valid when rank([F_k; H_k]) = n at every step.
struct KalmanFullRankState {
  std::size_t k = 0;
  Matrix P_filt;  // P_{k|k}
  Vector x_filt;  // x_{k|k}
};

/// True when the stacked [F; H] has full column rank.
bool stacked_full_rank(const Matrix& F, const Matrix& H, const ToleranceConfig& tol = {});

/// P_{0|0}^{-1} = F_0' S F_0 + H_0' R_0 H_0, x_{0|0} = P_{0|0} (H_0' R_0 y_0 [+ F_0' S q]).
KalmanFullRankState kalman_init(const DiscreteDescriptorModel& model, const Vector& y0,
                                const std::optional<Vector>& q_anchor = std::nullopt,
                                const ToleranceConfig& tol = {});

/// A_{k-1}^{-1} = S_{k-1}^{-1} + C_{k-1} P_{k-1|k-1} C_{k-1}'
/// P_{k|k}^{-1} = F_k' A_{k-1} F_k + H_k' R_k H_k
/// x_{k|k} = P_{k|k} F_k' A_{k-1} C_{k-1} x_{k-1|k-1} + P_{k|k} H_k' R_k y_k
///
/// Throws RankPrecondition when [F_k; H_k] is rank deficient and
/// NumericalFailure when an inverse does not exist.
KalmanFullRankState kalman_fullrank_step(const KalmanFullRankState& state,
                                         const StepSlice& slice, const Vector& y,
                                         const ToleranceConfig& tol = {});

/// Deterministic least-squares fit of the whole trajectory x_0..x_tau.
struct BatchSolution {
  Vector x_tau;         // tau-th block of the minimum-norm minimizer
  double psi_min = 0.0; // minimum of the weighted residual
  std::vector<Vector> x;
};

/// Minimizes (S F_0 x_0, F_0 x_0) + sum_{k<tau} (S_k e_k, e_k) + sum_{k<=tau} (R_k v_k, v_k)
/// with e_k = F_{k+1} x_{k+1} - C_k x_k and v_k = y_k - H_k x_k; with an anchor the first
/// term becomes (S (F_0 x_0 - q), F_0 x_0 - q).
BatchSolution batch_oracle(const DiscreteDescriptorModel& model, const std::vector<Vector>& y,
                           std::size_t tau, const std::optional<Vector>& q_anchor = std::nullopt,
                           const ToleranceConfig& tol = {});

}  // namespace dmx
