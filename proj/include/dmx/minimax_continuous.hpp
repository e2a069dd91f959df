#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dmx/linalg.hpp"

namespace dmx {

/// d/dt F x(t) = C(t) x(t) + f(t),  F x(t0) = 0,  y(t) = H(t) x(t) + eta(t),
/// with f bounded by int (Q f, f) dt <= 1 and eta by int (R eta, eta) dt <= 1.
///
/// Time-varying coefficients are sampled on `grid` and interpolated linearly.
struct ContinuousDescriptorModel {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t p = 0;
  Matrix F;                  // constant, m x n
  std::vector<double> grid;  // strictly increasing, at least two points
  std::vector<Matrix> C;     // m x n per grid point
  std::vector<Matrix> H;     // p x n per grid point
  std::vector<Matrix> Q;     // m x m SPD per grid point
  std::vector<Matrix> R;     // p x p SPD per grid point

  void validate(const ToleranceConfig& tol = {}) const;
};

/// Coefficients of one time instant in SVD coordinates.
///
/// With U' F T = [[I_r, 0], [0, 0]] the state is x = T z and the equations are
/// premultiplied by U'. W = (U' Q U)^{-1} is the covariance-like weight whose
/// blocks W1..W4 play the role of Q_1..Q_4 in the filter formulas.
struct ReducedSample {
  Matrix C;  // U' C T
  Matrix H;  // H T
  Matrix Q;  // U' Q U
  Matrix R;
};

struct ReducedModel {
  std::size_t r = 0;  // rank of F
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t p = 0;
  Matrix U;       // m x m orthogonal
  Matrix V;       // n x n orthogonal
  Vector sigma;   // leading r singular values of F
  Matrix T;       // V diag(sigma^{-1}, I): x = T z
  Matrix T_inv;
  Matrix F_reduced;  // U' F T
  std::vector<double> grid;
  std::vector<ReducedSample> samples;

  /// Linear interpolation of the reduced samples at time t (clamped to the grid).
  ReducedSample sample_at(double t) const;

  /// First r coordinates of U' l for l in R^m, so that (l, F x) = (l1, z1).
  Vector reduce_direction(const Vector& l) const;
};

ReducedModel svd_reduce(const ContinuousDescriptorModel& model, const ToleranceConfig& tol = {});

/// Which formulas feed M(t), G(t) and the filter input term.
enum class CoefficientForm {
  /// Schur-complement forms: M's middle factor (S2 + C3' Q4^{-1} C4), G's Q2 Q4^{-1} Q3,
  /// and the filter input K H1' R y + Cbar' H2' R y.
  corrected,
  /// The literal product forms; dimensions must allow the products.
  verbatim,
};

struct CoefficientBlocks {
  Matrix C1, C2, C3, C4;
  Matrix Q1, Q2, Q3, Q4;  // blocks of W = (U' Q U)^{-1}
  Matrix S1, S2, S3, S4;  // blocks of H' R H in reduced coordinates
};

CoefficientBlocks partition(const ReducedModel& reduced, const ReducedSample& sample);

/// A, M, G plus the pieces needed to form Cbar(K) = S4t^+ (D' - N K).
struct Coefficients {
  Matrix A, M, G;
  Matrix D;         // C2 - Q2 Q4^{-1} C4
  Matrix N;         // S3 + C4' Q4^{-1} C3
  Matrix S4t_pinv;  // (S4 + C4' Q4^{-1} C4)^+
  Matrix HtR1;      // first r rows of H' R (reduced)
  Matrix HtR2;      // remaining n - r rows

  Matrix c_bar(const Matrix& K) const;
};

/// Throws CoefficientAssembly if M or G is asymmetric beyond 1e-10 (relative).
Coefficients assemble_coefficients(const ReducedModel& reduced, const ReducedSample& sample,
                                   CoefficientForm form = CoefficientForm::corrected,
                                   const ToleranceConfig& tol = {});
Coefficients assemble_coefficients(const ReducedModel& reduced, std::size_t grid_index,
                                   CoefficientForm form = CoefficientForm::corrected,
                                   const ToleranceConfig& tol = {});

enum class RiccatiConvention {
  paper,  // dK/dt = A K + K A' + K M K - G
  dual,   // dK/dt = A K + K A' - K M K + G
};

struct RiccatiOptions {
  RiccatiConvention convention = RiccatiConvention::dual;
  CoefficientForm form = CoefficientForm::corrected;
  double blowup_bound = 1e12;
};

/// K on the uniform step mesh, with dK/dt at each mesh point for Hermite interpolation.
struct RiccatiTrajectory {
  double step = 0.0;
  std::vector<double> times;
  std::vector<Matrix> K;
  std::vector<Matrix> K_dot;
  RiccatiOptions options;

  /// Cubic Hermite interpolation between mesh points.
  Matrix at(double t) const;
  /// Values at the model grid points.
  std::vector<Matrix> on_grid(const std::vector<double>& grid) const;
  const Matrix& terminal() const { return K.back(); }
};

/// Fixed-step classical RK4 from K(t0) = 0; K is symmetrized after every step.
/// `step` must divide every grid interval. Throws FiniteEscape when |K| exceeds
/// options.blowup_bound.
RiccatiTrajectory riccati_integrate(const ReducedModel& reduced, double step,
                                    const RiccatiOptions& options = {},
                                    const ToleranceConfig& tol = {});

struct ContinuousEstimate {
  std::vector<double> times;  // model grid
  std::vector<Vector> x_hat;  // estimate of the first r reduced coordinates
  Matrix K_terminal;

  /// (l1, x_hat(T)).
  double estimate(const Vector& l1) const;
  /// (l1, K(T) l1).
  double error(const Vector& l1) const;
};

/// RK4 integration of dx/dt = (A - K M) x + input(y) from x(t0) = 0 on the Riccati mesh.
/// `y` holds one output sample per model grid point.
ContinuousEstimate filter_integrate(const ReducedModel& reduced, const RiccatiTrajectory& riccati,
                                    const std::vector<Vector>& y,
                                    const ToleranceConfig& tol = {});

struct ClosedRangeReport {
  double sup_estimate = 0.0;
  bool bounded = true;
  std::vector<double> eps;
  std::vector<double> values;
};

/// Samples |Q(eps) C2'|_mod, Q(eps) = (eps^2 I + C4' C4)^{-1}, at eps = 0.5 * 10^{-i},
/// i = 0..eps_samples-1. Bounded iff the last two samples differ by a ratio < 2.
ClosedRangeReport closed_range_diagnostic(const Matrix& C2, const Matrix& C4,
                                          std::size_t eps_samples = 7);

}  // namespace dmx
