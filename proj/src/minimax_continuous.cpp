#include "dmx/minimax_continuous.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dmx/errors.hpp"

namespace dmx {
namespace {

constexpr double kSymmetryTol = 1e-10;

void expect_shape(const Matrix& a, std::size_t rows, std::size_t cols, const std::string& name) {
  if (static_cast<std::size_t>(a.rows()) != rows || static_cast<std::size_t>(a.cols()) != cols) {
    throw DimensionMismatch(
        fmt::format("{} is {}x{}, expected {}x{}", name, a.rows(), a.cols(), rows, cols));
  }
  if (!a.allFinite()) throw ContractViolation(fmt::format("{} has non-finite entries", name));
}

Matrix spd_inverse(const Matrix& a, const char* what) {
  if (a.size() == 0) return a;
  Eigen::LLT<Matrix> llt(linalg::symmetrize(a));
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure(fmt::format("{} is not positive definite", what));
  }
  return linalg::symmetrize(llt.solve(Matrix::Identity(a.rows(), a.cols())));
}

Matrix lerp(const Matrix& a, const Matrix& b, double w) { return (1.0 - w) * a + w * b; }

// Flips singular-vector pairs so the largest entry of each column of V is positive.
void canonicalize_signs(Matrix& U, Matrix& V, Eigen::Index paired) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index imax = 0;
    V.col(j).cwiseAbs().maxCoeff(&imax);
    if (V(imax, j) < 0.0) {
      V.col(j) *= -1.0;
      if (j < paired) U.col(j) *= -1.0;
    }
  }
  for (Eigen::Index j = paired; j < U.cols(); ++j) {
    Eigen::Index imax = 0;
    U.col(j).cwiseAbs().maxCoeff(&imax);
    if (U(imax, j) < 0.0) U.col(j) *= -1.0;
  }
}

void require_symmetric(const Matrix& a, const char* name) {
  if (a.size() == 0) return;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = linalg::asymmetry(a);
  if (asym > kSymmetryTol * scale) {
    throw CoefficientAssembly(
        fmt::format("{} is not symmetric (max |{}-{}'| = {:.3e})", name, name, name, asym));
  }
}

}  // namespace

void ContinuousDescriptorModel::validate(const ToleranceConfig& tol) const {
  if (n == 0 || m == 0) throw DimensionMismatch("continuous model needs n > 0 and m > 0");
  expect_shape(F, m, n, "F");
  if (grid.size() < 2) throw ContractViolation("time grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ContractViolation("time grid must be strictly increasing");
  }
  const std::size_t L = grid.size();
  if (C.size() != L || H.size() != L || Q.size() != L || R.size() != L) {
    throw DimensionMismatch("coefficient samples must match the grid length");
  }
  for (std::size_t i = 0; i < L; ++i) {
    expect_shape(C[i], m, n, fmt::format("C[{}]", i));
    expect_shape(H[i], p, n, fmt::format("H[{}]", i));
    expect_shape(Q[i], m, m, fmt::format("Q[{}]", i));
    expect_shape(R[i], p, p, fmt::format("R[{}]", i));
    if (!linalg::is_spd(Q[i], tol)) throw ContractViolation(fmt::format("Q[{}] is not SPD", i));
    if (p > 0 && !linalg::is_spd(R[i], tol)) {
      throw ContractViolation(fmt::format("R[{}] is not SPD", i));
    }
  }
}

ReducedSample ReducedModel::sample_at(double t) const {
  if (t <= grid.front()) return samples.front();
  if (t >= grid.back()) return samples.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
  const ReducedSample& a = samples[lo];
  const ReducedSample& b = samples[hi];
  return {lerp(a.C, b.C, w), lerp(a.H, b.H, w), lerp(a.Q, b.Q, w), lerp(a.R, b.R, w)};
}

Vector ReducedModel::reduce_direction(const Vector& l) const {
  if (static_cast<std::size_t>(l.size()) != m) {
    throw DimensionMismatch(fmt::format("direction has length {}, expected m = {}", l.size(), m));
  }
  return (U.transpose() * l).head(static_cast<Eigen::Index>(r));
}

ReducedModel svd_reduce(const ContinuousDescriptorModel& model, const ToleranceConfig& tol) {
  model.validate(tol);
  Eigen::JacobiSVD<Matrix> svd(model.F, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) throw DegenerateModel("F is the zero matrix");
  const Eigen::Index r = static_cast<Eigen::Index>(linalg::numeric_rank(model.F, tol));

  ReducedModel red;
  red.r = static_cast<std::size_t>(r);
  red.n = model.n;
  red.m = model.m;
  red.p = model.p;
  red.U = svd.matrixU();
  red.V = svd.matrixV();
  canonicalize_signs(red.U, red.V, r);
  red.sigma = sv.head(r);

  const Eigen::Index n = static_cast<Eigen::Index>(model.n);
  Vector scale = Vector::Ones(n);
  scale.head(r) = red.sigma.cwiseInverse();
  red.T = red.V * scale.asDiagonal();
  red.T_inv = scale.cwiseInverse().asDiagonal() * red.V.transpose();
  red.F_reduced = red.U.transpose() * model.F * red.T;
  red.grid = model.grid;
  for (std::size_t i = 0; i < model.grid.size(); ++i) {
    red.samples.push_back({red.U.transpose() * model.C[i] * red.T, model.H[i] * red.T,
                           linalg::symmetrize(red.U.transpose() * model.Q[i] * red.U),
                           model.R[i]});
  }
  return red;
}

CoefficientBlocks partition(const ReducedModel& red, const ReducedSample& s) {
  const Eigen::Index r = static_cast<Eigen::Index>(red.r);
  const Eigen::Index nr = static_cast<Eigen::Index>(red.n) - r;
  const Eigen::Index mr = static_cast<Eigen::Index>(red.m) - r;
  const Matrix W = spd_inverse(s.Q, "Q");
  const Matrix S = s.H.transpose() * s.R * s.H;

  CoefficientBlocks b;
  b.C1 = s.C.topLeftCorner(r, r);
  b.C2 = s.C.topRightCorner(r, nr);
  b.C3 = s.C.bottomLeftCorner(mr, r);
  b.C4 = s.C.bottomRightCorner(mr, nr);
  b.Q1 = W.topLeftCorner(r, r);
  b.Q2 = W.topRightCorner(r, mr);
  b.Q3 = W.bottomLeftCorner(mr, r);
  b.Q4 = W.bottomRightCorner(mr, mr);
  b.S1 = S.topLeftCorner(r, r);
  b.S2 = S.topRightCorner(r, nr);
  b.S3 = S.bottomLeftCorner(nr, r);
  b.S4 = S.bottomRightCorner(nr, nr);
  return b;
}

Matrix Coefficients::c_bar(const Matrix& K) const {
  return S4t_pinv * (D.transpose() - N * K);
}

Coefficients assemble_coefficients(const ReducedModel& red, const ReducedSample& s,
                                   CoefficientForm form, const ToleranceConfig& tol) {
  const CoefficientBlocks b = partition(red, s);
  const Eigen::Index r = static_cast<Eigen::Index>(red.r);
  const Eigen::Index nr = static_cast<Eigen::Index>(red.n) - r;
  const Eigen::Index mr = static_cast<Eigen::Index>(red.m) - r;

  const Matrix Q4inv = spd_inverse(b.Q4, "Q4");
  const Matrix Q4invC3 = Q4inv * b.C3;
  const Matrix Q4invC4 = Q4inv * b.C4;

  Coefficients c;
  c.D = b.C2 - b.Q2 * Q4invC4;
  c.N = b.S3 + b.C4.transpose() * Q4invC3;
  c.S4t_pinv = linalg::pinv(linalg::symmetrize(b.S4 + b.C4.transpose() * Q4invC4), tol);
  c.A = b.C1 - b.Q2 * Q4invC3 - c.D * c.S4t_pinv * c.N;

  const Matrix M_base = b.S1 + b.C3.transpose() * Q4invC3;
  const Matrix G_tail = c.D * c.S4t_pinv * c.D.transpose();
  if (form == CoefficientForm::corrected) {
    c.M = M_base - c.N.transpose() * c.S4t_pinv * c.N;
    c.G = b.Q1 - b.Q2 * Q4inv * b.Q3 + G_tail;
  } else {
    // Literal forms: the middle factor of M is the product S2 C3' Q4^{-1} C4, and G uses Q2 Q1^{-1} Q3.
    c.M = M_base;
    if (nr > 0 && mr > 0) {
      if (b.S2.cols() != b.C3.cols()) {
        throw DimensionMismatch("verbatim M: product S2 C3' needs n - r == r");
      }
      c.M -= (b.S2 * b.C3.transpose() * Q4invC4) * c.S4t_pinv * c.N;
    }
    c.G = b.Q1 + G_tail;
    if (mr > 0) {
      if (b.Q2.cols() != b.Q1.rows()) {
        throw DimensionMismatch("verbatim G: product Q2 Q1^{-1} needs m - r == r");
      }
      c.G -= b.Q2 * spd_inverse(b.Q1, "Q1") * b.Q3;
    }
  }
  require_symmetric(c.M, "M");
  require_symmetric(c.G, "G");
  c.M = linalg::symmetrize(c.M);
  c.G = linalg::symmetrize(c.G);

  const Matrix HtR = s.H.transpose() * s.R;
  c.HtR1 = HtR.topRows(r);
  c.HtR2 = HtR.bottomRows(nr);
  return c;
}

Coefficients assemble_coefficients(const ReducedModel& red, std::size_t grid_index,
                                   CoefficientForm form, const ToleranceConfig& tol) {
  if (grid_index >= red.samples.size()) {
    throw ContractViolation(fmt::format("grid index {} out of range", grid_index));
  }
  return assemble_coefficients(red, red.samples[grid_index], form, tol);
}

ClosedRangeReport closed_range_diagnostic(const Matrix& C2, const Matrix& C4,
                                          std::size_t eps_samples) {
  if (eps_samples < 3) throw ContractViolation("closed-range diagnostic needs >= 3 samples");
  if (C2.cols() != C4.cols()) {
    throw DimensionMismatch(
        fmt::format("C2 has {} columns but C4 has {}", C2.cols(), C4.cols()));
  }
  const Eigen::Index k = C4.cols();
  Matrix V = Matrix::Identity(k, k);
  Vector s2 = Vector::Zero(k);
  if (C4.size() > 0) {
    Eigen::JacobiSVD<Matrix> svd(C4, Eigen::ComputeFullV);
    V = svd.matrixV();
    const Vector& sv = svd.singularValues();
    s2.head(sv.size()) = sv.cwiseAbs2();
  }

  ClosedRangeReport rep;
  for (std::size_t i = 0; i < eps_samples; ++i) {
    const double eps = 0.5 * std::pow(10.0, -static_cast<double>(i));
    const Vector denom = s2.array() + eps * eps;
    if ((denom.array() <= 0.0).any()) throw NumericalFailure("eps^2 I + C4'C4 is singular");
    const Matrix Qe = V * denom.cwiseInverse().asDiagonal() * V.transpose();
    const double value = (Qe * C2.transpose()).cwiseAbs().sum();
    rep.eps.push_back(eps);
    rep.values.push_back(value);
    rep.sup_estimate = std::max(rep.sup_estimate, value);
  }
  const double last = rep.values.back();
  const double prev = rep.values[rep.values.size() - 2];
  rep.bounded = prev > 0.0 ? last / prev < 2.0 : last == 0.0;
  return rep;
}

}  // namespace dmx
