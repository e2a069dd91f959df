#include "dmx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <fmt/format.h>

#include "dmx/errors.hpp"

namespace dmx {

void ToleranceConfig::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
      throw ContractViolation(fmt::format("tolerance {} = {} must lie in (0, 1)", name, v));
    }
  };
  check(rank_rel_tol, "rank_rel_tol");
  check(sym_tol, "sym_tol");
  check(spd_tol, "spd_tol");
}

ToleranceConfig ToleranceConfig::from_environment() {
  ToleranceConfig tol;
  if (const char* env = std::getenv("DMX_RANK_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end == env || *end != '\0') {
      throw ConfigError(fmt::format("DMX_RANK_TOL='{}' is not a number", env));
    }
    tol.rank_rel_tol = value;
  }
  try {
    tol.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(fmt::format("DMX_RANK_TOL: {}", e.what()));
  }
  return tol;
}

namespace linalg {
namespace {

using Svd = Eigen::JacobiSVD<Matrix>;

Svd checked_svd(const Matrix& m, unsigned int options) {
  if (!all_finite(m)) {
    throw ContractViolation("matrix has non-finite entries");
  }
  Svd svd(m, options);
  if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) {
    throw NumericalFailure("SVD did not converge");
  }
  return svd;
}

std::size_t count_above(const Vector& sv, double cutoff) {
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 0.0 && sv[i] >= cutoff) ++r;
  }
  return r;
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(fmt::format("{}: expected a square matrix, got {}x{}", what,
                                        m.rows(), m.cols()));
  }
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }

double asymmetry(const Matrix& m) {
  require_square(m, "asymmetry");
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return asymmetry(m) <= rel_tol * scale;
}

Matrix symmetrize(const Matrix& m) {
  require_square(m, "symmetrize");
  return 0.5 * (m + m.transpose());
}

Matrix pinv(const Matrix& m, const ToleranceConfig& tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  const Svd svd = checked_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = tol.rank_rel_tol * sv[0];
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 0.0 && sv[i] >= cutoff) inv[i] = 1.0 / sv[i];
  }
  Matrix result = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  if (!result.allFinite()) throw NumericalFailure("pseudoinverse produced non-finite entries");
  return result;
}

Matrix range_projector(const Matrix& m, const ToleranceConfig& tol) {
  require_square(m, "range_projector");
  if (!is_symmetric(m, tol.sym_tol)) {
    throw ContractViolation(
        fmt::format("range_projector: input asymmetry {} exceeds sym_tol", asymmetry(m)));
  }
  if (m.size() == 0) return Matrix(0, 0);
  // For symmetric m, pinv(m) * m = V_r V_r' where V_r spans the retained singular vectors.
  const Svd svd = checked_svd(symmetrize(m), Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const std::size_t r = count_above(sv, tol.rank_rel_tol * sv[0]);
  const auto vr = svd.matrixV().leftCols(static_cast<Eigen::Index>(r));
  return vr * vr.transpose();
}

RankInfo rank_info(const Matrix& m, const ToleranceConfig& tol) {
  RankInfo info;
  if (m.size() == 0) return info;
  const Svd svd = checked_svd(m, 0);
  const Vector& sv = svd.singularValues();
  info.sigma_max = sv[0];
  if (info.sigma_max == 0.0) return info;
  info.cutoff = tol.rank_rel_tol * info.sigma_max;
  info.rank = count_above(sv, info.cutoff);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] >= 0.1 * info.cutoff && sv[i] <= 10.0 * info.cutoff) info.near_threshold = true;
  }
  return info;
}

std::size_t numeric_rank(const Matrix& m, const ToleranceConfig& tol) {
  return rank_info(m, tol).rank;
}

bool is_spd(const Matrix& m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols() || m.size() == 0) return false;
  if (!all_finite(m) || !is_symmetric(m, tol.sym_tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(m), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return false;
  const Vector& ev = eig.eigenvalues();
  const double sigma_max = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() > tol.spd_tol * std::max(1.0, sigma_max);
}

Matrix null_space_basis(const Matrix& m, const ToleranceConfig& tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  const Svd svd = checked_svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const std::size_t r = sv[0] > 0.0 ? count_above(sv, tol.rank_rel_tol * sv[0]) : 0;
  const Eigen::Index d = n - static_cast<Eigen::Index>(r);
  if (d == 0) return Matrix(n, 0);

  const auto z = svd.matrixV().rightCols(d);
  Matrix residual = z * z.transpose();  // column j is the projection of e_j
  Matrix basis(n, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const Vector norms = residual.colwise().norm();
    const double best = norms.maxCoeff();
    Eigen::Index pick = 0;
    while (norms[pick] < best * (1.0 - 1e-12)) ++pick;
    const Vector v = residual.col(pick) / norms[pick];
    basis.col(c) = v;
    residual -= v * (v.transpose() * residual);
  }
  return basis;
}

Matrix column_space_projector(const Matrix& m, const ToleranceConfig& tol) {
  const Eigen::Index rows = m.rows();
  if (m.size() == 0) return Matrix::Zero(rows, rows);
  const Svd svd = checked_svd(m, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  const std::size_t r = sv[0] > 0.0 ? count_above(sv, tol.rank_rel_tol * sv[0]) : 0;
  const auto ur = svd.matrixU().leftCols(static_cast<Eigen::Index>(r));
  return ur * ur.transpose();
}

}  // namespace linalg
}  // namespace dmx
