#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace dmx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cutoffs that stand in for exact arithmetic.
///
/// Singular values below `rank_rel_tol * sigma_max` are treated as zero,
/// symmetry is checked as max|M - M'| <= sym_tol * max(1, max|M|), and a matrix
/// is SPD when every eigenvalue exceeds spd_tol * max(1, sigma_max).
struct ToleranceConfig {
  double rank_rel_tol = 1e-10;
  double sym_tol = 1e-8;
  double spd_tol = 1e-12;

  /// Throws ContractViolation unless every field lies in (0, 1).
  void validate() const;

  /// Defaults, with rank_rel_tol taken from DMX_RANK_TOL when it is set.
  static ToleranceConfig from_environment();
};

namespace linalg {

bool all_finite(const Matrix& m);

/// max |m - m'|. m must be square.
double asymmetry(const Matrix& m);
bool is_symmetric(const Matrix& m, double rel_tol);
Matrix symmetrize(const Matrix& m);

/// Moore-Penrose pseudoinverse from a full SVD with a relative cutoff.
Matrix pinv(const Matrix& m, const ToleranceConfig& tol = {});

/// Orthogonal projector onto the range of a symmetric matrix (pinv(m) * m).
Matrix range_projector(const Matrix& m, const ToleranceConfig& tol = {});

std::size_t numeric_rank(const Matrix& m, const ToleranceConfig& tol = {});

bool is_spd(const Matrix& m, const ToleranceConfig& tol = {});

struct RankInfo {
  std::size_t rank = 0;
  double sigma_max = 0.0;
  double cutoff = 0.0;
  // Some singular value lies within a factor 10 of the cutoff.
  bool near_threshold = false;
};

RankInfo rank_info(const Matrix& m, const ToleranceConfig& tol = {});

/// Orthonormal basis of N(m), one column per free direction.
///
/// The basis is canonical: columns are obtained by pivoted Gram-Schmidt on the
/// projections of e_1..e_n onto the null space, so a coordinate-aligned null
/// space yields exactly those unit vectors, in index order, with positive sign.
Matrix null_space_basis(const Matrix& m, const ToleranceConfig& tol = {});

/// Orthogonal projector onto the range of an arbitrary (rectangular) m.
Matrix column_space_projector(const Matrix& m, const ToleranceConfig& tol = {});

}  // namespace linalg
}  // namespace dmx
