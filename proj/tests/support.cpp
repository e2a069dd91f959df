#include "support.hpp"

#include <cmath>

namespace dmx::testing {

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  }
  return m;
}

Matrix random_spd(Rng& rng, Eigen::Index n) {
  const Matrix a = random_matrix(rng, n, n);
  return a * a.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n);
}

Matrix random_rank(Rng& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index rank) {
  if (rank == 0) return Matrix::Zero(rows, cols);
  return random_matrix(rng, rows, rank) * random_matrix(rng, rank, cols);
}

Matrix random_conditioned(Rng& rng, Eigen::Index rows, Eigen::Index cols, double cond) {
  const Eigen::Index k = std::min(rows, cols);
  Eigen::HouseholderQR<Matrix> qu(random_matrix(rng, rows, rows));
  Eigen::HouseholderQR<Matrix> qv(random_matrix(rng, cols, cols));
  const Matrix U = qu.householderQ();
  const Matrix V = qv.householderQ();
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Matrix s = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < k; ++i) {
    s(i, i) = i == 0 ? 1.0 : (i == k - 1 ? 1.0 / cond : std::pow(cond, -ud(rng)));
  }
  return U * s * V.transpose();
}

RandomModelShape random_shape(Rng& rng, std::size_t n_max, std::size_t p_max, std::size_t N_max) {
  std::uniform_int_distribution<std::size_t> nd(1, n_max), pd(1, p_max), Nd(1, N_max);
  RandomModelShape s;
  s.n = nd(rng);
  s.m = std::uniform_int_distribution<std::size_t>(1, s.n)(rng);
  s.p = pd(rng);
  s.horizon = Nd(rng);
  return s;
}

DiscreteDescriptorModel random_model(Rng& rng, const RandomModelShape& requested, StackRank stack) {
  RandomModelShape shape = requested;
  if (stack == StackRank::full && shape.m + shape.p < shape.n) shape.p = shape.n - shape.m;
  const auto n = static_cast<Eigen::Index>(shape.n);
  const auto m = static_cast<Eigen::Index>(shape.m);
  const auto p = static_cast<Eigen::Index>(shape.p);
  DiscreteDescriptorModel model;
  model.n = shape.n;
  model.m = shape.m;
  model.p = shape.p;
  model.horizon = shape.horizon;
  for (std::size_t k = 0; k <= shape.horizon; ++k) {
    Matrix F, H;
    for (;;) {
      if (stack == StackRank::deficient_F) {
        std::uniform_int_distribution<Eigen::Index> rd(0, std::min(m, n) - 1);
        F = random_rank(rng, m, n, rd(rng));
      } else {
        F = random_matrix(rng, m, n);
      }
      H = random_matrix(rng, p, n);
      if (stack != StackRank::full) break;
      Matrix stacked(m + p, n);
      stacked << F, H;
      const Vector sv = Eigen::JacobiSVD<Matrix>(stacked).singularValues();
      if (sv[sv.size() - 1] >= kFullStackConditioning * sv[0]) break;
    }
    model.F.push_back(F);
    model.H.push_back(H);
    model.R_seq.push_back(random_spd(rng, p));
    if (k < shape.horizon) {
      model.C.push_back(0.5 * random_matrix(rng, m, n));
      model.S_seq.push_back(random_spd(rng, m));
    }
  }
  model.S = random_spd(rng, m);
  return model;
}

Simulated simulate(const DiscreteDescriptorModel& model, std::uint64_t seed, double margin) {
  Simulated s;
  s.d = sample_disturbance(model, seed, margin);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> nd;
  // Free coordinates drawn from the same seed so the run is reproducible.
  FreeSchedule free = [&rng, &nd, &model](std::size_t k, const Vector&) {
    const std::size_t dim = linalg::null_space_basis(model.F[k]).cols();
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 3.0 * nd(rng);
    return v;
  };
  s.traj = propagate(model, s.d, free);
  return s;
}

}  // namespace dmx::testing
