#include <cmath>

#include "dmx/descriptor_model.hpp"
#include "dmx/errors.hpp"

namespace dmx {
namespace {

Matrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v.asDiagonal();
}

Matrix section3_observation(std::size_t step) {
  const double k = static_cast<double>(step);
  const bool first = step == 0;
  const double h1 = first ? 0.6 : 0.6 * k;
  const double h2 = first ? 0.96 : k;
  const double h3 = step % 2 == 1 ? 150.0 * k : 0.0;
  const double h4 = first ? 1000.0 : 100.0 * k;
  const double h5 = first ? 2.3 : k / 100.0;
  const double h6 = first ? 0.0 : 0.05;
  const double h7 = first ? 0.0 : 10.0 * k;
  const double h8 = first ? 1.0 : 0.0;
  Matrix H(4, 3);
  H << h1, h2, 0.0,
       h4, h5, 0.0,
       h8, 0.005, h3,
       h6, h7, 0.0;
  return H;
}

}  // namespace

double section3_third_component(std::size_t k) {
  return 3.0 * std::cos(0.4 * static_cast<double>(k));
}

Scenario builtin_section3(std::size_t horizon) {
  DiscreteDescriptorModel model;
  model.n = 3;
  model.m = 2;
  model.p = 4;
  model.horizon = horizon;
  model.S = diag({1.0 / 60.0, 1.0 / 120.0});

  Matrix C(2, 3);
  C << 1.0 / 40.0, 0.5, 0.0,
       0.1, 0.25, 0.3;
  for (std::size_t k = 0; k <= horizon; ++k) {
    const double kk = static_cast<double>(k);
    Matrix F(2, 3);
    F << 1.0, 0.0, 0.0,
         0.0, kk, 0.0;
    model.F.push_back(F);
    model.H.push_back(section3_observation(k));
    model.R_seq.push_back(diag({1.0 / 11.0, 1.0 / 22.0, 1.0 / 33.0, 1.0 / 44.0}) / (kk + 1.0));
    if (k < horizon) {
      model.C.push_back(C);
      model.S_seq.push_back(diag({1.0 / (35.0 * (kk + 1.0)), 1.0 / (70.0 * (kk + 1.0))}));
    }
  }

  // N(F_0) = span(e2, e3) fixes x_{2,0} and x_{3,0}; afterwards N(F_k) = span(e3).
  Scenario scenario;
  scenario.free = [](std::size_t step, const Vector&) -> Vector {
    if (step == 0) return Vector{{-3.0, section3_third_component(0)}};
    return Vector{{section3_third_component(step)}};
  };
  const Vector x0{{1.0, -3.0, section3_third_component(0)}};
  scenario.q = model.F[0] * x0;
  scenario.model = std::move(model);
  return scenario;
}

double scalar_example_c(std::size_t) { return 0.9; }

double scalar_example_h(std::size_t k) {
  return 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(k));
}

Scenario builtin_scalar_example(std::size_t horizon) {
  DiscreteDescriptorModel model;
  model.n = 2;
  model.m = 1;
  model.p = 1;
  model.horizon = horizon;
  model.S = Matrix::Constant(1, 1, 2.0);
  const Matrix F{{1.0, 0.0}};
  for (std::size_t k = 0; k <= horizon; ++k) {
    model.F.push_back(F);
    model.H.push_back(Matrix{{scalar_example_h(k), 0.0}});
    model.R_seq.push_back(Matrix::Constant(1, 1, 1.0));
    if (k < horizon) {
      model.C.push_back(Matrix{{scalar_example_c(k), 1.0}});
      model.S_seq.push_back(Matrix::Constant(1, 1, 4.0));
    }
  }
  Scenario scenario;
  scenario.model = std::move(model);
  // z_{2,k} = v_k(z_{1,k}) carries the nonlinearity of the scalar system.
  scenario.free = [](std::size_t, const Vector& determined) -> Vector {
    return Vector{{0.3 * std::sin(determined[0])}};
  };
  return scenario;
}

}  // namespace dmx
