#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dmx {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A factorization or inversion did not produce a usable result.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (shape, symmetry, range).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// The determined part of F x = rhs has a residual above tolerance.
class InfeasibleStep : public Error {
 public:
  InfeasibleStep(std::size_t step, const std::string& what)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// rank([F_k; H_k]) < n where the full-rank recursion needs it.
class RankPrecondition : public Error {
 public:
  RankPrecondition(std::size_t step, const std::string& what)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class DegenerateModel : public Error {
 public:
  using Error::Error;
};

/// M(t) or G(t) came out asymmetric: the model is outside the filter's assumptions.
class CoefficientAssembly : public Error {
 public:
  using Error::Error;
};

class FiniteEscape : public Error {
 public:
  FiniteEscape(double time, const std::string& what) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Malformed input document or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dmx
