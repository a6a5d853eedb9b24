#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace donaldson {

/// Base of every numerical failure raised by the library. API misuse
/// (wrong degree, mismatched grids) raises std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// min(u) fell to or below the floor: the form left the space of
/// positively oriented symplectic forms.
class DegenerateStateError : public NumericalError {
public:
  DegenerateStateError(const std::string& what, double min_u)
      : NumericalError(what), min_u_(min_u) {}
  double min_u() const { return min_u_; }

private:
  double min_u_;
};

/// An input that must be an exact form is not (closedness or harmonic part).
class NotExactError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class SolverError : public NumericalError {
public:
  SolverError(const std::string& what, std::vector<double> history)
      : NumericalError(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

private:
  std::vector<double> history_;
};

}  // namespace donaldson
