#pragma once

#include <stdexcept>
#include <string>

namespace navslip {

/// Violated precondition or malformed input.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative solve stopped without reaching its tolerance.
class SolverDivergence : public std::runtime_error {
 public:
  SolverDivergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Density dropped to or below the vacuum floor; the run has left the
/// regime where a smooth solution is known to exist.
class PositivityViolation : public std::runtime_error {
 public:
  PositivityViolation(const std::string& what, double min_density)
      : std::runtime_error(what), min_density_(min_density) {}

  double min_density() const noexcept { return min_density_; }

 private:
  double min_density_;
};

/// An experiment could not produce a report.
class ExperimentFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value about to be written is NaN or infinite.
class NonFiniteOutput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace navslip
