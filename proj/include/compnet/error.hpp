#pragma once

#include <stdexcept>
#include <string>

namespace compnet {

/// Input that violates a documented precondition (negative counts, empty
/// matrices, malformed CSV rows, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of iterations. Carries the last residual so
/// callers can decide whether to retry with different settings.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, std::size_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

}  // namespace compnet
