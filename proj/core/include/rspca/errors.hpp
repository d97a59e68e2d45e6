#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rspca {

/// Malformed or out-of-contract input (bad shape, non-finite value, parse failure).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative kernel ran out of iterations. Carries the last iterate so
/// callers can decide whether it is good enough.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate, double residual)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

  const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }

 private:
  Eigen::VectorXd last_iterate_;
  double residual_;
};

/// Problem too large for an exhaustive routine.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rspca
