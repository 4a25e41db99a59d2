#pragma once

#include <stdexcept>
#include <string>

namespace vssd {

/// Bad or inconsistent configuration (unknown key, invalid value, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Newton (or scalar root-find) failed to converge.
struct SolverError : std::runtime_error {
  double residual_norm;
  explicit SolverError(const std::string& msg, double residual = 0.0)
      : std::runtime_error(msg), residual_norm(residual) {}
};

/// The constraint Jacobian is singular (distinct from plain nonconvergence).
struct SingularJacobianError : SolverError {
  explicit SingularJacobianError(const std::string& msg)
      : SolverError(msg, 0.0) {}
};

/// Overflow, NaN, or a runaway state norm.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vssd
