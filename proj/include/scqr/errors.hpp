#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>

namespace scqr {

// Malformed input: bad CSV, invalid grid, impossible configuration. CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Solver failed to reach the gradient tolerance. Carries the last iterate so a
// caller can inspect or report it. CLI exit code 3.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd last, double grad_inf_norm,
                 double tau = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what),
        last_iterate(std::move(last)),
        grad_inf(grad_inf_norm),
        tau(tau) {}

  Eigen::VectorXd last_iterate;
  double grad_inf;
  double tau;
};

}  // namespace scqr
