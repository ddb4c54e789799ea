#pragma once

// Fitted coefficient process: one coefficient vector per grid point, extended to
// all of [tau_0, tau_m] as a right-continuous step function.

#include <Eigen/Dense>

#include "scqr/grid.hpp"

namespace scqr {

struct CoefficientProcess {
  QuantileGrid grid;
  Eigen::MatrixXd betas;  // (m+1) x p, row k = beta(tau_k)

  Eigen::Index p() const { return betas.cols(); }

  // beta(tau) for tau in [tau_0, tau_m]: constant on [tau_k, tau_{k+1}), i.e.
  // eval(tau) = row k for tau in [tau_k, tau_{k+1}). Out-of-range tau throws.
  Eigen::VectorXd eval(double tau) const;
};

}  // namespace scqr
