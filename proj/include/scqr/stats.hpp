#pragma once

// Small statistical utilities shared across modules.

#include <Eigen/Dense>

namespace scqr {

// Type-7 sample quantile (the R default): linear interpolation of the order
// statistics at position (n-1)p. `sorted` must be ascending.
double quantile_type7_sorted(const Eigen::VectorXd& sorted, double prob);

// Convenience: copies, sorts, interpolates.
double quantile_type7(const Eigen::VectorXd& values, double prob);

// Inverse standard normal CDF (Wichura's AS241-style rational approximation,
// relative error below 1e-15 on (0, 1)).
double normal_quantile(double prob);

}  // namespace scqr
