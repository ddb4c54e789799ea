#pragma once

// Right-censored regression data. y_i = min(z_i, c_i), delta_i = 1{z_i <= c_i};
// the design matrix carries the intercept as its first column.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "scqr/errors.hpp"

namespace scqr {

struct CensoredDataset {
  Eigen::VectorXd y;      // observed (possibly censored) responses, size n
  Eigen::VectorXd delta;  // event indicators in {0, 1}, size n
  Eigen::MatrixXd X;      // n x p design, X.col(0) == 1

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return X.cols(); }

  Eigen::Index n_events() const { return static_cast<Eigen::Index>(delta.sum()); }
  double censoring_rate() const { return 1.0 - delta.mean(); }
};

// Checks the invariants (sizes agree, n >= 2, p >= 2, delta in {0,1}, unit
// intercept column, all finite). Throws DataError with a specific message.
void validate(const CensoredDataset& data);

// Rows of `data` at the given indices (used for CV folds and bootstrap checks).
CensoredDataset subset(const CensoredDataset& data, const std::vector<Eigen::Index>& rows);

}  // namespace scqr
