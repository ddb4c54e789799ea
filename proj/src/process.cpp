#include "scqr/process.hpp"

namespace scqr {

Eigen::VectorXd CoefficientProcess::eval(double tau) const {
  return betas.row(grid.locate(tau)).transpose();
}

}  // namespace scqr
