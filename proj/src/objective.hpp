#pragma once

// Internal: loss / gradient / Hessian evaluations that reuse precomputed fitted
// values xb = X beta, shared by the Newton and LAMM solvers. Not installed.

#include <Eigen/Dense>

#include "scqr/dataset.hpp"
#include "scqr/kernels.hpp"
#include "scqr/see.hpp"

namespace scqr::detail {

inline double loss_from_xb(const CensoredDataset& data, double tau0, KernelKind kernel,
                           double h, const AccumulatedOffset& offset,
                           const Eigen::VectorXd& beta, const Eigen::VectorXd& xb,
                           const Eigen::VectorXd& weights) {
  const Eigen::Index n = data.n();
  const bool weighted = weights.size() > 0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double fit = xb(i);
    double term;
    if (data.delta(i) != 0.0) {
      term = smoothed_check_loss(kernel, tau0, h, data.y(i) - fit);
    } else {
      term = -tau0 * fit;
    }
    acc += weighted ? weights(i) * term : term;
  }
  double value = acc / static_cast<double>(n);
  if (offset.v.size() > 0) value -= offset.v.dot(beta);
  return value;
}

inline Eigen::VectorXd grad_from_xb(const CensoredDataset& data, double tau0, KernelKind kernel,
                                    double h, const AccumulatedOffset& offset,
                                    const Eigen::VectorXd& xb, const Eigen::VectorXd& weights) {
  const Eigen::Index n = data.n();
  const bool weighted = weights.size() > 0;
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double ci = -tau0;
    if (data.delta(i) != 0.0) ci += kernel_cdf(kernel, (xb(i) - data.y(i)) / h);
    c(i) = weighted ? weights(i) * ci : ci;
  }
  Eigen::VectorXd g = (data.X.transpose() * c) / static_cast<double>(n);
  if (offset.v.size() > 0) g -= offset.v;
  return g;
}

inline Eigen::MatrixXd hessian_from_xb(const CensoredDataset& data, KernelKind kernel, double h,
                                       const Eigen::VectorXd& xb,
                                       const Eigen::VectorXd& weights) {
  const Eigen::Index n = data.n();
  const bool weighted = weights.size() > 0;
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double di = 0.0;
    if (data.delta(i) != 0.0) di = kernel_density(kernel, (data.y(i) - xb(i)) / h) / h;
    d(i) = weighted ? weights(i) * di : di;
  }
  Eigen::MatrixXd H(data.p(), data.p());
  H.noalias() = data.X.transpose() * d.asDiagonal() * data.X;
  H /= static_cast<double>(n);
  return H;
}

}  // namespace scqr::detail
