#pragma once

// Quantile grid tau_L = tau_0 < ... < tau_m = tau_U together with the increments
// of the cumulative-hazard transform H(u) = -log(1 - u):
//
//   deltaH[j] = H(tau_{j+1}) - H(tau_j) = log((1 - tau_j) / (1 - tau_{j+1})).

#include <Eigen/Dense>
#include <vector>

#include "scqr/errors.hpp"

namespace scqr {

inline double hazard_transform(double u) { return -std::log1p(-u); }

class QuantileGrid {
 public:
  QuantileGrid() = default;

  // taus must be strictly increasing inside (0, 1); a single point is allowed (m = 0).
  explicit QuantileGrid(std::vector<double> taus);

  const Eigen::VectorXd& taus() const { return taus_; }
  const Eigen::VectorXd& deltaH() const { return dH_; }

  Eigen::Index size() const { return taus_.size(); }        // m + 1 grid points
  double tau_min() const { return taus_(0); }
  double tau_max() const { return taus_(taus_.size() - 1); }

  // coarsest / finest grid spacing in tau (resolution diagnostics)
  double max_spacing() const;
  double min_spacing() const;

  // index k of the interval [tau_k, tau_{k+1}) containing tau; tau_m maps to m.
  // Out-of-range tau throws.
  Eigen::Index locate(double tau) const;

 private:
  Eigen::VectorXd taus_;
  Eigen::VectorXd dH_;  // size m
};

// Uniform grid from tau_min to tau_max with the given step; the final interval is
// shortened if the step does not divide the range, so tau_max is always hit exactly.
QuantileGrid make_uniform_grid(double tau_min, double tau_max, double step);

}  // namespace scqr
