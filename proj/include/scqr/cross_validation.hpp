#pragma once

// K-fold cross-validation for the penalty level lambda0, scored by censored
// deviance residuals of the fitted process on the held-out fold.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "scqr/dataset.hpp"
#include "scqr/penalized.hpp"
#include "scqr/process.hpp"

namespace scqr {

struct CvConfig {
  int folds = 3;
  Eigen::VectorXd lambda0_grid;  // empty -> 50 evenly spaced candidates on [0.01, 0.2]
  std::uint64_t seed = 0;
  int n_threads = 1;
  LammConfig lamm;
};

Eigen::VectorXd default_lambda0_grid(int count = 50, double lo = 0.01, double hi = 0.2);

// Martingale residual of one observation at grid point k:
//   M_i(tau_k) = 1{y_i <= x_i'beta(tau_k), delta_i = 1}
//                - sum_{j<k} 1{y_i >= x_i'beta(tau_j)} deltaH[j] - tau_0.
double martingale_residual(double y, double delta, const Eigen::VectorXd& x,
                           const CoefficientProcess& proc, Eigen::Index k);

// Mean deviance residual over observations and grid points,
//   sqrt(-2 {M + delta log(delta - M)}),
// with 0 log 0 = 0 for censored rows, the radicand clamped at zero, and
// delta - M floored at 1e-10 before the log.
double deviance(const CensoredDataset& fold, const CoefficientProcess& proc);

struct CvResult {
  double lambda0 = 0.0;  // winner (ties -> smaller lambda0)
  int winner_index = -1;
  Eigen::VectorXd candidates;
  Eigen::VectorXd mean_score;  // +inf where any fold failed to converge
  Eigen::VectorXd sd_score;
  std::vector<Eigen::Index> fold_sizes;
};

// Folds are contiguous blocks of a seeded permutation (sizes differ by at most
// one). Within each fold the candidates are swept from the largest lambda0 down
// with warm starts; folds run in parallel.
CvResult cv_select_lambda0(const CensoredDataset& data, const QuantileGrid& grid,
                           KernelKind kernel, double h, const PenaltyConfig& penalty,
                           const CvConfig& cfg);

}  // namespace scqr
