#pragma once

// Sequential smoothed estimating equations for the censored quantile process.
//
// Step k solves Q_k(beta) = 0, where
//
//   Q_k(beta) = (1/n) sum_i w_i { delta_i Kbar_h(x_i'beta - y_i) - tau_0 } x_i - v_k,
//   v_k       = (1/n) sum_i w_i sum_{j<k} Kbar_h(y_i - x_i'beta_j) deltaH[j] x_i.
//
// Q_k is the gradient of the convex objective
//
//   L_k(beta) = (1/n) sum_i w_i { delta_i l_{tau0,h}(y_i - x_i'beta)
//                                 + tau_0 (delta_i - 1) x_i'beta } - <v_k, beta>,
//
// so each step is a smooth convex minimization; v_k accumulates one new term per
// grid point (the observation weights w_i are 1 for a plain fit and a multiplier
// vector for bootstrap draws). The Hessian does not depend on k.

#include <Eigen/Dense>
#include <vector>

#include "scqr/dataset.hpp"
#include "scqr/grid.hpp"
#include "scqr/kernels.hpp"
#include "scqr/process.hpp"

namespace scqr {

enum class BandwidthRule { explicit_value, low_dim, high_dim };

struct SolverConfig {
  double grad_tol = 1e-7;    // stop when ||Q_k||_inf <= grad_tol
  int max_iter = 500;        // Newton iterations per grid point
  double ridge_rel = 1e-6;   // Hessian ridge: ridge_rel * trace(H)/p
  BandwidthRule bandwidth_rule = BandwidthRule::low_dim;
  double bandwidth = 0.0;    // used with BandwidthRule::explicit_value
};

// h = max{0.05, ((p + log n)/n)^{2/5}}  (low-dimensional default)
// h = max{0.05, 0.5 (log p / n)^{1/4}}  (high-dimensional default)
double resolve_bandwidth(const SolverConfig& cfg, Eigen::Index n, Eigen::Index p);

// Running value of v_k above; add_step folds in the term for one fitted beta_j.
struct AccumulatedOffset {
  Eigen::VectorXd v;
  int steps = 0;

  void reset(Eigen::Index p) { v = Eigen::VectorXd::Zero(p); steps = 0; }

  void add_step(const CensoredDataset& data, KernelKind kernel, double h,
                const Eigen::VectorXd& beta, double dH,
                const Eigen::VectorXd& weights = Eigen::VectorXd());
};

// L_k at beta (offset.v empty or zero gives L_0)
double loss_k(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
              const AccumulatedOffset& offset, const Eigen::VectorXd& beta,
              const Eigen::VectorXd& weights = Eigen::VectorXd());

// convenience wrapper for the first grid point
double loss0(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
             const Eigen::VectorXd& beta, const Eigen::VectorXd& weights = Eigen::VectorXd());

// Q_k(beta)
Eigen::VectorXd gradient_k(const CensoredDataset& data, double tau0, KernelKind kernel,
                           double h, const AccumulatedOffset& offset,
                           const Eigen::VectorXd& beta,
                           const Eigen::VectorXd& weights = Eigen::VectorXd());

// (1/n) sum_i w_i delta_i K_h(y_i - x_i'beta) x_i x_i'  (identical for every k)
Eigen::MatrixXd hessian(const CensoredDataset& data, KernelKind kernel, double h,
                        const Eigen::VectorXd& beta,
                        const Eigen::VectorXd& weights = Eigen::VectorXd());

struct StepResult {
  Eigen::VectorXd beta;
  int iterations = 0;
  double grad_inf = 0.0;
  bool converged = false;
  std::vector<double> loss_trace;  // filled when SolveOptions::track_loss
};

struct SolveOptions {
  bool track_loss = false;
  bool throw_on_failure = true;  // bootstrap turns this off and flags the replicate
};

// Damped Newton with Armijo backtracking on L_k; falls back to the gradient
// direction if the (ridged) Newton system is not a descent direction.
StepResult solve_step(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
                      const AccumulatedOffset& offset, const Eigen::VectorXd& beta_init,
                      const SolverConfig& cfg,
                      const Eigen::VectorXd& weights = Eigen::VectorXd(),
                      const SolveOptions& opts = SolveOptions());

struct FitStats {
  // mass of censored observations at or below the fitted tau_L plane -- the
  // "no censoring below the lowest quantile" assumption is suspect when large
  double censored_below_tau_min = 0.0;
  int total_iterations = 0;
  double max_grad_inf = 0.0;  // worst ||Q_k(beta_k)||_inf over the grid
};

// Full process fit: solves the grid left to right, warm-starting each step at the
// previous solution; the first step starts from least squares on the uncensored
// rows. Throws NonConvergence (annotated with the failing tau_k) if any step fails.
CoefficientProcess fit_process(const CensoredDataset& data, const QuantileGrid& grid,
                               KernelKind kernel, const SolverConfig& cfg,
                               FitStats* stats = nullptr);

// Same procedure with per-observation multiplier weights (see bootstrap.hpp);
// unit weights reproduce fit_process exactly.
CoefficientProcess fit_process_weighted(const CensoredDataset& data, const QuantileGrid& grid,
                                        KernelKind kernel, const SolverConfig& cfg,
                                        const Eigen::VectorXd& weights,
                                        FitStats* stats = nullptr);

}  // namespace scqr
