#pragma once

// Penalized sequential fits for high-dimensional designs: at grid point k,
// minimize L_k(beta) + lambda_k sum_j w_j |beta_j| by LAMM (local adaptive
// majorize-minimize), with folded-concave penalties handled by LLA reweighting
// around a lasso pilot. The intercept is never penalized.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "scqr/process.hpp"
#include "scqr/see.hpp"

namespace scqr {

enum class PenaltyKind { lasso, adaptive_lasso, scad, mcp };

PenaltyKind parse_penalty(const std::string& name);
const char* penalty_name(PenaltyKind k);

struct PenaltyConfig {
  PenaltyKind kind = PenaltyKind::lasso;
  double a = 3.7;     // concavity parameter; 3.7 for SCAD, 3.0 for MCP
  int lla_steps = 1;  // reweighting passes after the lasso pilot
};

inline double default_concavity(PenaltyKind k) { return k == PenaltyKind::mcp ? 3.0 : 3.7; }

// lambda_k = {1 + log((1 - tau_L)/(1 - tau_k))} lambda0: the level-dependent
// inflation that keeps the penalty in step with the accumulating hazard.
Eigen::VectorXd lambda_sequence(double lambda0, const QuantileGrid& grid);

// Derivative-based LLA weight at u = |beta_j| / lambda:
//   lasso           1
//   adaptive lasso  min(1, 1/(u + 1e-6))
//   scad            1{u <= 1} + (a - u)_+ / (a - 1) 1{u > 1}
//   mcp             (1 - u/a)_+
double penalty_weight(PenaltyKind kind, double u, double a);

struct LammConfig {
  double tol = 1e-5;        // stop when ||beta_{t+1} - beta_t||_inf <= tol
  int max_iter = 500;
  double phi_growth = 2.0;  // isotropic curvature doubling until majorization holds
  double phi_shrink = 1.1;  // relaxation toward phi0 between iterations
};

struct LammResult {
  Eigen::VectorXd beta;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // penalized objective per accepted iterate
};

// One penalized solve at fixed level: weights w (size p, w[0] ignored and treated
// as 0) scale the coordinatewise soft-threshold.
LammResult lamm_solve(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
                      const AccumulatedOffset& offset, double lambda,
                      const Eigen::VectorXd& penalty_weights, const Eigen::VectorXd& beta_init,
                      const LammConfig& cfg = LammConfig(), bool track_objective = false);

struct PenalizedFit {
  CoefficientProcess process;
  Eigen::VectorXd lambdas;                        // lambda_k per grid point
  std::vector<std::vector<Eigen::Index>> supports;  // nonzero coordinates per grid point
  std::vector<Eigen::Index> union_support;          // sorted union over the grid
  std::vector<Eigen::VectorXd> penalty_weights;     // effective weights of the final
                                                    // solve per grid point (entry 0 is 0)
};

// Sequential penalized fit over the grid: lasso pilot plus lla_steps reweighted
// solves per grid point, warm starts along the grid, offset maintained exactly as
// in the unpenalized path.
PenalizedFit fit_penalized_process(const CensoredDataset& data, const QuantileGrid& grid,
                                   KernelKind kernel, double h, const PenaltyConfig& penalty,
                                   double lambda0, const LammConfig& lamm = LammConfig());

// As above, but the first grid point starts from *warm_start instead of the
// marginal-quantile initializer (used by the CV sweep over lambda0 candidates).
PenalizedFit fit_penalized_process_warm(const CensoredDataset& data, const QuantileGrid& grid,
                                        KernelKind kernel, double h,
                                        const PenaltyConfig& penalty, double lambda0,
                                        const LammConfig& lamm,
                                        const Eigen::VectorXd* warm_start);

// Unpenalized refit restricted to `support` (intercept always included); the
// returned rows live in the full p-dimensional space with zeros off-support.
CoefficientProcess refit_on_support(const CensoredDataset& data, const QuantileGrid& grid,
                                    KernelKind kernel, const SolverConfig& cfg,
                                    const std::vector<Eigen::Index>& support);

}  // namespace scqr
