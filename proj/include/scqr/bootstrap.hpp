#pragma once

// Multiplier bootstrap for the fitted process. Each replicate reweights every
// observation's contribution (estimating equation and offset accumulation alike)
// by a nonnegative draw W_i with E[W_i] = 1 and runs the identical sequential fit.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "scqr/process.hpp"
#include "scqr/see.hpp"

namespace scqr {

enum class WeightScheme { multinomial, exponential, rademacher };

WeightScheme parse_weight_scheme(const std::string& name);
const char* weight_scheme_name(WeightScheme s);

// one weight vector: multinomial counts (sum to n), Exp(1) draws, or the
// Rademacher form W_i = 1 + e_i in {0, 2}
Eigen::VectorXd generate_weights(WeightScheme scheme, Eigen::Index n, std::mt19937_64& rng);

// one weighted process fit (unit weights reproduce fit_process bit for bit)
CoefficientProcess bootstrap_fit(const CensoredDataset& data, const QuantileGrid& grid,
                                 KernelKind kernel, const SolverConfig& cfg,
                                 const Eigen::VectorXd& weights);

struct BootstrapResult {
  std::vector<Eigen::MatrixXd> replicates;  // per successful replicate: (m+1) x p
  int n_requested = 0;
  int n_failed = 0;       // non-convergent replicates, excluded above
  int n_regenerated = 0;  // weight draws rejected for zeroing out every event
};

// B replicates, deterministic per (seed, index) regardless of thread count.
// Weight vectors that give zero total weight to the uncensored observations are
// redrawn within the replicate's own stream (and counted).
BootstrapResult run_bootstrap(const CensoredDataset& data, const QuantileGrid& grid,
                              KernelKind kernel, const SolverConfig& cfg,
                              WeightScheme scheme, int B, std::uint64_t seed,
                              int n_threads = 1);

enum class CiType { percentile, pivotal, normal };

struct CiBand {
  Eigen::VectorXd lower;  // size p
  Eigen::VectorXd upper;
};

// Intervals for beta(tau) from the bootstrap replicate spread:
//   percentile  (q_{a/2}, q_{1-a/2})                 type-7 quantiles
//   pivotal     (2 bhat - q_{1-a/2}, 2 bhat - q_{a/2})
//   normal      bhat -+ z_{1-a/2} sd(replicates)
// Requires at least 20 successful replicates.
CiBand confidence_intervals(const CoefficientProcess& fit, const BootstrapResult& boot,
                            double tau, double level, CiType type);

}  // namespace scqr
