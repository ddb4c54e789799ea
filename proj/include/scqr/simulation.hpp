#pragma once

// Synthetic data generators matching the benchmark designs: t_2 errors entering
// a global linear quantile model, AR(0.5) or mixed-block covariates, and a
// three-component normal mixture censoring distribution.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "scqr/dataset.hpp"
#include "scqr/process.hpp"

namespace scqr {

enum class ModelKind { homoscedastic, heteroscedastic };
enum class CovariateScheme { gaussian_ar, mixed_blocks };
enum class CensoringKind { none, mixture };

struct SimDesign {
  ModelKind model = ModelKind::homoscedastic;
  Eigen::Index n = 100;
  Eigen::Index p = 10;  // number of covariates (design adds the intercept)
  CovariateScheme covariates = CovariateScheme::gaussian_ar;
  Eigen::Index sparsity = 0;  // 0 = dense gamma ~ U(-2,2); s > 0 = gamma_j ~ U(1,1.5), j <= s
  CensoringKind censoring = CensoringKind::mixture;
  std::uint64_t seed = 1;
};

// Quantile function of the t distribution with 2 degrees of freedom:
// Q(tau) = alpha sqrt(2/(1 - alpha^2)), alpha = 2 tau - 1.
double t2_quantile(double tau);

// The generating coefficient process beta*(tau).
struct TrueProcess {
  ModelKind model;
  Eigen::VectorXd gamma;  // covariate effects (gamma[0] unused under heteroscedastic)

  Eigen::VectorXd beta_star(double tau) const;
  Eigen::MatrixXd on_grid(const QuantileGrid& grid) const;  // (m+1) x (p+1)
  std::vector<Eigen::Index> support() const;  // nonzero non-intercept coordinates (design indexing)
};

struct SimData {
  CensoredDataset data;
  TrueProcess truth;
  double censoring_rate = 0.0;
  bool covariate_fallback = false;  // mixed_blocks requested with p != 100
};

SimData gen_dataset(const SimDesign& design);

struct SelectionMetrics {
  double tpr = 0.0;     // |S cap Shat| / |S|
  double fdr = 0.0;     // |Shat minus S| / |Shat|, 0 when Shat empty
  double avg_l2 = 0.0;  // mean_k ||beta_k - beta*_k||_2
  double sup_l2 = 0.0;  // max_k
};

SelectionMetrics metrics(const CoefficientProcess& fit, const Eigen::MatrixXd& truth_on_grid,
                         const std::vector<Eigen::Index>& true_support,
                         const std::vector<Eigen::Index>& est_support);

}  // namespace scqr
