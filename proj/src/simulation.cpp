#include "scqr/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "scqr/kernels.hpp"
#include "scqr/rng.hpp"

namespace scqr {

double t2_quantile(double tau) {
  const double alpha = 2.0 * tau - 1.0;
  return alpha * std::sqrt(2.0 / (1.0 - alpha * alpha));
}

Eigen::VectorXd TrueProcess::beta_star(double tau) const {
  const Eigen::Index p = gamma.size();
  Eigen::VectorXd beta(p + 1);
  const double q = t2_quantile(tau);
  if (model == ModelKind::homoscedastic) {
    beta(0) = q;
    beta.tail(p) = gamma;
  } else {
    beta(0) = 0.0;
    beta(1) = q;  // the |x_1| coordinate carries the error quantile
    for (Eigen::Index j = 2; j <= p; ++j) beta(j) = gamma(j - 1);
  }
  return beta;
}

Eigen::MatrixXd TrueProcess::on_grid(const QuantileGrid& grid) const {
  Eigen::MatrixXd out(grid.size(), gamma.size() + 1);
  for (Eigen::Index k = 0; k < grid.size(); ++k)
    out.row(k) = beta_star(grid.taus()(k)).transpose();
  return out;
}

std::vector<Eigen::Index> TrueProcess::support() const {
  std::vector<Eigen::Index> s;
  if (model == ModelKind::heteroscedastic) {
    s.push_back(1);
    for (Eigen::Index j = 2; j <= gamma.size(); ++j)
      if (gamma(j - 1) != 0.0) s.push_back(j);
  } else {
    for (Eigen::Index j = 1; j <= gamma.size(); ++j)
      if (gamma(j - 1) != 0.0) s.push_back(j);
  }
  return s;
}

namespace {

// stationary AR(1) chain with unit variance and correlation 0.5^{|j-k|}
void fill_ar_row(Eigen::Ref<Eigen::RowVectorXd> row, std::mt19937_64& rng,
                 std::normal_distribution<double>& gauss) {
  const Eigen::Index p = row.size();
  if (p == 0) return;
  row(0) = gauss(rng);
  const double rho = 0.5;
  const double scale = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index j = 1; j < p; ++j) row(j) = rho * row(j - 1) + scale * gauss(rng);
}

}  // namespace

SimData gen_dataset(const SimDesign& design) {
  const Eigen::Index n = design.n;
  const Eigen::Index p = design.p;
  if (n < 2 || p < 1) throw DataError("simulation design: need n >= 2 and p >= 1");
  if (design.sparsity > p) throw DataError("simulation design: sparsity exceeds p");
  if (design.model == ModelKind::heteroscedastic && design.sparsity > 0 && p < 2)
    throw DataError("simulation design: heteroscedastic sparse model needs p >= 2");

  CovariateScheme scheme = design.covariates;
  bool fallback = false;
  if (scheme == CovariateScheme::mixed_blocks && p != 100) {
    // the block design is pinned to p = 100; anything else degrades gracefully
    scheme = CovariateScheme::gaussian_ar;
    fallback = true;
  }

  std::mt19937_64 rng = make_stream(design.seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);

  // covariate effects
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(p);
  if (design.sparsity == 0) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (Eigen::Index j = 0; j < p; ++j) gamma(j) = u(rng);
  } else {
    std::uniform_real_distribution<double> u(1.0, 1.5);
    if (design.model == ModelKind::homoscedastic) {
      for (Eigen::Index j = 0; j < design.sparsity; ++j) gamma(j) = u(rng);
    } else {
      for (Eigen::Index j = 1; j <= design.sparsity; ++j) gamma(j) = u(rng);
    }
  }
  if (design.model == ModelKind::heteroscedastic) gamma(0) = 0.0;

  SimData out;
  out.covariate_fallback = fallback;
  out.truth.model = design.model;
  out.truth.gamma = gamma;
  out.data.y.resize(n);
  out.data.delta.resize(n);
  out.data.X.resize(n, p + 1);

  Eigen::RowVectorXd xt(p);
  std::uniform_int_distribution<int> comp(0, 2);
  const double mix_mean[3] = {0.0, 5.0, 10.0};
  const double mix_sd[3] = {4.0, 1.0, 0.5};

  for (Eigen::Index i = 0; i < n; ++i) {
    if (scheme == CovariateScheme::gaussian_ar) {
      fill_ar_row(xt, rng, gauss);
    } else {
      // 45 AR-normal, 45 correlated uniform on [-2, 2] (Gaussian copula),
      // 10 Bernoulli(1/2)
      fill_ar_row(xt.segment(0, 45), rng, gauss);
      fill_ar_row(xt.segment(45, 45), rng, gauss);
      for (Eigen::Index j = 45; j < 90; ++j)
        xt(j) = 4.0 * kernel_cdf(KernelKind::gaussian, xt(j)) - 2.0;
      std::bernoulli_distribution coin(0.5);
      for (Eigen::Index j = 90; j < 100; ++j) xt(j) = coin(rng) ? 1.0 : 0.0;
    }

    const double u = std::min(std::max(unif01(rng), 1e-16), 1.0 - 1e-16);
    const double eps = t2_quantile(u);

    const double xg = xt.dot(gamma);
    double z;
    out.data.X(i, 0) = 1.0;
    if (design.model == ModelKind::homoscedastic) {
      z = xg + eps;
      out.data.X.row(i).tail(p) = xt;
    } else {
      z = xg + std::abs(xt(0)) * eps;
      out.data.X(i, 1) = std::abs(xt(0));
      for (Eigen::Index j = 2; j <= p; ++j) out.data.X(i, j) = xt(j - 1);
    }

    if (design.censoring == CensoringKind::none) {
      out.data.y(i) = z;
      out.data.delta(i) = 1.0;
    } else {
      const int c = comp(rng);
      const double cens = mix_mean[c] + mix_sd[c] * gauss(rng);
      out.data.y(i) = std::min(z, cens);
      out.data.delta(i) = z <= cens ? 1.0 : 0.0;
    }
  }

  out.censoring_rate = out.data.censoring_rate();
  return out;
}

SelectionMetrics metrics(const CoefficientProcess& fit, const Eigen::MatrixXd& truth_on_grid,
                         const std::vector<Eigen::Index>& true_support,
                         const std::vector<Eigen::Index>& est_support) {
  SelectionMetrics out;

  std::vector<Eigen::Index> S(true_support), Shat(est_support);
  std::sort(S.begin(), S.end());
  std::sort(Shat.begin(), Shat.end());
  std::vector<Eigen::Index> hits, false_disc;
  std::set_intersection(S.begin(), S.end(), Shat.begin(), Shat.end(), std::back_inserter(hits));
  std::set_difference(Shat.begin(), Shat.end(), S.begin(), S.end(),
                      std::back_inserter(false_disc));
  out.tpr = S.empty() ? 1.0 : static_cast<double>(hits.size()) / static_cast<double>(S.size());
  out.fdr = Shat.empty() ? 0.0
                         : static_cast<double>(false_disc.size()) /
                               static_cast<double>(Shat.size());

  double sum = 0.0, worst = 0.0;
  for (Eigen::Index k = 0; k < fit.betas.rows(); ++k) {
    const double err = (fit.betas.row(k) - truth_on_grid.row(k)).norm();
    sum += err;
    worst = std::max(worst, err);
  }
  out.avg_l2 = sum / static_cast<double>(fit.betas.rows());
  out.sup_l2 = worst;
  return out;
}

}  // namespace scqr
