#include "scqr/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scqr/errors.hpp"
#include "scqr/parallel.hpp"
#include "scqr/rng.hpp"

namespace scqr {

Eigen::VectorXd default_lambda0_grid(int count, double lo, double hi) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw DataError("invalid lambda0 grid");
  if (count == 1) return Eigen::VectorXd::Constant(1, lo);
  return Eigen::VectorXd::LinSpaced(count, lo, hi);
}

double martingale_residual(double y, double delta, const Eigen::VectorXd& x,
                           const CoefficientProcess& proc, Eigen::Index k) {
  const double tau0 = proc.grid.taus()(0);
  double integral = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (y >= x.dot(proc.betas.row(j))) integral += proc.grid.deltaH()(j);
  }
  const double event_at_k = (delta != 0.0 && y <= x.dot(proc.betas.row(k))) ? 1.0 : 0.0;
  return event_at_k - integral - tau0;
}

namespace {

// deviance residual sqrt(-2 {M + delta log(delta - M)}) with the censored-case
// convention 0 log 0 = 0 and clamps against round-off
inline double deviance_residual(double delta, double M) {
  double radicand;
  if (delta != 0.0) {
    radicand = -2.0 * (M + std::log(std::max(1.0 - M, 1e-10)));
  } else {
    radicand = -2.0 * M;
  }
  return std::sqrt(std::max(radicand, 0.0));
}

}  // namespace

double deviance(const CensoredDataset& fold, const CoefficientProcess& proc) {
  const Eigen::Index n = fold.n();
  const Eigen::Index m1 = proc.grid.size();
  const double tau0 = proc.grid.taus()(0);
  const Eigen::MatrixXd fitted = fold.X * proc.betas.transpose();  // n x (m+1)

  double total = 0.0;
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < m1; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double event =
          (fold.delta(i) != 0.0 && fold.y(i) <= fitted(i, k)) ? 1.0 : 0.0;
      const double M = event - integral(i) - tau0;
      total += deviance_residual(fold.delta(i), M);
    }
    if (k + 1 < m1) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (fold.y(i) >= fitted(i, k)) integral(i) += proc.grid.deltaH()(k);
      }
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(m1));
}

CvResult cv_select_lambda0(const CensoredDataset& data, const QuantileGrid& grid,
                           KernelKind kernel, double h, const PenaltyConfig& penalty,
                           const CvConfig& cfg) {
  const Eigen::Index n = data.n();
  if (cfg.folds < 2) throw DataError("cross-validation needs at least two folds");
  if (static_cast<Eigen::Index>(cfg.folds) > n) throw DataError("more folds than observations");

  Eigen::VectorXd candidates =
      cfg.lambda0_grid.size() > 0 ? cfg.lambda0_grid : default_lambda0_grid();
  std::sort(candidates.data(), candidates.data() + candidates.size());
  for (Eigen::Index c = 0; c < candidates.size(); ++c)
    if (!(candidates(c) > 0.0)) throw DataError("lambda0 candidates must be positive");
  const Eigen::Index C = candidates.size();
  const int K = cfg.folds;

  // seeded permutation, folds = contiguous blocks (sizes differ by at most one)
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index(0));
  std::mt19937_64 rng = make_stream(cfg.seed, 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::vector<Eigen::Index>> val_rows(K), train_rows(K);
  for (int f = 0; f < K; ++f) {
    const Eigen::Index lo = n * f / K;
    const Eigen::Index hi = n * (f + 1) / K;
    for (Eigen::Index i = 0; i < n; ++i) {
      ((i >= lo && i < hi) ? val_rows[f] : train_rows[f]).push_back(perm[i]);
    }
  }

  Eigen::MatrixXd score(K, C);
  parallel_for(static_cast<std::size_t>(K), cfg.n_threads, [&](std::size_t f) {
    const CensoredDataset train = subset(data, train_rows[f]);
    const CensoredDataset val = subset(data, val_rows[f]);
    // sweep from the strongest penalty down, warm-starting each candidate's
    // first grid point at the previous solution
    Eigen::VectorXd warm;
    for (Eigen::Index c = C - 1; c >= 0; --c) {
      try {
        PenalizedFit fit = fit_penalized_process_warm(train, grid, kernel, h, penalty,
                                                      candidates(c), cfg.lamm,
                                                      warm.size() > 0 ? &warm : nullptr);
        score(static_cast<Eigen::Index>(f), c) = deviance(val, fit.process);
        warm = fit.process.betas.row(0).transpose();
      } catch (const NonConvergence&) {
        score(static_cast<Eigen::Index>(f), c) = std::numeric_limits<double>::infinity();
      }
    }
  });

  CvResult out;
  out.candidates = candidates;
  out.mean_score.resize(C);
  out.sd_score.resize(C);
  for (Eigen::Index c = 0; c < C; ++c) {
    const Eigen::VectorXd col = score.col(c);
    if (!col.allFinite()) {
      out.mean_score(c) = std::numeric_limits<double>::infinity();
      out.sd_score(c) = std::numeric_limits<double>::infinity();
      continue;
    }
    out.mean_score(c) = col.mean();
    out.sd_score(c) =
        K > 1 ? std::sqrt((col.array() - col.mean()).square().sum() / (K - 1)) : 0.0;
  }

  out.winner_index = -1;
  for (Eigen::Index c = 0; c < C; ++c) {
    if (!std::isfinite(out.mean_score(c))) continue;
    if (out.winner_index < 0 || out.mean_score(c) < out.mean_score(out.winner_index))
      out.winner_index = static_cast<int>(c);  // ties keep the smaller lambda0
  }
  if (out.winner_index < 0) throw DataError("cross-validation failed for every candidate");
  out.lambda0 = candidates(out.winner_index);

  for (int f = 0; f < K; ++f)
    out.fold_sizes.push_back(static_cast<Eigen::Index>(val_rows[f].size()));
  return out;
}

}  // namespace scqr
