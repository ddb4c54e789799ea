#include "scqr/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scqr/parallel.hpp"
#include "scqr/rng.hpp"
#include "scqr/stats.hpp"

namespace scqr {

WeightScheme parse_weight_scheme(const std::string& name) {
  if (name == "multinomial") return WeightScheme::multinomial;
  if (name == "exponential") return WeightScheme::exponential;
  if (name == "rademacher") return WeightScheme::rademacher;
  throw std::invalid_argument("unknown weight scheme: " + name);
}

const char* weight_scheme_name(WeightScheme s) {
  switch (s) {
    case WeightScheme::multinomial: return "multinomial";
    case WeightScheme::exponential: return "exponential";
    case WeightScheme::rademacher: return "rademacher";
  }
  return "?";
}

Eigen::VectorXd generate_weights(WeightScheme scheme, Eigen::Index n, std::mt19937_64& rng) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  switch (scheme) {
    case WeightScheme::multinomial: {
      std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
      for (Eigen::Index i = 0; i < n; ++i) w(pick(rng)) += 1.0;
      break;
    }
    case WeightScheme::exponential: {
      std::exponential_distribution<double> exp1(1.0);
      for (Eigen::Index i = 0; i < n; ++i) w(i) = exp1(rng);
      break;
    }
    case WeightScheme::rademacher: {
      // W_i = 1 + e_i with e_i = +-1: either 0 or 2, mean one
      std::bernoulli_distribution coin(0.5);
      for (Eigen::Index i = 0; i < n; ++i) w(i) = coin(rng) ? 2.0 : 0.0;
      break;
    }
  }
  return w;
}

CoefficientProcess bootstrap_fit(const CensoredDataset& data, const QuantileGrid& grid,
                                 KernelKind kernel, const SolverConfig& cfg,
                                 const Eigen::VectorXd& weights) {
  if (weights.size() != data.n()) throw DataError("bootstrap weights: wrong length");
  if (weights.minCoeff() < 0.0) throw DataError("bootstrap weights: negative entry");
  return fit_process_weighted(data, grid, kernel, cfg, weights);
}

BootstrapResult run_bootstrap(const CensoredDataset& data, const QuantileGrid& grid,
                              KernelKind kernel, const SolverConfig& cfg,
                              WeightScheme scheme, int B, std::uint64_t seed,
                              int n_threads) {
  if (B < 1) throw DataError("bootstrap: B must be positive");
  const Eigen::Index n = data.n();

  struct Slot {
    Eigen::MatrixXd betas;
    bool ok = false;
    int regenerated = 0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(B));

  parallel_for(static_cast<std::size_t>(B), n_threads, [&](std::size_t b) {
    std::mt19937_64 rng = make_stream(seed, b);
    Eigen::VectorXd w;
    for (;;) {
      w = generate_weights(scheme, n, rng);
      double events = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) events += w(i) * data.delta(i);
      if (events > 0.0) break;
      ++slots[b].regenerated;  // every event zeroed out: redraw within this stream
    }
    try {
      CoefficientProcess proc = fit_process_weighted(data, grid, kernel, cfg, w);
      slots[b].betas = std::move(proc.betas);
      slots[b].ok = true;
    } catch (const NonConvergence&) {
      slots[b].ok = false;
    }
  });

  BootstrapResult out;
  out.n_requested = B;
  for (auto& s : slots) {
    if (s.ok) {
      out.replicates.push_back(std::move(s.betas));
    } else {
      ++out.n_failed;
    }
    out.n_regenerated += s.regenerated;
  }
  return out;
}

CiBand confidence_intervals(const CoefficientProcess& fit, const BootstrapResult& boot,
                            double tau, double level, CiType type) {
  if (!(level > 0.0 && level < 1.0)) throw DataError("confidence level must be in (0, 1)");
  const int B_eff = static_cast<int>(boot.replicates.size());
  if (B_eff < 20) throw DataError("too few successful bootstrap replicates (need at least 20)");

  const Eigen::Index k = fit.grid.locate(tau);
  const Eigen::Index p = fit.p();
  const Eigen::VectorXd point = fit.betas.row(k).transpose();
  const double alpha = 1.0 - level;

  Eigen::MatrixXd draws(B_eff, p);
  for (int b = 0; b < B_eff; ++b) draws.row(b) = boot.replicates[b].row(k);

  CiBand band;
  band.lower.resize(p);
  band.upper.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::VectorXd col = draws.col(j);
    switch (type) {
      case CiType::percentile: {
        std::sort(col.data(), col.data() + col.size());
        band.lower(j) = quantile_type7_sorted(col, alpha / 2.0);
        band.upper(j) = quantile_type7_sorted(col, 1.0 - alpha / 2.0);
        break;
      }
      case CiType::pivotal: {
        std::sort(col.data(), col.data() + col.size());
        const double qlo = quantile_type7_sorted(col, alpha / 2.0);
        const double qhi = quantile_type7_sorted(col, 1.0 - alpha / 2.0);
        band.lower(j) = 2.0 * point(j) - qhi;
        band.upper(j) = 2.0 * point(j) - qlo;
        break;
      }
      case CiType::normal: {
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().sum() /
                                    static_cast<double>(B_eff - 1));
        const double z = normal_quantile(1.0 - alpha / 2.0);
        band.lower(j) = point(j) - z * sd;
        band.upper(j) = point(j) + z * sd;
        break;
      }
    }
  }
  return band;
}

}  // namespace scqr
