#include "scqr/penalized.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "objective.hpp"
#include "scqr/errors.hpp"
#include "scqr/stats.hpp"

namespace scqr {

PenaltyKind parse_penalty(const std::string& name) {
  if (name == "lasso") return PenaltyKind::lasso;
  if (name == "alasso") return PenaltyKind::adaptive_lasso;
  if (name == "scad") return PenaltyKind::scad;
  if (name == "mcp") return PenaltyKind::mcp;
  throw std::invalid_argument("unknown penalty: " + name);
}

const char* penalty_name(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::lasso: return "lasso";
    case PenaltyKind::adaptive_lasso: return "alasso";
    case PenaltyKind::scad: return "scad";
    case PenaltyKind::mcp: return "mcp";
  }
  return "?";
}

Eigen::VectorXd lambda_sequence(double lambda0, const QuantileGrid& grid) {
  if (!(lambda0 > 0.0)) throw DataError("lambda0 must be positive");
  const Eigen::Index m1 = grid.size();
  const double h0 = hazard_transform(grid.taus()(0));
  Eigen::VectorXd lam(m1);
  for (Eigen::Index k = 0; k < m1; ++k) {
    lam(k) = (1.0 + (hazard_transform(grid.taus()(k)) - h0)) * lambda0;
  }
  return lam;
}

double penalty_weight(PenaltyKind kind, double u, double a) {
  switch (kind) {
    case PenaltyKind::lasso:
      return 1.0;
    case PenaltyKind::adaptive_lasso:
      return std::min(1.0, 1.0 / (u + 1e-6));
    case PenaltyKind::scad:
      if (u <= 1.0) return 1.0;
      return std::max(a - u, 0.0) / (a - 1.0);
    case PenaltyKind::mcp:
      return std::max(1.0 - u / a, 0.0);
  }
  return 1.0;
}

namespace {

inline double soft_threshold(double z, double thr) {
  if (z > thr) return z - thr;
  if (z < -thr) return z + thr;
  return 0.0;
}

double penalty_value(double lambda, const Eigen::VectorXd& w, const Eigen::VectorXd& beta) {
  double s = 0.0;
  for (Eigen::Index j = 1; j < beta.size(); ++j) s += w(j) * std::abs(beta(j));
  return lambda * s;
}

}  // namespace

LammResult lamm_solve(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
                      const AccumulatedOffset& offset, double lambda,
                      const Eigen::VectorXd& penalty_weights, const Eigen::VectorXd& beta_init,
                      const LammConfig& cfg, bool track_objective) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (penalty_weights.size() != p) throw DataError("penalty weights: wrong length");

  Eigen::VectorXd w = penalty_weights;
  w(0) = 0.0;  // the intercept is never penalized

  // isotropic curvature floor from the design scale
  double max_col = 0.0;
  for (Eigen::Index j = 0; j < p; ++j)
    max_col = std::max(max_col, data.X.col(j).squaredNorm() / static_cast<double>(n));
  const double phi0 = 0.01 * max_col;
  double phi = phi0;

  LammResult out;
  out.beta = beta_init;
  Eigen::VectorXd xb = data.X * out.beta;
  const Eigen::VectorXd no_weights;
  double F = detail::loss_from_xb(data, tau0, kernel, h, offset, out.beta, xb, no_weights);
  if (track_objective) out.objective_trace.push_back(F + penalty_value(lambda, w, out.beta));

  for (int it = 0; it < cfg.max_iter; ++it) {
    const Eigen::VectorXd g = detail::grad_from_xb(data, tau0, kernel, h, offset, xb, no_weights);

    Eigen::VectorXd cand(p), step(p), xb_cand;
    double F_cand = F;
    bool stuck = false;
    for (;;) {
      for (Eigen::Index j = 0; j < p; ++j)
        cand(j) = soft_threshold(out.beta(j) - g(j) / phi, lambda * w(j) / phi);
      step = cand - out.beta;
      xb_cand = xb + data.X * step;
      F_cand = detail::loss_from_xb(data, tau0, kernel, h, offset, cand, xb_cand, no_weights);
      const double bound = F + g.dot(step) + 0.5 * phi * step.squaredNorm();
      if (F_cand <= bound + 1e-12 * std::max(1.0, std::abs(F))) break;
      phi *= cfg.phi_growth;
      if (phi > 1e12 * std::max(phi0, 1.0)) {  // floating-point dead end
        stuck = true;
        break;
      }
    }
    if (stuck) break;  // keep the last accepted iterate; converged stays false

    const double move = step.lpNorm<Eigen::Infinity>();
    out.beta.swap(cand);
    xb.swap(xb_cand);
    F = F_cand;
    ++out.iterations;
    if (track_objective) out.objective_trace.push_back(F + penalty_value(lambda, w, out.beta));
    phi = std::max(phi0, phi / cfg.phi_shrink);
    if (move <= cfg.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

PenalizedFit fit_penalized_process(const CensoredDataset& data, const QuantileGrid& grid,
                                   KernelKind kernel, double h, const PenaltyConfig& penalty,
                                   double lambda0, const LammConfig& lamm) {
  return fit_penalized_process_warm(data, grid, kernel, h, penalty, lambda0, lamm, nullptr);
}

PenalizedFit fit_penalized_process_warm(const CensoredDataset& data, const QuantileGrid& grid,
                                        KernelKind kernel, double h,
                                        const PenaltyConfig& penalty, double lambda0,
                                        const LammConfig& lamm,
                                        const Eigen::VectorXd* warm_start) {
  if (!(h > 0.0)) throw DataError("bandwidth must be positive");
  if (penalty.kind == PenaltyKind::scad && !(penalty.a > 2.0))
    throw DataError("scad concavity parameter must exceed 2");
  if (penalty.kind == PenaltyKind::mcp && !(penalty.a > 1.0))
    throw DataError("mcp concavity parameter must exceed 1");

  const Eigen::Index p = data.p();
  const Eigen::Index m1 = grid.size();
  const double tau0 = grid.taus()(0);

  PenalizedFit out;
  out.process.grid = grid;
  out.process.betas.resize(m1, p);
  out.lambdas = lambda_sequence(lambda0, grid);
  out.supports.resize(m1);

  AccumulatedOffset offset;
  offset.reset(p);

  Eigen::VectorXd beta;
  if (warm_start && warm_start->size() == p) {
    beta = *warm_start;
  } else {
    // start from the marginal quantile: zero slopes, intercept at the tau0
    // sample quantile of y
    std::vector<double> ys(data.y.data(), data.y.data() + data.n());
    std::sort(ys.begin(), ys.end());
    Eigen::Map<const Eigen::VectorXd> sorted(ys.data(), static_cast<Eigen::Index>(ys.size()));
    beta = Eigen::VectorXd::Zero(p);
    beta(0) = quantile_type7_sorted(sorted, tau0);
  }

  const Eigen::VectorXd pilot_weights = Eigen::VectorXd::Ones(p);
  std::set<Eigen::Index> union_set;

  for (Eigen::Index k = 0; k < m1; ++k) {
    const double lam = out.lambdas(k);

    Eigen::VectorXd used_w = pilot_weights;
    used_w(0) = 0.0;
    LammResult res = lamm_solve(data, tau0, kernel, h, offset, lam, pilot_weights, beta, lamm);
    if (res.converged && penalty.kind != PenaltyKind::lasso) {
      for (int t = 0; t < penalty.lla_steps; ++t) {
        Eigen::VectorXd w(p);
        w(0) = 0.0;
        for (Eigen::Index j = 1; j < p; ++j)
          w(j) = penalty_weight(penalty.kind, std::abs(res.beta(j)) / lam, penalty.a);
        res = lamm_solve(data, tau0, kernel, h, offset, lam, w, res.beta, lamm);
        if (!res.converged) break;
        used_w = w;
      }
    }
    if (!res.converged) {
      std::ostringstream msg;
      msg << "penalized solver did not converge at tau = " << grid.taus()(k);
      throw NonConvergence(msg.str(), res.beta, std::numeric_limits<double>::quiet_NaN(),
                           grid.taus()(k));
    }

    out.process.betas.row(k) = res.beta.transpose();
    out.penalty_weights.push_back(used_w);
    for (Eigen::Index j = 0; j < p; ++j) {
      if (res.beta(j) != 0.0) {
        out.supports[k].push_back(j);
        union_set.insert(j);
      }
    }
    if (k + 1 < m1) offset.add_step(data, kernel, h, res.beta, grid.deltaH()(k));
    beta = res.beta;
  }

  out.union_support.assign(union_set.begin(), union_set.end());
  return out;
}

CoefficientProcess refit_on_support(const CensoredDataset& data, const QuantileGrid& grid,
                                    KernelKind kernel, const SolverConfig& cfg,
                                    const std::vector<Eigen::Index>& support) {
  std::set<Eigen::Index> cols(support.begin(), support.end());
  cols.insert(0);  // intercept always present
  for (Eigen::Index j : cols) {
    if (j < 0 || j >= data.p()) throw DataError("support index out of range");
  }
  if (static_cast<Eigen::Index>(cols.size()) >= data.n())
    throw DataError("support larger than the sample size");

  CensoredDataset sub;
  sub.y = data.y;
  sub.delta = data.delta;
  sub.X.resize(data.n(), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index c = 0;
  for (Eigen::Index j : cols) sub.X.col(c++) = data.X.col(j);

  CoefficientProcess reduced = fit_process(sub, grid, kernel, cfg);

  CoefficientProcess full;
  full.grid = grid;
  full.betas = Eigen::MatrixXd::Zero(grid.size(), data.p());
  c = 0;
  for (Eigen::Index j : cols) full.betas.col(j) = reduced.betas.col(c++);
  return full;
}

}  // namespace scqr
