#include "scqr/see.hpp"

#include <cmath>
#include <sstream>

#include "objective.hpp"
#include "scqr/errors.hpp"

namespace scqr {

double resolve_bandwidth(const SolverConfig& cfg, Eigen::Index n, Eigen::Index p) {
  switch (cfg.bandwidth_rule) {
    case BandwidthRule::explicit_value:
      if (!(cfg.bandwidth > 0.0)) throw DataError("bandwidth must be positive");
      return cfg.bandwidth;
    case BandwidthRule::low_dim:
      return std::max(0.05, std::pow((static_cast<double>(p) + std::log(static_cast<double>(n))) /
                                         static_cast<double>(n),
                                     0.4));
    case BandwidthRule::high_dim:
      return std::max(0.05, 0.5 * std::pow(std::log(static_cast<double>(p)) /
                                               static_cast<double>(n),
                                           0.25));
  }
  throw DataError("unknown bandwidth rule");
}

namespace {

using detail::grad_from_xb;
using detail::hessian_from_xb;
using detail::loss_from_xb;

// least squares on the uncensored rows (weighted by the multipliers), used to
// start the first grid point
Eigen::VectorXd init_wls(const CensoredDataset& data, const Eigen::VectorXd& weights) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  Eigen::VectorXd dw(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dw(i) = data.delta(i) * (weights.size() > 0 ? weights(i) : 1.0);
  }
  Eigen::MatrixXd A(p, p);
  A.noalias() = data.X.transpose() * dw.asDiagonal() * data.X;
  A /= static_cast<double>(n);
  Eigen::VectorXd b = (data.X.transpose() * dw.cwiseProduct(data.y)) / static_cast<double>(n);
  A.diagonal().array() += 1e-10 * (A.trace() / static_cast<double>(p) + 1.0);
  return A.ldlt().solve(b);
}

}  // namespace

void AccumulatedOffset::add_step(const CensoredDataset& data, KernelKind kernel, double h,
                                 const Eigen::VectorXd& beta, double dH,
                                 const Eigen::VectorXd& weights) {
  const Eigen::Index n = data.n();
  if (v.size() == 0) v = Eigen::VectorXd::Zero(data.p());
  const Eigen::VectorXd xb = data.X * beta;
  const bool weighted = weights.size() > 0;
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double si = kernel_cdf(kernel, (data.y(i) - xb(i)) / h);
    s(i) = weighted ? weights(i) * si : si;
  }
  v.noalias() += (dH / static_cast<double>(n)) * (data.X.transpose() * s);
  ++steps;
}

double loss_k(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
              const AccumulatedOffset& offset, const Eigen::VectorXd& beta,
              const Eigen::VectorXd& weights) {
  return loss_from_xb(data, tau0, kernel, h, offset, beta, data.X * beta, weights);
}

double loss0(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
             const Eigen::VectorXd& beta, const Eigen::VectorXd& weights) {
  AccumulatedOffset empty;
  return loss_k(data, tau0, kernel, h, empty, beta, weights);
}

Eigen::VectorXd gradient_k(const CensoredDataset& data, double tau0, KernelKind kernel,
                           double h, const AccumulatedOffset& offset,
                           const Eigen::VectorXd& beta, const Eigen::VectorXd& weights) {
  return grad_from_xb(data, tau0, kernel, h, offset, data.X * beta, weights);
}

Eigen::MatrixXd hessian(const CensoredDataset& data, KernelKind kernel, double h,
                        const Eigen::VectorXd& beta, const Eigen::VectorXd& weights) {
  return hessian_from_xb(data, kernel, h, data.X * beta, weights);
}

StepResult solve_step(const CensoredDataset& data, double tau0, KernelKind kernel, double h,
                      const AccumulatedOffset& offset, const Eigen::VectorXd& beta_init,
                      const SolverConfig& cfg, const Eigen::VectorXd& weights,
                      const SolveOptions& opts) {
  const Eigen::Index p = data.p();
  StepResult out;
  out.beta = beta_init;
  Eigen::VectorXd xb = data.X * out.beta;
  double f = loss_from_xb(data, tau0, kernel, h, offset, out.beta, xb, weights);
  if (opts.track_loss) out.loss_trace.push_back(f);
  Eigen::VectorXd g = grad_from_xb(data, tau0, kernel, h, offset, xb, weights);
  out.grad_inf = g.lpNorm<Eigen::Infinity>();

  while (out.grad_inf > cfg.grad_tol && out.iterations < cfg.max_iter) {
    // Newton direction on the ridged Hessian; fall back to steepest descent if
    // the curvature is degenerate (compact kernels can zero the Hessian out)
    Eigen::VectorXd d;
    bool have_newton = false;
    Eigen::MatrixXd H = hessian_from_xb(data, kernel, h, xb, weights);
    const double tr = H.trace();
    if (std::isfinite(tr) && tr > 0.0) {
      H.diagonal().array() += cfg.ridge_rel * tr / static_cast<double>(p);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      if (ldlt.info() == Eigen::Success) {
        d = -ldlt.solve(g);
        const double gd = g.dot(d);
        if (std::isfinite(gd) && gd < 0.0) have_newton = true;
      }
    }
    if (!have_newton) d = -g;
    const double gd = g.dot(d);

    const Eigen::VectorXd xd = data.X * d;
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd beta_new, xb_new;
    double f_new = f;
    while (t >= 1e-14) {
      beta_new = out.beta + t * d;
      xb_new = xb + t * xd;
      f_new = loss_from_xb(data, tau0, kernel, h, offset, beta_new, xb_new, weights);
      if (f_new <= f + 1e-4 * t * gd) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // descent exhausted at floating-point resolution

    out.beta.swap(beta_new);
    xb.swap(xb_new);
    f = f_new;
    ++out.iterations;
    if (opts.track_loss) out.loss_trace.push_back(f);
    g = grad_from_xb(data, tau0, kernel, h, offset, xb, weights);
    out.grad_inf = g.lpNorm<Eigen::Infinity>();
  }

  out.converged = out.grad_inf <= cfg.grad_tol;
  if (!out.converged && opts.throw_on_failure) {
    std::ostringstream msg;
    msg << "solver did not reach gradient tolerance " << cfg.grad_tol << " (|grad|_inf = "
        << out.grad_inf << " after " << out.iterations << " iterations)";
    throw NonConvergence(msg.str(), out.beta, out.grad_inf);
  }
  return out;
}

CoefficientProcess fit_process_weighted(const CensoredDataset& data, const QuantileGrid& grid,
                                        KernelKind kernel, const SolverConfig& cfg,
                                        const Eigen::VectorXd& weights, FitStats* stats) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  double weighted_events = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    weighted_events += data.delta(i) * (weights.size() > 0 ? weights(i) : 1.0);
  if (weighted_events <= 0.0) throw DataError("no events: every uncensored observation has zero weight");

  const double h = resolve_bandwidth(cfg, n, p);
  const double tau0 = grid.taus()(0);
  const Eigen::Index m1 = grid.size();

  CoefficientProcess proc;
  proc.grid = grid;
  proc.betas.resize(m1, p);

  AccumulatedOffset offset;
  offset.reset(p);

  SolveOptions opts;
  opts.throw_on_failure = false;

  Eigen::VectorXd beta = init_wls(data, weights);
  if (stats) *stats = FitStats{};

  for (Eigen::Index k = 0; k < m1; ++k) {
    StepResult step = solve_step(data, tau0, kernel, h, offset, beta, cfg, weights, opts);
    if (!step.converged) {
      std::ostringstream msg;
      msg << "no convergence at tau = " << grid.taus()(k) << " (|grad|_inf = " << step.grad_inf
          << " after " << step.iterations << " iterations)";
      throw NonConvergence(msg.str(), step.beta, step.grad_inf, grid.taus()(k));
    }
    proc.betas.row(k) = step.beta.transpose();
    if (stats) {
      stats->total_iterations += step.iterations;
      stats->max_grad_inf = std::max(stats->max_grad_inf, step.grad_inf);
    }
    if (k == 0 && stats) {
      // censored mass sitting at or below the first fitted quantile plane
      const Eigen::VectorXd xb = data.X * step.beta;
      Eigen::Index count = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (data.delta(i) == 0.0 && data.y(i) <= xb(i)) ++count;
      stats->censored_below_tau_min = static_cast<double>(count) / static_cast<double>(n);
    }
    if (k + 1 < m1) offset.add_step(data, kernel, h, step.beta, grid.deltaH()(k), weights);
    beta = step.beta;
  }
  return proc;
}

CoefficientProcess fit_process(const CensoredDataset& data, const QuantileGrid& grid,
                               KernelKind kernel, const SolverConfig& cfg, FitStats* stats) {
  return fit_process_weighted(data, grid, kernel, cfg, Eigen::VectorXd(), stats);
}

}  // namespace scqr
