#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scqr/penalized.hpp"

using namespace scqr;

namespace {

CensoredDataset make_data(Eigen::Index n, Eigen::Index p, std::uint64_t seed,
                          double censor_shift = 1.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CensoredDataset d;
  d.y.resize(n);
  d.delta.resize(n);
  d.X.resize(n, p);
  d.X.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 1; j < p; ++j) d.X(i, j) = gauss(rng);
    const double z = 0.4 * d.X(i, 1) - 0.3 * d.X(i, 2) + gauss(rng);
    const double c = censor_shift + 2.0 * gauss(rng);
    d.y(i) = std::min(z, c);
    d.delta(i) = z <= c ? 1.0 : 0.0;
  }
  return d;
}

// per-point reconstruction of the stationarity conditions
void check_kkt(const CensoredDataset& d, KernelKind kernel, double h, const PenalizedFit& fit,
               double tol) {
  const QuantileGrid& grid = fit.process.grid;
  AccumulatedOffset off;
  off.reset(d.p());
  REQUIRE(fit.penalty_weights.size() == static_cast<std::size_t>(grid.size()));
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const Eigen::VectorXd beta = fit.process.betas.row(k).transpose();
    const Eigen::VectorXd g = gradient_k(d, grid.taus()(0), kernel, h, off, beta);
    const Eigen::VectorXd& w = fit.penalty_weights[k];
    const double lam = fit.lambdas(k);
    CHECK(w(0) == 0.0);
    CHECK(std::abs(g(0)) <= tol);
    for (Eigen::Index j = 1; j < d.p(); ++j) {
      if (beta(j) != 0.0)
        CHECK(std::abs(g(j) + lam * w(j) * (beta(j) > 0 ? 1.0 : -1.0)) <= tol);
      else
        CHECK(std::abs(g(j)) <= lam * w(j) + tol);
    }
    if (k + 1 < grid.size()) off.add_step(d, kernel, h, beta, grid.deltaH()(k));
  }
}

}  // namespace

TEST_SUITE("penalized") {

TEST_CASE("lambda sequence follows the cumulative hazard") {
  const QuantileGrid grid({0.1, 0.3, 0.55});
  const Eigen::VectorXd lam = lambda_sequence(0.1, grid);
  CHECK(lam(0) == 0.1);  // exactly lambda0 at the first point
  // 1 + H(0.55) - H(0.1) = 1 + log(0.9/0.45) = 1 + log 2
  CHECK(lam(2) == doctest::Approx(0.1 * (1.0 + std::log(2.0))).epsilon(1e-14));

  const QuantileGrid fine = make_uniform_grid(0.05, 0.8, 0.05);
  const Eigen::VectorXd seq = lambda_sequence(0.03, fine);
  for (Eigen::Index k = 0; k < fine.size(); ++k) {
    const double direct =
        (1.0 + std::log((1.0 - fine.taus()(0)) / (1.0 - fine.taus()(k)))) * 0.03;
    CHECK(seq(k) == doctest::Approx(direct).epsilon(1e-14));
    if (k > 0) CHECK(seq(k) > seq(k - 1));
  }
  CHECK_THROWS_AS(lambda_sequence(0.0, grid), DataError);
  CHECK_THROWS_AS(lambda_sequence(-0.1, grid), DataError);
}

TEST_CASE("penalty weight shapes") {
  // scad: flat to u=1, linear decay, zero from u=a on
  CHECK(penalty_weight(PenaltyKind::scad, 0.5, 3.7) == 1.0);
  CHECK(penalty_weight(PenaltyKind::scad, 1.0, 3.7) == 1.0);
  CHECK(penalty_weight(PenaltyKind::scad, 2.0, 3.7) ==
        doctest::Approx(1.7 / 2.7).epsilon(1e-15));
  CHECK(penalty_weight(PenaltyKind::scad, 3.7, 3.7) == 0.0);
  CHECK(penalty_weight(PenaltyKind::scad, 10.0, 3.7) == 0.0);
  // mcp: linear decay hitting zero at u=a
  CHECK(penalty_weight(PenaltyKind::mcp, 0.0, 3.0) == 1.0);
  CHECK(penalty_weight(PenaltyKind::mcp, 1.5, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(penalty_weight(PenaltyKind::mcp, 3.0, 3.0) == 0.0);
  CHECK(penalty_weight(PenaltyKind::mcp, 7.0, 3.0) == 0.0);
  // adaptive lasso caps at 1 and decays like 1/u
  CHECK(penalty_weight(PenaltyKind::adaptive_lasso, 0.0, 3.7) == 1.0);
  CHECK(penalty_weight(PenaltyKind::adaptive_lasso, 0.5, 3.7) == 1.0);
  CHECK(penalty_weight(PenaltyKind::adaptive_lasso, 4.0, 3.7) ==
        doctest::Approx(1.0 / 4.000001).epsilon(1e-12));
  // lasso never reweights
  CHECK(penalty_weight(PenaltyKind::lasso, 17.0, 3.7) == 1.0);

  CHECK(default_concavity(PenaltyKind::mcp) == 3.0);
  CHECK(default_concavity(PenaltyKind::scad) == 3.7);
  CHECK(default_concavity(PenaltyKind::lasso) == 3.7);
}

TEST_CASE("penalty names round-trip") {
  for (PenaltyKind k : {PenaltyKind::lasso, PenaltyKind::adaptive_lasso, PenaltyKind::scad,
                        PenaltyKind::mcp})
    CHECK(parse_penalty(penalty_name(k)) == k);
  CHECK_THROWS_AS(parse_penalty("ridge"), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  const CensoredDataset d = make_data(30, 3, 5);
  const QuantileGrid grid({0.3});
  PenaltyConfig pen;
  CHECK_THROWS_AS(fit_penalized_process(d, grid, KernelKind::gaussian, 0.0, pen, 0.1),
                  DataError);
  pen.kind = PenaltyKind::scad;
  pen.a = 2.0;
  CHECK_THROWS_AS(fit_penalized_process(d, grid, KernelKind::gaussian, 0.3, pen, 0.1),
                  DataError);
  pen.kind = PenaltyKind::mcp;
  pen.a = 1.0;
  CHECK_THROWS_AS(fit_penalized_process(d, grid, KernelKind::gaussian, 0.3, pen, 0.1),
                  DataError);

  AccumulatedOffset off;
  off.reset(d.p());
  CHECK_THROWS_AS(lamm_solve(d, 0.3, KernelKind::gaussian, 0.3, off, 0.1,
                             Eigen::VectorXd::Ones(d.p() + 2), Eigen::VectorXd::Zero(d.p())),
                  DataError);
}

TEST_CASE("vanishing penalty recovers the unpenalized fit") {
  const CensoredDataset d = make_data(60, 4, 11);
  const QuantileGrid grid({0.25, 0.4});
  const double h = 0.4;
  SolverConfig cfg;
  cfg.bandwidth_rule = BandwidthRule::explicit_value;
  cfg.bandwidth = h;
  const CoefficientProcess plain = fit_process(d, grid, KernelKind::gaussian, cfg);
  const PenalizedFit pen =
      fit_penalized_process(d, grid, KernelKind::gaussian, h, PenaltyConfig{}, 1e-10);
  CHECK((plain.betas - pen.process.betas).lpNorm<Eigen::Infinity>() <= 1e-4);
}

TEST_CASE("overwhelming penalty zeroes every slope") {
  const CensoredDataset d = make_data(80, 5, 13);
  const QuantileGrid grid({0.2, 0.35, 0.5});
  const double h = 0.35;
  const PenalizedFit pen =
      fit_penalized_process(d, grid, KernelKind::gaussian, h, PenaltyConfig{}, 50.0);
  for (Eigen::Index k = 0; k < grid.size(); ++k)
    for (Eigen::Index j = 1; j < d.p(); ++j) CHECK(pen.process.betas(k, j) == 0.0);
  REQUIRE(pen.union_support.size() == 1);
  CHECK(pen.union_support[0] == 0);

  // with all slopes pinned at zero the intercept solves the one-column problem
  CensoredDataset icept = d;
  icept.X = Eigen::MatrixXd::Ones(d.n(), 1);
  SolverConfig cfg;
  cfg.bandwidth_rule = BandwidthRule::explicit_value;
  cfg.bandwidth = h;
  const CoefficientProcess marginal = fit_process(icept, grid, KernelKind::gaussian, cfg);
  for (Eigen::Index k = 0; k < grid.size(); ++k)
    CHECK(std::abs(pen.process.betas(k, 0) - marginal.betas(k, 0)) <= 1e-3);
}

TEST_CASE("separable design matches per-coordinate search") {
  // X = 2 I: the lasso objective splits into four independent 1-d problems that a
  // dense scan over the exact smoothed loss solves to grid accuracy
  const Eigen::Index n = 4;
  CensoredDataset d;
  d.X = 2.0 * Eigen::MatrixXd::Identity(n, n);
  d.y.resize(n);
  d.y << 1.2, 0.9, -0.05, 2.0;
  d.delta = Eigen::VectorXd::Ones(n);

  const double tau = 0.3, h = 0.5, lam = 0.3;
  const KernelKind kern = KernelKind::gaussian;
  const PenalizedFit fit =
      fit_penalized_process(d, QuantileGrid({tau}), kern, h, PenaltyConfig{}, lam);

  for (Eigen::Index j = 0; j < n; ++j) {
    const double pen_scale = j == 0 ? 0.0 : lam;  // intercept coordinate is free
    const auto f = [&](double b) {
      return smoothed_check_loss(kern, tau, h, d.y(j) - 2.0 * b) / static_cast<double>(n) +
             pen_scale * std::abs(b);
    };
    const double best = oracle::grid_min_1d(f, -2.0, 2.0, 1e-6);
    CHECK(std::abs(fit.process.betas(0, j) - best) <= 1e-3);
  }
  // the small coordinate lands exactly on zero via the soft threshold
  CHECK(fit.process.betas(0, 2) == 0.0);
  for (Eigen::Index j : fit.supports[0]) CHECK(j != 2);
}

TEST_CASE("stationarity conditions hold across penalties") {
  const CensoredDataset d = make_data(80, 6, 17);
  const QuantileGrid grid({0.2, 0.35, 0.5});
  const double h = 0.35;
  for (PenaltyKind kind : {PenaltyKind::lasso, PenaltyKind::adaptive_lasso, PenaltyKind::scad,
                           PenaltyKind::mcp}) {
    PenaltyConfig pen;
    pen.kind = kind;
    pen.a = default_concavity(kind);
    const PenalizedFit fit =
        fit_penalized_process(d, grid, KernelKind::gaussian, h, pen, 0.08);
    check_kkt(d, KernelKind::gaussian, h, fit, 1e-3);
  }
}

TEST_CASE("majorization steps never increase the objective") {
  const CensoredDataset d = make_data(70, 5, 19);
  AccumulatedOffset off;
  off.reset(d.p());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(d.p());
  Eigen::VectorXd init = Eigen::VectorXd::Zero(d.p());
  init(0) = -1.0;
  const LammResult res = lamm_solve(d, 0.3, KernelKind::logistic, 0.4, off, 0.05, w, init,
                                    LammConfig(), /*track_objective=*/true);
  REQUIRE(res.converged);
  REQUIRE(res.objective_trace.size() >= 2);
  for (std::size_t t = 1; t < res.objective_trace.size(); ++t)
    CHECK(res.objective_trace[t] <=
          res.objective_trace[t - 1] + 1e-10 * std::max(1.0, std::abs(res.objective_trace[t - 1])));
}

TEST_CASE("zero penalty weights reduce lamm to the smooth problem") {
  const CensoredDataset d = make_data(50, 3, 23);
  const double tau = 0.35, h = 0.4;
  AccumulatedOffset off;
  off.reset(d.p());
  LammConfig lamm;
  lamm.tol = 1e-7;
  lamm.max_iter = 5000;
  const LammResult res = lamm_solve(d, tau, KernelKind::gaussian, h, off, 0.3,
                                    Eigen::VectorXd::Zero(d.p()), Eigen::VectorXd::Zero(d.p()),
                                    lamm);
  REQUIRE(res.converged);
  SolverConfig cfg;
  cfg.bandwidth_rule = BandwidthRule::explicit_value;
  cfg.bandwidth = h;
  const StepResult newton = solve_step(d, tau, KernelKind::gaussian, h, off,
                                       Eigen::VectorXd::Zero(d.p()), cfg);
  CHECK((res.beta - newton.beta).lpNorm<Eigen::Infinity>() <= 1e-3);
}

TEST_CASE("warm started sweep agrees with a cold start") {
  const CensoredDataset d = make_data(60, 4, 29);
  const QuantileGrid grid({0.25, 0.4});
  const double h = 0.4;
  const PenalizedFit cold =
      fit_penalized_process(d, grid, KernelKind::gaussian, h, PenaltyConfig{}, 0.05);
  const Eigen::VectorXd start = cold.process.betas.row(0).transpose();
  const PenalizedFit warm = fit_penalized_process_warm(d, grid, KernelKind::gaussian, h,
                                                       PenaltyConfig{}, 0.05, LammConfig(),
                                                       &start);
  CHECK((cold.process.betas - warm.process.betas).lpNorm<Eigen::Infinity>() <= 2e-4);
}

TEST_CASE("folded penalties debias large coefficients") {
  // strong sparse signal: scad/mcp should keep the true support with less
  // shrinkage than the lasso pilot on the active coordinates
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  const Eigen::Index n = 250, p = 12;
  CensoredDataset d;
  d.y.resize(n);
  d.delta.resize(n);
  d.X.resize(n, p);
  d.X.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 1; j < p; ++j) d.X(i, j) = gauss(rng);
    const double z = 0.5 + 2.0 * d.X(i, 1) + 1.5 * d.X(i, 2) + gauss(rng);
    const double c = 4.0 + 3.0 * gauss(rng);
    d.y(i) = std::min(z, c);
    d.delta(i) = z <= c ? 1.0 : 0.0;
  }
  const QuantileGrid grid({0.3, 0.5});
  const double h = 0.3;

  PenaltyConfig lasso;
  const PenalizedFit pl = fit_penalized_process(d, grid, KernelKind::gaussian, h, lasso, 0.08);
  PenaltyConfig scad;
  scad.kind = PenaltyKind::scad;
  const PenalizedFit ps = fit_penalized_process(d, grid, KernelKind::gaussian, h, scad, 0.08);

  for (const PenalizedFit* fit : {&pl, &ps}) {
    const auto& u = fit->union_support;
    CHECK(std::find(u.begin(), u.end(), 1) != u.end());
    CHECK(std::find(u.begin(), u.end(), 2) != u.end());
    CHECK(u.size() <= 8);
  }
  // scad reweighting relaxes the penalty on the strong coordinates
  CHECK(std::abs(ps.process.betas(0, 1)) >= std::abs(pl.process.betas(0, 1)));
  CHECK(std::abs(ps.process.betas(0, 1) - 2.0) <= std::abs(pl.process.betas(0, 1) - 2.0) + 1e-6);
}

TEST_CASE("refit on a support reproduces the reduced fit") {
  const CensoredDataset d = make_data(90, 5, 37);
  const QuantileGrid grid({0.25, 0.45});
  SolverConfig cfg;

  const CoefficientProcess refit =
      refit_on_support(d, grid, KernelKind::gaussian, cfg, {2, 4});

  CensoredDataset manual;
  manual.y = d.y;
  manual.delta = d.delta;
  manual.X.resize(d.n(), 3);
  manual.X.col(0) = d.X.col(0);
  manual.X.col(1) = d.X.col(2);
  manual.X.col(2) = d.X.col(4);
  const CoefficientProcess reduced = fit_process(manual, grid, KernelKind::gaussian, cfg);

  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    CHECK(refit.betas(k, 0) == reduced.betas(k, 0));
    CHECK(refit.betas(k, 2) == reduced.betas(k, 1));
    CHECK(refit.betas(k, 4) == reduced.betas(k, 2));
    CHECK(refit.betas(k, 1) == 0.0);
    CHECK(refit.betas(k, 3) == 0.0);
  }

  CHECK_THROWS_AS(refit_on_support(d, grid, KernelKind::gaussian, cfg, {7}), DataError);
  CHECK_THROWS_AS(refit_on_support(d, grid, KernelKind::gaussian, cfg, {-1}), DataError);

  CensoredDataset tiny = make_data(4, 6, 41);
  CHECK_THROWS_WITH_AS(
      refit_on_support(tiny, grid, KernelKind::gaussian, cfg, {1, 2, 3, 4, 5}),
      doctest::Contains("support"), DataError);
}

}  // TEST_SUITE
