// command-line front end: fit / bootstrap / pfit / cv / simulate / bench
//
// Every output file embeds (JSON) or is accompanied by (CSV sidecar) a run
// manifest: command, fully resolved config, seed, version, per-phase timings.
// Exit codes: 0 ok, 1 usage, 2 data error, 3 solver non-convergence.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "scqr/bootstrap.hpp"
#include "scqr/cross_validation.hpp"
#include "scqr/io.hpp"
#include "scqr/parallel.hpp"
#include "scqr/penalized.hpp"
#include "scqr/simulation.hpp"
#include "scqr/version.hpp"

using nlohmann::json;
using namespace scqr;

namespace {

struct Shared {
  bool quiet = false;
  int threads = 1;
  std::uint64_t seed = 1;
};

void warn(const Shared& g, const std::string& msg) {
  if (!g.quiet) std::cerr << "warning: " << msg << "\n";
}

void note(const Shared& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    const auto t = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(t - t0).count();
    t0 = t;
    return s;
  }
};

json vec_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json mat_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

json index_json(const std::vector<Eigen::Index>& idx) {
  json out = json::array();
  for (Eigen::Index j : idx) out.push_back(static_cast<long long>(j));
  return out;
}

json manifest_json(const Shared& g, const std::string& command, json config,
                   const json& timings) {
  config["threads"] = g.threads;
  config["quiet"] = g.quiet;
  return json{{"command", command},
              {"config", std::move(config)},
              {"seed", g.seed},
              {"version", version},
              {"timings", timings}};
}

void emit_json(const Shared& g, const std::string& path, const json& manifest,
               const json& result) {
  const json doc{{"manifest", manifest}, {"result", result}};
  atomic_write(path, doc.dump(2) + "\n");
  note(g, "wrote " + path);
}

// ---------- shared flag groups ----------

struct DataFlags {
  std::string path;
  std::string y_col = "y";
  std::string status_col = "status";
};

struct GridFlags {
  double tau_min = 0.05;
  double tau_max = 0.8;
  double tau_step = 0.05;
};

void add_data_flags(CLI::App* sub, DataFlags& df) {
  sub->add_option("--data", df.path, "input CSV with a header row")->required();
  sub->add_option("--y-col", df.y_col, "response column name");
  sub->add_option("--status-col", df.status_col, "0/1 event indicator column name");
}

void add_grid_flags(CLI::App* sub, GridFlags& gf) {
  sub->add_option("--tau-min", gf.tau_min, "lowest quantile level");
  sub->add_option("--tau-max", gf.tau_max, "highest quantile level");
  sub->add_option("--tau-step", gf.tau_step, "grid spacing");
}

const std::vector<std::string> kernel_names{"gaussian", "uniform", "logistic", "epanechnikov",
                                            "triangular"};

LoadedDataset load_with_warnings(const Shared& g, const DataFlags& df) {
  LoadedDataset ld = load_dataset(df.path, df.y_col, df.status_col);
  for (const std::string& name : ld.constant_columns)
    warn(g, "covariate '" + name + "' is constant; its coefficient is not identified");
  return ld;
}

QuantileGrid build_grid(const Shared& g, const GridFlags& gf, Eigen::Index n) {
  const QuantileGrid grid = make_uniform_grid(gf.tau_min, gf.tau_max, gf.tau_step);
  const double limit = 5.0 / std::sqrt(static_cast<double>(n));
  if (grid.size() > 1 && grid.max_spacing() > limit) {
    std::ostringstream os;
    os << "grid spacing " << grid.max_spacing() << " exceeds 5/sqrt(n) = " << limit
       << "; the process approximation may be coarse";
    warn(g, os.str());
  }
  return grid;
}

SolverConfig solver_config(double bandwidth, bool high_dim) {
  SolverConfig cfg;
  if (bandwidth > 0.0) {
    cfg.bandwidth_rule = BandwidthRule::explicit_value;
    cfg.bandwidth = bandwidth;
  } else {
    cfg.bandwidth_rule = high_dim ? BandwidthRule::high_dim : BandwidthRule::low_dim;
  }
  return cfg;
}

void warn_censored_mass(const Shared& g, const FitStats& stats) {
  if (stats.censored_below_tau_min > 0.0) {
    std::ostringstream os;
    os << "fraction " << stats.censored_below_tau_min
       << " of the sample is censored at or below the fitted tau-min plane; estimates near "
          "tau-min may be biased";
    warn(g, os.str());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// ---------- subcommands ----------

struct FitArgs {
  DataFlags data;
  GridFlags grid;
  std::string kernel = "gaussian";
  double bandwidth = 0.0;  // 0 = rule default
  std::string out;
  std::string out_csv;
};

void run_fit(const Shared& g, const FitArgs& a) {
  Stopwatch watch;
  const LoadedDataset ld = load_with_warnings(g, a.data);
  const double load_s = watch.lap();

  const QuantileGrid grid = build_grid(g, a.grid, ld.data.n());
  const KernelKind kernel = parse_kernel(a.kernel);
  const SolverConfig cfg = solver_config(a.bandwidth, false);
  const double h = resolve_bandwidth(cfg, ld.data.n(), ld.data.p());

  FitStats stats;
  const CoefficientProcess proc = fit_process(ld.data, grid, kernel, cfg, &stats);
  warn_censored_mass(g, stats);
  const double fit_s = watch.lap();

  const json config{{"data", a.data.path},      {"y_col", a.data.y_col},
                    {"status_col", a.data.status_col},
                    {"tau_min", a.grid.tau_min}, {"tau_max", a.grid.tau_max},
                    {"tau_step", a.grid.tau_step}, {"kernel", a.kernel},
                    {"bandwidth", h},            {"out", a.out}};
  const json manifest = manifest_json(g, "fit", config,
                                      json{{"load_s", load_s}, {"fit_s", fit_s}});

  json result{{"taus", vec_json(grid.taus())},
              {"betas", mat_json(proc.betas)},
              {"kernel", a.kernel},
              {"bandwidth", h},
              {"n", ld.data.n()},
              {"p", ld.data.p()},
              {"n_events", ld.data.n_events()},
              {"censoring_rate", ld.data.censoring_rate()},
              {"covariates", ld.covariate_names},
              {"diagnostics",
               json{{"censored_below_tau_min", stats.censored_below_tau_min},
                    {"total_iterations", stats.total_iterations},
                    {"max_grad_inf", stats.max_grad_inf}}}};
  emit_json(g, a.out, manifest, result);
  if (!a.out_csv.empty()) {
    save_process_csv(a.out_csv, proc);
    note(g, "wrote " + a.out_csv);
  }
}

struct BootArgs {
  DataFlags data;
  GridFlags grid;
  std::string kernel = "gaussian";
  double bandwidth = 0.0;
  int B = 1000;
  std::string scheme = "rademacher";
  double tau = 0.5;
  double level = 0.95;
  std::string ci = "all";
  std::string out;
};

void run_boot(const Shared& g, const BootArgs& a) {
  Stopwatch watch;
  const LoadedDataset ld = load_with_warnings(g, a.data);
  const double load_s = watch.lap();

  const QuantileGrid grid = build_grid(g, a.grid, ld.data.n());
  const KernelKind kernel = parse_kernel(a.kernel);
  const SolverConfig cfg = solver_config(a.bandwidth, false);
  const double h = resolve_bandwidth(cfg, ld.data.n(), ld.data.p());

  FitStats stats;
  const CoefficientProcess proc = fit_process(ld.data, grid, kernel, cfg, &stats);
  warn_censored_mass(g, stats);
  const double fit_s = watch.lap();

  const BootstrapResult boot = run_bootstrap(ld.data, grid, kernel, cfg,
                                             parse_weight_scheme(a.scheme), a.B, g.seed,
                                             g.threads);
  if (boot.n_failed > 0) {
    std::ostringstream os;
    os << boot.n_failed << " of " << a.B << " bootstrap replicates failed to converge and "
       << "were excluded";
    warn(g, os.str());
  }
  const double boot_s = watch.lap();

  const Eigen::Index k = grid.locate(a.tau);
  const Eigen::VectorXd point = proc.betas.row(k).transpose();

  // replicate standard deviation per coefficient at the requested level
  Eigen::VectorXd sd = Eigen::VectorXd::Zero(ld.data.p());
  if (boot.replicates.size() >= 2) {
    for (Eigen::Index j = 0; j < ld.data.p(); ++j) {
      double mean = 0.0;
      for (const auto& rep : boot.replicates) mean += rep(k, j);
      mean /= static_cast<double>(boot.replicates.size());
      double ss = 0.0;
      for (const auto& rep : boot.replicates) {
        const double dev = rep(k, j) - mean;
        ss += dev * dev;
      }
      sd(j) = std::sqrt(ss / static_cast<double>(boot.replicates.size() - 1));
    }
  }

  json ci_out = json::object();
  const auto add_band = [&](const char* name, CiType type) {
    const CiBand band = confidence_intervals(proc, boot, a.tau, a.level, type);
    ci_out[name] = json{{"lower", vec_json(band.lower)}, {"upper", vec_json(band.upper)}};
  };
  if (a.ci == "all" || a.ci == "percentile") add_band("percentile", CiType::percentile);
  if (a.ci == "all" || a.ci == "pivotal") add_band("pivotal", CiType::pivotal);
  if (a.ci == "all" || a.ci == "normal") add_band("normal", CiType::normal);

  const json config{{"data", a.data.path},       {"y_col", a.data.y_col},
                    {"status_col", a.data.status_col},
                    {"tau_min", a.grid.tau_min},  {"tau_max", a.grid.tau_max},
                    {"tau_step", a.grid.tau_step}, {"kernel", a.kernel},
                    {"bandwidth", h},             {"B", a.B},
                    {"scheme", a.scheme},         {"tau", a.tau},
                    {"level", a.level},           {"ci", a.ci},
                    {"out", a.out}};
  const json manifest = manifest_json(
      g, "bootstrap", config,
      json{{"load_s", load_s}, {"fit_s", fit_s}, {"bootstrap_s", boot_s}});

  const json result{{"tau", a.tau},
                    {"level", a.level},
                    {"point", vec_json(point)},
                    {"sd", vec_json(sd)},
                    {"ci", ci_out},
                    {"B", a.B},
                    {"n_replicates", static_cast<int>(boot.replicates.size())},
                    {"n_failed", boot.n_failed},
                    {"n_regenerated", boot.n_regenerated}};
  emit_json(g, a.out, manifest, result);
}

struct PfitArgs {
  DataFlags data;
  GridFlags grid;
  std::string kernel = "gaussian";
  double bandwidth = 0.0;
  std::string penalty = "lasso";
  double a_param = 0.0;  // 0 = penalty default
  int lla_steps = 1;
  double lambda0 = 0.0;
  bool refit = false;
  std::string out;
};

void run_pfit(const Shared& g, const PfitArgs& a) {
  Stopwatch watch;
  const LoadedDataset ld = load_with_warnings(g, a.data);
  const double load_s = watch.lap();

  const QuantileGrid grid = build_grid(g, a.grid, ld.data.n());
  const KernelKind kernel = parse_kernel(a.kernel);
  const SolverConfig scfg = solver_config(a.bandwidth, true);
  const double h = resolve_bandwidth(scfg, ld.data.n(), ld.data.p());

  PenaltyConfig pen;
  pen.kind = parse_penalty(a.penalty);
  pen.a = a.a_param > 0.0 ? a.a_param : default_concavity(pen.kind);
  pen.lla_steps = a.lla_steps;

  const PenalizedFit fit = fit_penalized_process(ld.data, grid, kernel, h, pen, a.lambda0);
  const double fit_s = watch.lap();

  json supports = json::array();
  for (const auto& s : fit.supports) supports.push_back(index_json(s));

  json result{{"taus", vec_json(grid.taus())},
              {"betas", mat_json(fit.process.betas)},
              {"lambda0", a.lambda0},
              {"lambdas", vec_json(fit.lambdas)},
              {"supports", supports},
              {"union_support", index_json(fit.union_support)},
              {"penalty", a.penalty},
              {"a", pen.a},
              {"lla_steps", pen.lla_steps},
              {"bandwidth", h},
              {"kernel", a.kernel},
              {"n", ld.data.n()},
              {"p", ld.data.p()}};

  if (a.refit) {
    SolverConfig rcfg;  // low-dim rule: the refit lives on the reduced support
    const CoefficientProcess refit =
        refit_on_support(ld.data, grid, kernel, rcfg, fit.union_support);
    result["refit_betas"] = mat_json(refit.betas);
  }
  const double refit_s = watch.lap();

  const json config{{"data", a.data.path},        {"y_col", a.data.y_col},
                    {"status_col", a.data.status_col},
                    {"tau_min", a.grid.tau_min},   {"tau_max", a.grid.tau_max},
                    {"tau_step", a.grid.tau_step}, {"kernel", a.kernel},
                    {"bandwidth", h},              {"penalty", a.penalty},
                    {"a", pen.a},                  {"lla_steps", pen.lla_steps},
                    {"lambda0", a.lambda0},        {"refit", a.refit},
                    {"out", a.out}};
  const json manifest = manifest_json(
      g, "pfit", config, json{{"load_s", load_s}, {"fit_s", fit_s}, {"refit_s", refit_s}});
  emit_json(g, a.out, manifest, result);
}

struct CvArgs {
  DataFlags data;
  GridFlags grid;
  std::string kernel = "gaussian";
  double bandwidth = 0.0;
  std::string penalty = "lasso";
  double a_param = 0.0;
  int lla_steps = 1;
  double lambda_min = 0.01;
  double lambda_max = 0.2;
  int lambda_count = 50;
  int folds = 3;
  std::string out;
};

void run_cv(const Shared& g, const CvArgs& a) {
  Stopwatch watch;
  const LoadedDataset ld = load_with_warnings(g, a.data);
  const double load_s = watch.lap();

  const QuantileGrid grid = build_grid(g, a.grid, ld.data.n());
  const KernelKind kernel = parse_kernel(a.kernel);
  const SolverConfig scfg = solver_config(a.bandwidth, true);
  const double h = resolve_bandwidth(scfg, ld.data.n(), ld.data.p());

  PenaltyConfig pen;
  pen.kind = parse_penalty(a.penalty);
  pen.a = a.a_param > 0.0 ? a.a_param : default_concavity(pen.kind);
  pen.lla_steps = a.lla_steps;

  CvConfig cv;
  cv.folds = a.folds;
  cv.lambda0_grid = default_lambda0_grid(a.lambda_count, a.lambda_min, a.lambda_max);
  cv.seed = g.seed;
  cv.n_threads = g.threads;

  const CvResult res = cv_select_lambda0(ld.data, grid, kernel, h, pen, cv);
  const double cv_s = watch.lap();

  json fold_sizes = json::array();
  for (Eigen::Index s : res.fold_sizes) fold_sizes.push_back(static_cast<long long>(s));

  const json config{{"data", a.data.path},          {"y_col", a.data.y_col},
                    {"status_col", a.data.status_col},
                    {"tau_min", a.grid.tau_min},     {"tau_max", a.grid.tau_max},
                    {"tau_step", a.grid.tau_step},   {"kernel", a.kernel},
                    {"bandwidth", h},                {"penalty", a.penalty},
                    {"a", pen.a},                    {"lla_steps", pen.lla_steps},
                    {"lambda_min", a.lambda_min},    {"lambda_max", a.lambda_max},
                    {"lambda_count", a.lambda_count}, {"folds", a.folds},
                    {"out", a.out}};
  const json manifest =
      manifest_json(g, "cv", config, json{{"load_s", load_s}, {"cv_s", cv_s}});

  const json result{{"lambda0", res.lambda0},
                    {"winner_index", res.winner_index},
                    {"candidates", vec_json(res.candidates)},
                    {"mean_score", vec_json(res.mean_score)},
                    {"sd_score", vec_json(res.sd_score)},
                    {"fold_sizes", fold_sizes}};
  emit_json(g, a.out, manifest, result);
}

struct SimArgs {
  std::string model = "homo";
  long long n = 100;
  long long p = 10;
  std::string covariates = "ar";
  long long sparsity = 0;
  std::string censoring = "mixture";
  std::string out;
  std::string truth_out;
};

void run_simulate(const Shared& g, const SimArgs& a) {
  Stopwatch watch;
  SimDesign design;
  design.model = a.model == "hetero" ? ModelKind::heteroscedastic : ModelKind::homoscedastic;
  design.n = a.n;
  design.p = a.p;
  design.covariates =
      a.covariates == "mixed" ? CovariateScheme::mixed_blocks : CovariateScheme::gaussian_ar;
  design.sparsity = a.sparsity;
  design.censoring = a.censoring == "none" ? CensoringKind::none : CensoringKind::mixture;
  design.seed = g.seed;

  const SimData sim = gen_dataset(design);
  if (sim.covariate_fallback)
    warn(g, "mixed covariate blocks need p = 100; fell back to the AR design");
  const double gen_s = watch.lap();

  const json config{{"model", a.model},         {"n", a.n},
                    {"p", a.p},                 {"covariates", a.covariates},
                    {"sparsity", a.sparsity},   {"censoring", a.censoring},
                    {"out", a.out},             {"truth_out", a.truth_out}};
  const json manifest =
      manifest_json(g, "simulate", config, json{{"generate_s", gen_s}});

  save_dataset_csv(a.out, sim.data);
  note(g, "wrote " + a.out);
  atomic_write(a.out + ".manifest.json", manifest.dump(2) + "\n");

  if (!a.truth_out.empty()) {
    const json truth{{"model", a.model},
                     {"gamma", vec_json(sim.truth.gamma)},
                     {"support", index_json(sim.truth.support())},
                     {"censoring_rate", sim.censoring_rate},
                     {"covariate_fallback", sim.covariate_fallback},
                     {"n", a.n},
                     {"p", a.p}};
    emit_json(g, a.truth_out, manifest, truth);
  }
}

struct BenchArgs {
  std::string experiment;
  int reps = 20;
  long long n = 0;  // 0 = experiment default
  long long p = 0;
  int B = 200;
  long long sparsity = 5;
  int folds = 3;
  int lambda_count = 15;
  double tau = 0.5;
  double level = 0.95;
  std::string out;
};

void bench_fit_process(const Shared& g, const BenchArgs& a, std::vector<std::string>& rows,
                       std::string& header) {
  const Eigen::Index n = a.n > 0 ? a.n : 500;
  const Eigen::Index p = a.p > 0 ? a.p : 10;
  header = "rep,seed,n,p,censoring_rate,avg_l2,sup_l2,err_tau_0.3,err_tau_0.8";
  rows.assign(a.reps, {});
  const QuantileGrid grid = make_uniform_grid(0.05, 0.8, 0.05);
  parallel_for(static_cast<std::size_t>(a.reps), g.threads, [&](std::size_t r) {
    SimDesign design;
    design.n = n;
    design.p = p;
    design.seed = g.seed + r;
    const SimData sim = gen_dataset(design);
    SolverConfig cfg;
    const CoefficientProcess proc = fit_process(sim.data, grid, KernelKind::gaussian, cfg);
    const Eigen::MatrixXd truth = sim.truth.on_grid(grid);
    const SelectionMetrics m = metrics(proc, truth, {}, {});
    const double e3 = (proc.eval(0.3) - sim.truth.beta_star(0.3)).norm();
    const double e8 = (proc.eval(0.8) - sim.truth.beta_star(0.8)).norm();
    std::ostringstream os;
    os << r << ',' << design.seed << ',' << n << ',' << p << ','
       << format_double(sim.censoring_rate) << ',' << format_double(m.avg_l2) << ','
       << format_double(m.sup_l2) << ',' << format_double(e3) << ',' << format_double(e8);
    rows[r] = os.str();
  });
}

void bench_coverage(const Shared& g, const BenchArgs& a, std::vector<std::string>& rows,
                    std::string& header) {
  const Eigen::Index n = a.n > 0 ? a.n : 800;
  const Eigen::Index p = a.p > 0 ? a.p : 5;
  {
    std::ostringstream os;
    os << "rep,seed,n_failed";
    for (Eigen::Index j = 0; j <= p; ++j)
      os << ",pct_" << j << ",piv_" << j << ",nrm_" << j;
    header = os.str();
  }
  rows.assign(a.reps, {});
  // fine spacing keeps the hazard-discretization bias of the intercept small
  // relative to its standard error at coverage-study sample sizes
  const QuantileGrid grid = make_uniform_grid(0.05, a.tau, 0.015);
  parallel_for(static_cast<std::size_t>(a.reps), g.threads, [&](std::size_t r) {
    SimDesign design;
    design.n = n;
    design.p = p;
    design.sparsity = 0;
    design.seed = 2 * (g.seed + r);
    const SimData sim = gen_dataset(design);
    SolverConfig cfg;
    const CoefficientProcess proc = fit_process(sim.data, grid, KernelKind::gaussian, cfg);
    const BootstrapResult boot =
        run_bootstrap(sim.data, grid, KernelKind::gaussian, cfg, WeightScheme::rademacher,
                      a.B, 2 * (g.seed + r) + 1, 1);
    const Eigen::VectorXd target = sim.truth.beta_star(a.tau);
    std::ostringstream os;
    os << r << ',' << design.seed << ',' << boot.n_failed;
    const CiBand pct = confidence_intervals(proc, boot, a.tau, a.level, CiType::percentile);
    const CiBand piv = confidence_intervals(proc, boot, a.tau, a.level, CiType::pivotal);
    const CiBand nrm = confidence_intervals(proc, boot, a.tau, a.level, CiType::normal);
    for (Eigen::Index j = 0; j <= p; ++j) {
      const auto hit = [&](const CiBand& b) {
        return b.lower(j) <= target(j) && target(j) <= b.upper(j) ? 1 : 0;
      };
      os << ',' << hit(pct) << ',' << hit(piv) << ',' << hit(nrm);
    }
    rows[r] = os.str();
  });
}

void bench_penalized_selection(const Shared& g, const BenchArgs& a,
                               std::vector<std::string>& rows, std::string& header) {
  const Eigen::Index n = a.n > 0 ? a.n : 300;
  const Eigen::Index p = a.p > 0 ? a.p : 800;
  header = "rep,seed,penalty,lambda0,tpr,fdr,support_size";
  const std::vector<PenaltyKind> kinds{PenaltyKind::lasso, PenaltyKind::scad, PenaltyKind::mcp};
  rows.assign(static_cast<std::size_t>(a.reps) * kinds.size(), {});
  const QuantileGrid grid({0.3, 0.4, 0.5});
  parallel_for(static_cast<std::size_t>(a.reps), g.threads, [&](std::size_t r) {
    SimDesign design;
    design.n = n;
    design.p = p;
    design.sparsity = a.sparsity;
    design.seed = g.seed + r;
    const SimData sim = gen_dataset(design);
    SolverConfig scfg;
    scfg.bandwidth_rule = BandwidthRule::high_dim;
    const double h = resolve_bandwidth(scfg, sim.data.n(), sim.data.p());
    const std::vector<Eigen::Index> truth = sim.truth.support();

    for (std::size_t kidx = 0; kidx < kinds.size(); ++kidx) {
      PenaltyConfig pen;
      pen.kind = kinds[kidx];
      pen.a = default_concavity(pen.kind);
      CvConfig cv;
      cv.folds = a.folds;
      cv.lambda0_grid = default_lambda0_grid(a.lambda_count, 0.01, 0.2);
      cv.seed = g.seed + r;
      const CvResult sel =
          cv_select_lambda0(sim.data, grid, KernelKind::gaussian, h, pen, cv);
      const PenalizedFit fit =
          fit_penalized_process(sim.data, grid, KernelKind::gaussian, h, pen, sel.lambda0);

      std::vector<Eigen::Index> est;
      for (Eigen::Index j : fit.union_support)
        if (j != 0) est.push_back(j);
      const SelectionMetrics m =
          metrics(fit.process, sim.truth.on_grid(grid), truth, est);
      std::ostringstream os;
      os << r << ',' << design.seed << ',' << penalty_name(pen.kind) << ','
         << format_double(sel.lambda0) << ',' << format_double(m.tpr) << ','
         << format_double(m.fdr) << ',' << est.size();
      rows[r * kinds.size() + kidx] = os.str();
    }
  });
}

void run_bench(const Shared& g, const BenchArgs& a) {
  Stopwatch watch;
  std::vector<std::string> rows;
  std::string header;
  if (a.experiment == "fit-process") {
    bench_fit_process(g, a, rows, header);
  } else if (a.experiment == "coverage") {
    bench_coverage(g, a, rows, header);
  } else {
    bench_penalized_selection(g, a, rows, header);
  }
  const double run_s = watch.lap();

  std::ostringstream csv;
  csv << header << '\n';
  for (const std::string& row : rows) csv << row << '\n';
  atomic_write(a.out, csv.str());
  note(g, "wrote " + a.out);

  const json config{{"experiment", a.experiment}, {"reps", a.reps},
                    {"n", a.n},                   {"p", a.p},
                    {"B", a.B},                   {"sparsity", a.sparsity},
                    {"folds", a.folds},           {"lambda_count", a.lambda_count},
                    {"tau", a.tau},               {"level", a.level},
                    {"out", a.out}};
  const json manifest = manifest_json(g, "bench", config, json{{"run_s", run_s}});
  atomic_write(a.out + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smoothed sequential estimating equations for censored quantile regression"};
  app.require_subcommand(1);

  Shared g;
  app.add_flag("--quiet", g.quiet, "suppress warnings and progress notes");
  app.add_option("--threads", g.threads, "worker threads for bootstrap / cv / bench")
      ->check(CLI::Range(1, 4096));
  app.add_option("--seed", g.seed, "master RNG seed");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit the coefficient process on a quantile grid");
  fit->fallthrough();
  add_data_flags(fit, fit_args.data);
  add_grid_flags(fit, fit_args.grid);
  fit->add_option("--kernel", fit_args.kernel)->check(CLI::IsMember(kernel_names));
  fit->add_option("--bandwidth", fit_args.bandwidth, "0 = rule default")->check(CLI::NonNegativeNumber);
  fit->add_option("--out", fit_args.out, "output JSON")->required();
  fit->add_option("--out-csv", fit_args.out_csv, "also write the process as CSV");

  BootArgs boot_args;
  CLI::App* boot = app.add_subcommand("bootstrap", "multiplier bootstrap confidence intervals");
  boot->fallthrough();
  add_data_flags(boot, boot_args.data);
  add_grid_flags(boot, boot_args.grid);
  boot->add_option("--kernel", boot_args.kernel)->check(CLI::IsMember(kernel_names));
  boot->add_option("--bandwidth", boot_args.bandwidth, "0 = rule default")->check(CLI::NonNegativeNumber);
  boot->add_option("--B", boot_args.B, "bootstrap replicates")->check(CLI::PositiveNumber);
  boot->add_option("--scheme", boot_args.scheme)
      ->check(CLI::IsMember({"multinomial", "exponential", "rademacher"}));
  boot->add_option("--tau", boot_args.tau, "level at which to report intervals");
  boot->add_option("--level", boot_args.level, "confidence level");
  boot->add_option("--ci", boot_args.ci)
      ->check(CLI::IsMember({"all", "percentile", "pivotal", "normal"}));
  boot->add_option("--out", boot_args.out, "output JSON")->required();

  PfitArgs pfit_args;
  CLI::App* pfit = app.add_subcommand("pfit", "penalized process fit");
  pfit->fallthrough();
  add_data_flags(pfit, pfit_args.data);
  add_grid_flags(pfit, pfit_args.grid);
  pfit->add_option("--kernel", pfit_args.kernel)->check(CLI::IsMember(kernel_names));
  pfit->add_option("--bandwidth", pfit_args.bandwidth, "0 = rule default")->check(CLI::NonNegativeNumber);
  pfit->add_option("--penalty", pfit_args.penalty)
      ->check(CLI::IsMember({"lasso", "alasso", "scad", "mcp"}));
  pfit->add_option("--a", pfit_args.a_param, "concavity parameter; 0 = penalty default");
  pfit->add_option("--lla-steps", pfit_args.lla_steps)->check(CLI::NonNegativeNumber);
  pfit->add_option("--lambda0", pfit_args.lambda0, "base penalty level")->required();
  pfit->add_flag("--refit", pfit_args.refit, "unpenalized refit on the union support");
  pfit->add_option("--out", pfit_args.out, "output JSON")->required();

  CvArgs cv_args;
  CLI::App* cv = app.add_subcommand("cv", "cross-validate the penalty level lambda0");
  cv->fallthrough();
  add_data_flags(cv, cv_args.data);
  add_grid_flags(cv, cv_args.grid);
  cv->add_option("--kernel", cv_args.kernel)->check(CLI::IsMember(kernel_names));
  cv->add_option("--bandwidth", cv_args.bandwidth, "0 = rule default")->check(CLI::NonNegativeNumber);
  cv->add_option("--penalty", cv_args.penalty)
      ->check(CLI::IsMember({"lasso", "alasso", "scad", "mcp"}));
  cv->add_option("--a", cv_args.a_param, "concavity parameter; 0 = penalty default");
  cv->add_option("--lla-steps", cv_args.lla_steps)->check(CLI::NonNegativeNumber);
  cv->add_option("--lambda-min", cv_args.lambda_min)->check(CLI::PositiveNumber);
  cv->add_option("--lambda-max", cv_args.lambda_max)->check(CLI::PositiveNumber);
  cv->add_option("--lambda-count", cv_args.lambda_count)->check(CLI::PositiveNumber);
  cv->add_option("--folds", cv_args.folds)->check(CLI::PositiveNumber);
  cv->add_option("--out", cv_args.out, "output JSON")->required();

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "generate a synthetic censored dataset");
  sim->fallthrough();
  sim->add_option("--model", sim_args.model)->check(CLI::IsMember({"homo", "hetero"}));
  sim->add_option("--n", sim_args.n)->check(CLI::PositiveNumber);
  sim->add_option("--p", sim_args.p)->check(CLI::PositiveNumber);
  sim->add_option("--covariates", sim_args.covariates)->check(CLI::IsMember({"ar", "mixed"}));
  sim->add_option("--sparsity", sim_args.sparsity)->check(CLI::NonNegativeNumber);
  sim->add_option("--censoring", sim_args.censoring)->check(CLI::IsMember({"none", "mixture"}));
  sim->add_option("--out", sim_args.out, "output CSV")->required();
  sim->add_option("--truth-out", sim_args.truth_out, "JSON with the generating process");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "run a named benchmark experiment");
  bench->fallthrough();
  bench->add_option("--experiment", bench_args.experiment)
      ->check(CLI::IsMember({"fit-process", "coverage", "penalized-selection"}))
      ->required();
  bench->add_option("--reps", bench_args.reps)->check(CLI::PositiveNumber);
  bench->add_option("--n", bench_args.n)->check(CLI::NonNegativeNumber);
  bench->add_option("--p", bench_args.p)->check(CLI::NonNegativeNumber);
  bench->add_option("--B", bench_args.B)->check(CLI::PositiveNumber);
  bench->add_option("--sparsity", bench_args.sparsity)->check(CLI::NonNegativeNumber);
  bench->add_option("--folds", bench_args.folds)->check(CLI::PositiveNumber);
  bench->add_option("--lambda-count", bench_args.lambda_count)->check(CLI::PositiveNumber);
  bench->add_option("--tau", bench_args.tau);
  bench->add_option("--level", bench_args.level);
  bench->add_option("--out", bench_args.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*fit) run_fit(g, fit_args);
    if (*boot) run_boot(g, boot_args);
    if (*pfit) run_pfit(g, pfit_args);
    if (*cv) run_cv(g, cv_args);
    if (*sim) run_simulate(g, sim_args);
    if (*bench) run_bench(g, bench_args);
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
