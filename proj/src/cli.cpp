#include "dgd/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include "dgd/analytic.hpp"
#include "dgd/gd.hpp"
#include "dgd/lagrange.hpp"
#include "dgd/montecarlo.hpp"

namespace dgd {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  return out;
}

struct SchemeOpts {
  std::string scheme = "lcc";
  int n_servers = 10;
  int comp_load = 2;
  int poly_count = 0;  // 0 -> implied by the scheme name
  double tolerance = 0.95;
};

const std::vector<std::string> kSchemeNames = {"lcc",    "lcc-mmc",   "lcc-mmc-2",
                                               "uc-mmc", "uc-mmc-pg", "gc"};

SchemeSpec to_spec(const SchemeOpts& o, const std::string& name) {
  SchemeSpec spec;
  spec.n_servers = o.n_servers;
  spec.comp_load = o.comp_load;
  if (name == "lcc") {
    spec.kind = SchemeKind::lcc;
    spec.poly_count = o.poly_count > 0 ? o.poly_count : o.comp_load;
  } else if (name == "lcc-mmc") {
    spec.kind = SchemeKind::lcc;
    spec.poly_count = 1;
  } else if (name == "lcc-mmc-2") {
    spec.kind = SchemeKind::lcc;
    spec.poly_count = 2;
  } else if (name == "uc-mmc") {
    spec.kind = SchemeKind::uc_mmc;
  } else if (name == "uc-mmc-pg") {
    spec.kind = SchemeKind::uc_mmc_pg;
    spec.tolerance_fraction = o.tolerance;
  } else if (name == "gc") {
    spec.kind = SchemeKind::gc_threshold;
  } else {
    throw std::invalid_argument("unknown scheme: " + name);
  }
  validate(spec);
  return spec;
}

void add_scheme_options(CLI::App* sub, SchemeOpts* o, bool single_scheme = true) {
  if (single_scheme) {
    sub->add_option("--scheme", o->scheme, "Scheme: lcc, lcc-mmc, lcc-mmc-2, uc-mmc, uc-mmc-pg, gc")
        ->check(CLI::IsMember(kSchemeNames))
        ->capture_default_str();
  }
  sub->add_option("-N,--n-servers", o->n_servers, "Number of servers (= data points)")
      ->capture_default_str();
  sub->add_option("-r,--comp-load", o->comp_load, "Computations per server per iteration")
      ->capture_default_str();
  sub->add_option("-L,--poly-count", o->poly_count,
                  "Polynomial count for scheme=lcc (default: L = r)");
  sub->add_option("--tolerance", o->tolerance, "Fraction of points required (uc-mmc-pg)")
      ->capture_default_str();
}

struct GridOpts {
  double start = 0.0;
  double stop = 0.0;  // 0 -> not set
  double step = 0.002;
};

void add_grid_options(CLI::App* sub, GridOpts* g) {
  sub->add_option("--t-start", g->start, "CDF grid start")->capture_default_str();
  sub->add_option("--t-stop", g->stop, "CDF grid stop");
  sub->add_option("--t-step", g->step, "CDF grid step")->capture_default_str();
}

std::vector<double> build_grid(const GridOpts& g) {
  if (!(g.step > 0.0) || !(g.stop >= g.start)) {
    throw std::invalid_argument("t grid: need t-step > 0 and t-stop >= t-start");
  }
  const int count = static_cast<int>((g.stop - g.start) / g.step) + 1;
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = g.start + i * g.step;
  return grid;
}

void write_stats_header(std::ofstream& out) {
  out << "scheme,N,r,L,mu,alpha,trials,seed,mean_time,mean_comm_load\n";
}

void write_stats_row(std::ofstream& out, const CompletionStats& stats,
                     const StragglerParams& params, std::uint64_t seed) {
  const SchemeSpec& s = stats.scheme;
  out << scheme_label(s) << ',' << s.n_servers << ',' << s.comp_load << ',' << s.poly_count
      << ',' << fmt(params.mu) << ',' << fmt(params.alpha) << ',' << stats.n_trials << ','
      << seed << ',' << fmt(stats.mean_time) << ',' << fmt(stats.mean_comm_load) << '\n';
}

void write_cdf(const std::string& path, const std::vector<std::pair<double, double>>& cdf) {
  auto out = open_output(path);
  out << "t,prob\n";
  for (const auto& [t, p] : cdf) out << fmt(t) << ',' << fmt(p) << '\n';
}

// Analytic Pr(T <= t) for one scheme: count-threshold enumeration for the
// LCC family, the server-threshold binomial for GC, and the brute-force
// coverage enumeration for UC kinds.
std::function<double(double)> analytic_cdf_fn(const SchemeSpec& spec,
                                              const StragglerParams& params) {
  switch (spec.kind) {
    case SchemeKind::lcc: {
      const UnitModel model = unit_model_for(spec);
      return [=](double t) { return count_threshold_cdf(t, model, params); };
    }
    case SchemeKind::gc_threshold: {
      const int k_th = spec.n_servers - spec.comp_load + 1;
      return [=, n = spec.n_servers, r = spec.comp_load](double t) {
        return server_threshold_cdf(t, n, r, k_th, params);
      };
    }
    case SchemeKind::uc_mmc:
    case SchemeKind::uc_mmc_pg: {
      const int target = coverage_target(spec);
      return [=, n = spec.n_servers, r = spec.comp_load](double t) {
        return coverage_cdf_bruteforce(t, n, r, target, params);
      };
    }
  }
  throw std::invalid_argument("analytic-cdf: unknown scheme kind");
}

double find_t_where_cdf_reaches(const std::function<double(double)>& cdf, double level,
                                double start) {
  double t = start;
  while (cdf(t) < level) t *= 2.0;
  return t;
}

int cmd_analytic_cdf(const SchemeSpec& spec, const StragglerParams& params, const GridOpts& g,
                     const std::string& out_path) {
  if (g.stop <= 0.0) throw std::invalid_argument("analytic-cdf: --t-stop is required");
  const auto cdf = analytic_cdf_fn(spec, params);
  auto out = open_output(out_path);
  out << "t,prob\n";
  for (double t : build_grid(g)) out << fmt(t) << ',' << fmt(cdf(t)) << '\n';
  return 0;
}

int cmd_simulate(const SchemeSpec& spec, const StragglerParams& params, std::int64_t trials,
                 std::uint64_t seed, const GridOpts& g, const std::string& out_path,
                 const std::string& cdf_path) {
  TrialConfig config{spec, params, trials, seed, {}};
  if (g.stop > 0.0) config.cdf_grid = build_grid(g);
  const CompletionStats stats = run_trials(config);
  auto out = open_output(out_path);
  write_stats_header(out);
  write_stats_row(out, stats, params, seed);
  if (!cdf_path.empty()) write_cdf(cdf_path, stats.cdf);
  return 0;
}

int cmd_sweep(const SchemeOpts& opts, const std::vector<std::string>& schemes,
              const std::vector<int>& r_list, const StragglerParams& params,
              std::int64_t trials, std::uint64_t seed, const std::string& out_path) {
  if (schemes.empty() || r_list.empty()) {
    throw std::invalid_argument("sweep: need at least one scheme and one r value");
  }
  auto out = open_output(out_path);
  write_stats_header(out);
  for (int r : r_list) {
    SchemeOpts o = opts;
    o.comp_load = r;
    std::vector<SchemeSpec> specs;
    specs.reserve(schemes.size());
    for (const auto& name : schemes) specs.push_back(to_spec(o, name));
    const auto all_stats = coupled_sweep(specs, params, trials, seed);
    for (const auto& stats : all_stats) write_stats_row(out, stats, params, seed);
  }
  return 0;
}

int cmd_dgd_run(const SchemeSpec& spec, const StragglerParams& params, int iters, int dim,
                double noise_std, double eta, std::uint64_t data_seed, std::uint64_t seed,
                const std::string& out_path) {
  auto [data, theta_star] = gen_synthetic(spec.n_servers, dim, noise_std, data_seed);
  GdConfig config;
  config.eta = eta > 0.0 ? eta : default_learning_rate(data);
  config.n_iters = iters;
  config.theta0 = Eigen::VectorXd::Zero(dim);
  const Trajectory traj = run_dgd(data, spec, params, config, seed);
  auto out = open_output(out_path);
  out << "iter,loss,completion_time,comm_load\n";
  for (int t = 1; t <= iters; ++t) {
    const IterationOutcome& it = traj.per_iter[t - 1];
    out << t << ',' << fmt(traj.losses[t]) << ',' << fmt(it.completion_time) << ','
        << it.comm_load << '\n';
  }
  return 0;
}

int cmd_validate(int n, int r, const StragglerParams& params, std::int64_t trials,
                 std::uint64_t seed, double t_step, const std::string& out_path) {
  SchemeOpts o;
  o.n_servers = n;
  o.comp_load = r;
  const SchemeSpec lcc = to_spec(o, "lcc");
  const SchemeSpec lcc_mmc = to_spec(o, "lcc-mmc");
  const SchemeSpec gc = to_spec(o, "gc");

  struct Check {
    SchemeSpec spec;
    std::string method;
    std::function<double(double)> cdf;
  };
  std::vector<Check> checks;
  checks.push_back({lcc, "count-threshold", analytic_cdf_fn(lcc, params)});
  checks.push_back({lcc, "server-threshold",
                    [=, k = 2 * ((n + r - 1) / r) - 1](double t) {
                      return server_threshold_cdf(t, n, r, k, params);
                    }});
  checks.push_back({lcc_mmc, "count-threshold", analytic_cdf_fn(lcc_mmc, params)});
  checks.push_back({gc, "server-threshold", analytic_cdf_fn(gc, params)});

  GridOpts g;
  g.step = t_step;
  for (const auto& check : checks) {
    g.stop = std::max(g.stop, find_t_where_cdf_reaches(check.cdf, 0.9999,
                                                       std::max(1.0 / params.mu, params.alpha)));
  }
  const std::vector<double> grid = build_grid(g);

  const std::vector<SchemeSpec> specs = {lcc, lcc_mmc, gc};
  const auto empirical = coupled_sweep(specs, params, trials, seed, grid);

  auto out = open_output(out_path);
  out << "scheme,analytic,sup_norm\n";
  for (const auto& check : checks) {
    const CompletionStats* emp = nullptr;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (specs[i].kind == check.spec.kind && specs[i].poly_count == check.spec.poly_count) {
        emp = &empirical[i];
      }
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sup = std::max(sup, std::abs(emp->cdf[i].second - check.cdf(grid[i])));
    }
    out << scheme_label(check.spec) << ',' << check.method << ',' << fmt(sup) << '\n';
    std::cout << scheme_label(check.spec) << " vs " << check.method << " analytic: sup-norm "
              << fmt(sup) << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Straggler-resilient distributed gradient descent: analytics, simulation, DGD"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file ([subcommand] sections, key=value)");

  StragglerParams params;
  SchemeOpts scheme_opts;
  GridOpts grid_opts;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string cdf_path;

  const auto add_common = [&](CLI::App* sub, bool with_scheme) {
    add_scheme_options(sub, &scheme_opts, with_scheme);
    sub->add_option("--mu", params.mu, "Exponential rate of the latency model")
        ->capture_default_str();
    sub->add_option("--alpha", params.alpha, "Minimum per-computation duration")
        ->capture_default_str();
    sub->add_option("-o,--out", out_path, "Output CSV path")->required();
  };

  CLI::App* analytic = app.add_subcommand("analytic-cdf", "Exact completion-time CDF");
  add_common(analytic, true);
  add_grid_options(analytic, &grid_opts);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo completion statistics");
  add_common(simulate, true);
  add_grid_options(simulate, &grid_opts);
  simulate->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
  simulate->add_option("--seed", seed, "Master seed")->capture_default_str();
  simulate->add_option("--cdf-out", cdf_path, "Also write the empirical CDF to this path");

  std::vector<std::string> sweep_schemes = {"lcc", "lcc-mmc", "uc-mmc", "gc"};
  std::vector<int> r_list;
  CLI::App* sweep = app.add_subcommand("sweep", "Coupled sweep over computation loads");
  add_common(sweep, false);
  sweep->add_option("--schemes", sweep_schemes, "Schemes to compare")
      ->delimiter(',')
      ->check(CLI::IsMember(kSchemeNames))
      ->capture_default_str();
  sweep->add_option("--r-list", r_list, "Computation loads to sweep")->delimiter(',')->required();
  sweep->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
  sweep->add_option("--seed", seed, "Master seed")->capture_default_str();

  int iters = 50;
  int dim = 5;
  double noise_std = 0.1;
  double eta = 0.0;
  std::uint64_t data_seed = 1;
  CLI::App* dgd = app.add_subcommand("dgd-run", "Distributed GD on synthetic least squares");
  add_common(dgd, true);
  dgd->add_option("--iters", iters, "GD iterations")->capture_default_str();
  dgd->add_option("--dim", dim, "Feature dimension d")->capture_default_str();
  dgd->add_option("--noise-std", noise_std, "Label noise standard deviation")
      ->capture_default_str();
  dgd->add_option("--eta", eta, "Learning rate (0 = 1/trace(X^T X))")->capture_default_str();
  dgd->add_option("--data-seed", data_seed, "Synthetic data seed")->capture_default_str();
  dgd->add_option("--seed", seed, "Master seed for the straggler draws")->capture_default_str();

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Analytic vs Monte Carlo CDF cross-check");
  add_common(validate_cmd, false);
  validate_cmd->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
  validate_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  validate_cmd->add_option("--t-step", grid_opts.step, "CDF grid step")->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analytic) {
      return cmd_analytic_cdf(to_spec(scheme_opts, scheme_opts.scheme), params, grid_opts,
                              out_path);
    }
    if (*simulate) {
      return cmd_simulate(to_spec(scheme_opts, scheme_opts.scheme), params, trials, seed,
                          grid_opts, out_path, cdf_path);
    }
    if (*sweep) {
      return cmd_sweep(scheme_opts, sweep_schemes, r_list, params, trials, seed, out_path);
    }
    if (*dgd) {
      return cmd_dgd_run(to_spec(scheme_opts, scheme_opts.scheme), params, iters, dim, noise_std,
                         eta, data_seed, seed, out_path);
    }
    if (*validate_cmd) {
      return cmd_validate(scheme_opts.n_servers, scheme_opts.comp_load, params, trials, seed,
                          grid_opts.step, out_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const EnumerationCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace dgd
