#include "dgd/montecarlo.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "dgd/uncoded.hpp"

namespace dgd {

namespace {

struct Accumulator {
  std::vector<double> times;
  double time_sum = 0.0;
  double comm_sum = 0.0;

  void add(const IterationOutcome& out) {
    times.push_back(out.completion_time);
    time_sum += out.completion_time;
    comm_sum += static_cast<double>(out.comm_load);
  }

  CompletionStats finish(const SchemeSpec& spec, std::span<const double> grid) && {
    CompletionStats stats;
    stats.scheme = spec;
    stats.n_trials = static_cast<std::int64_t>(times.size());
    stats.mean_time = time_sum / static_cast<double>(times.size());
    stats.mean_comm_load = comm_sum / static_cast<double>(times.size());
    std::sort(times.begin(), times.end());
    const auto prob_at = [&](double t) {
      const auto it = std::upper_bound(times.begin(), times.end(), t);
      return static_cast<double>(it - times.begin()) / static_cast<double>(times.size());
    };
    if (!grid.empty()) {
      stats.cdf.reserve(grid.size());
      for (double t : grid) stats.cdf.emplace_back(t, prob_at(t));
    } else {
      // Quantile grid from the sample itself, duplicates collapsed.
      const std::size_t points = std::min<std::size_t>(times.size(), 101);
      for (std::size_t k = 0; k < points; ++k) {
        const double t = times[k * (times.size() - 1) / (points > 1 ? points - 1 : 1)];
        if (!stats.cdf.empty() && stats.cdf.back().first == t) continue;
        stats.cdf.emplace_back(t, prob_at(t));
      }
    }
    return stats;
  }
};

}  // namespace

std::vector<ServerDraw> sample_draws(const StragglerParams& params, int n_servers,
                                     std::uint64_t master_seed, std::int64_t trial) {
  std::vector<ServerDraw> draws(n_servers);
  const std::uint64_t trial_seed = Rng::derive(master_seed, static_cast<std::uint64_t>(trial));
  for (int i = 0; i < n_servers; ++i) {
    Rng rng(Rng::derive(trial_seed, static_cast<std::uint64_t>(i)));
    draws[i] = sample_server(params, rng);
  }
  return draws;
}

IterationOutcome simulate_iteration(const SchemeSpec& spec, const StragglerParams& params,
                                    std::span<const ServerDraw> draws) {
  if (static_cast<int>(draws.size()) != spec.n_servers) {
    throw std::invalid_argument("simulate_iteration: draws length must equal n_servers");
  }
  const int n = spec.n_servers;
  const int cost = unit_cost(spec);
  const int max_units = max_messages_per_server(spec);
  const auto threshold = message_threshold(spec);

  AssignmentMatrix assign;
  std::vector<bool> covered;
  int cov = 0;
  int target = 0;
  if (!threshold) {
    assign = circular_assignment(n, spec.comp_load);
    covered.assign(n, false);
    target = coverage_target(spec);
  }

  std::vector<double> period(n);
  using Event = std::tuple<double, int, int>;  // (time, server, message index)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> pending;
  for (int i = 0; i < n; ++i) {
    period[i] = cost * (params.alpha + draws[i].y);
    pending.emplace(period[i], i, 1);
  }

  IterationOutcome out;
  out.per_server_units.assign(n, 0);
  while (!pending.empty()) {
    const auto [t, server, msg] = pending.top();
    pending.pop();
    out.per_server_units[server] = msg;
    ++out.comm_load;

    bool done = false;
    if (threshold) {
      done = out.comm_load >= *threshold;
    } else {
      const int point = assign.at(msg - 1, server);
      if (!covered[point]) {
        covered[point] = true;
        done = ++cov >= target;
      }
    }
    if (done) {
      out.completion_time = t;
      return out;
    }
    if (msg < max_units) {
      pending.emplace(static_cast<double>(msg + 1) * period[server], server, msg + 1);
    }
  }
  throw std::logic_error("simulate_iteration: completion rule never satisfied");
}

CompletionStats run_trials(const TrialConfig& config) {
  validate(config.spec);
  validate(config.params);
  if (config.n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");

  Accumulator acc;
  acc.times.reserve(static_cast<std::size_t>(config.n_trials));
  for (std::int64_t trial = 0; trial < config.n_trials; ++trial) {
    const auto draws =
        sample_draws(config.params, config.spec.n_servers, config.master_seed, trial);
    acc.add(simulate_iteration(config.spec, config.params, draws));
  }
  return std::move(acc).finish(config.spec, config.cdf_grid);
}

std::vector<CompletionStats> coupled_sweep(std::span<const SchemeSpec> specs,
                                           const StragglerParams& params,
                                           std::int64_t n_trials, std::uint64_t master_seed,
                                           std::span<const double> cdf_grid) {
  if (specs.empty()) throw std::invalid_argument("coupled_sweep: no schemes given");
  for (const auto& spec : specs) {
    validate(spec);
    if (spec.n_servers != specs[0].n_servers) {
      throw std::invalid_argument("coupled_sweep: all schemes must share n_servers");
    }
  }
  validate(params);
  if (n_trials < 1) throw std::invalid_argument("coupled_sweep: n_trials must be >= 1");

  std::vector<Accumulator> accs(specs.size());
  for (auto& acc : accs) acc.times.reserve(static_cast<std::size_t>(n_trials));
  for (std::int64_t trial = 0; trial < n_trials; ++trial) {
    const auto draws = sample_draws(params, specs[0].n_servers, master_seed, trial);
    for (std::size_t s = 0; s < specs.size(); ++s) {
      accs[s].add(simulate_iteration(specs[s], params, draws));
    }
  }
  std::vector<CompletionStats> stats;
  stats.reserve(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s) {
    stats.push_back(std::move(accs[s]).finish(specs[s], cdf_grid));
  }
  return stats;
}

}  // namespace dgd
