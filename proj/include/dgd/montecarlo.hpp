#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dgd/straggler.hpp"
#include "dgd/types.hpp"

namespace dgd {

struct TrialConfig {
  SchemeSpec spec;
  StragglerParams params;
  std::int64_t n_trials = 100000;
  std::uint64_t master_seed = 0;
  std::vector<double> cdf_grid;  // empty -> automatic quantile grid
};

// One draw per server for one trial, from the (master_seed, trial, server)
// substream; independent of evaluation order.
std::vector<ServerDraw> sample_draws(const StragglerParams& params, int n_servers,
                                     std::uint64_t master_seed, std::int64_t trial);

// Replays the message completion events k * cost * (alpha + y_i) in ascending
// time order (ties broken by server index, then message index) until the
// scheme's completion rule first holds: m_threshold messages for the LCC
// family and GC, data-point coverage >= coverage_target for UC kinds.
// comm_load counts the messages delivered up to and including the trigger.
IterationOutcome simulate_iteration(const SchemeSpec& spec, const StragglerParams& params,
                                    std::span<const ServerDraw> draws);

CompletionStats run_trials(const TrialConfig& config);

// Runs all schemes on identical per-trial draws (they must share N), so
// scheme and r comparisons are free of sampling noise between configurations.
std::vector<CompletionStats> coupled_sweep(std::span<const SchemeSpec> specs,
                                           const StragglerParams& params,
                                           std::int64_t n_trials, std::uint64_t master_seed,
                                           std::span<const double> cdf_grid = {});

}  // namespace dgd
