#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dgd {

// Per-computation latency model: every computation on a server takes
// alpha + Y seconds, Y exponential with rate mu (see straggler.hpp).
struct StragglerParams {
  double mu = 10.0;     // exponential rate (1/time)
  double alpha = 0.01;  // minimum per-computation duration
};

void validate(const StragglerParams& params);

enum class SchemeKind {
  lcc,           // Lagrange coded computation, poly_count polynomials
  uc_mmc,        // uncoded circular-shift, one message per data point
  uc_mmc_pg,     // uncoded, completes at a fraction of the data points
  gc_threshold,  // gradient coding, modeled by its server threshold
};

// Scheme identity plus (N, r, L, tolerance); fully determines the encoding
// and the completion rule.
struct SchemeSpec {
  SchemeKind kind = SchemeKind::lcc;
  int n_servers = 1;                // N
  int comp_load = 1;                // r, computations per server per iteration
  int poly_count = 1;               // L; LCC family only, must divide r
  double tolerance_fraction = 1.0;  // UC-MMC-PG only, fraction of points required
};

void validate(const SchemeSpec& spec);

// Computations bundled into one worker-to-master message:
// L for the LCC family, 1 for uncoded kinds, r for GC.
int unit_cost(const SchemeSpec& spec);

// Messages each server can send per iteration.
int max_messages_per_server(const SchemeSpec& spec);

// Fixed message-count completion threshold: 2*ceil(N/L)-1 for the LCC
// family, N-r+1 for GC. Empty for UC kinds, which complete on coverage.
std::optional<int> message_threshold(const SchemeSpec& spec);

// Distinct data points required for UC kinds: N, or ceil(tolerance * N).
int coverage_target(const SchemeSpec& spec);

std::string scheme_label(const SchemeSpec& spec);

struct DataSet {
  Eigen::MatrixXd x;  // N x d, one data point per row
  Eigen::VectorXd y;  // N labels
};

void validate(const DataSet& data);

// One simulated iteration.
struct IterationOutcome {
  double completion_time = 0.0;
  std::int64_t comm_load = 0;         // messages delivered up to completion
  std::vector<int> per_server_units;  // messages per server at completion
};

struct CompletionStats {
  SchemeSpec scheme;
  std::vector<std::pair<double, double>> cdf;  // (t, Pr(T <= t))
  double mean_time = 0.0;
  double mean_comm_load = 0.0;
  std::int64_t n_trials = 0;
};

}  // namespace dgd
