#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "dgd/types.hpp"

namespace dgd {

struct GdConfig {
  double eta = 0.0;  // learning rate; see default_learning_rate
  int n_iters = 1;
  Eigen::VectorXd theta0;
};

// thetas[t] is the parameter vector after t updates (thetas[0] = theta0),
// losses[t] the loss at thetas[t]; per_iter has one entry per update and is
// empty for centralized runs.
struct Trajectory {
  std::vector<Eigen::VectorXd> thetas;
  std::vector<double> losses;
  std::vector<IterationOutcome> per_iter;
};

// X with iid standard normal entries, theta* standard normal,
// y = X theta* + noise_std * standard normal noise.
std::pair<DataSet, Eigen::VectorXd> gen_synthetic(int n, int d, double noise_std,
                                                  std::uint64_t seed);

double least_squares_loss(const DataSet& data, const Eigen::VectorXd& theta);

// 1 / trace(X^T X); safe for plain gradient descent at these scales.
double default_learning_rate(const DataSet& data);

Trajectory centralized_gd(const DataSet& data, const GdConfig& config);

// Scheme-driven distributed GD: each iteration samples server draws, replays
// the completion events, and rebuilds the gradient from exactly the messages
// that arrived (Lagrange decoding for LCC, deduplicated partial sums for UC
// kinds, the dense gradient for GC whose code construction is out of scope).
Trajectory run_dgd(const DataSet& data, const SchemeSpec& spec, const StragglerParams& params,
                   const GdConfig& config, std::uint64_t master_seed);

}  // namespace dgd
