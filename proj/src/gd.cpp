#include "dgd/gd.hpp"

#include <stdexcept>

#include "dgd/lagrange.hpp"
#include "dgd/montecarlo.hpp"
#include "dgd/rng.hpp"
#include "dgd/uncoded.hpp"

namespace dgd {

namespace {

constexpr double kDivergenceLimit = 1e12;

void validate(const DataSet& data, const GdConfig& config) {
  dgd::validate(data);
  if (!(config.eta > 0.0)) throw std::invalid_argument("GdConfig: eta must be > 0");
  if (config.n_iters < 1) throw std::invalid_argument("GdConfig: n_iters must be >= 1");
  if (config.theta0.size() != data.x.cols()) {
    throw std::invalid_argument("GdConfig: theta0 dimension must match the data");
  }
}

void record(Trajectory& traj, const DataSet& data, const Eigen::VectorXd& theta) {
  traj.thetas.push_back(theta);
  traj.losses.push_back(least_squares_loss(data, theta));
  if (traj.losses.back() > kDivergenceLimit) {
    throw std::runtime_error("gradient descent diverged: loss exceeded 1e12");
  }
}

}  // namespace

std::pair<DataSet, Eigen::VectorXd> gen_synthetic(int n, int d, double noise_std,
                                                  std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_synthetic: n and d must be >= 1");
  if (noise_std < 0.0) throw std::invalid_argument("gen_synthetic: noise_std must be >= 0");
  Rng rng(Rng::derive(seed, 0));
  DataSet data;
  data.x.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.x(i, j) = rng.normal();
  }
  Eigen::VectorXd theta_star(d);
  for (int j = 0; j < d; ++j) theta_star(j) = rng.normal();
  data.y = data.x * theta_star;
  for (int i = 0; i < n; ++i) data.y(i) += noise_std * rng.normal();
  return {std::move(data), std::move(theta_star)};
}

double least_squares_loss(const DataSet& data, const Eigen::VectorXd& theta) {
  return 0.5 * (data.y - data.x * theta).squaredNorm();
}

double default_learning_rate(const DataSet& data) {
  return 1.0 / data.x.squaredNorm();
}

Trajectory centralized_gd(const DataSet& data, const GdConfig& config) {
  validate(data, config);
  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  const Eigen::VectorXd xty = data.x.transpose() * data.y;

  Trajectory traj;
  Eigen::VectorXd theta = config.theta0;
  record(traj, data, theta);
  for (int t = 0; t < config.n_iters; ++t) {
    theta -= config.eta * (xtx * theta - xty);
    record(traj, data, theta);
  }
  return traj;
}

Trajectory run_dgd(const DataSet& data, const SchemeSpec& spec, const StragglerParams& params,
                   const GdConfig& config, std::uint64_t master_seed) {
  validate(data, config);
  dgd::validate(spec);
  dgd::validate(params);
  if (data.x.rows() != spec.n_servers) {
    throw std::invalid_argument("run_dgd: data must have one row per server (N = K)");
  }

  // X^T y never changes, so it is computed once up front.
  const Eigen::VectorXd xty = data.x.transpose() * data.y;

  const bool is_lcc = spec.kind == SchemeKind::lcc;
  const bool is_uncoded =
      spec.kind == SchemeKind::uc_mmc || spec.kind == SchemeKind::uc_mmc_pg;

  NodeSet nodes;
  CodedTaskSet tasks;
  AssignmentMatrix assign;
  Eigen::MatrixXd xtx;
  if (is_lcc) {
    nodes = make_nodes(spec);
    tasks = encode(data, spec, nodes);
  } else if (is_uncoded) {
    assign = circular_assignment(spec.n_servers, spec.comp_load);
  } else {
    xtx = data.x.transpose() * data.x;
  }

  Trajectory traj;
  traj.per_iter.reserve(config.n_iters);
  Eigen::VectorXd theta = config.theta0;
  record(traj, data, theta);
  for (int iter = 0; iter < config.n_iters; ++iter) {
    const auto draws = sample_draws(params, spec.n_servers, master_seed, iter);
    IterationOutcome outcome = simulate_iteration(spec, params, draws);

    Eigen::VectorXd grad;
    if (is_lcc) {
      // Exactly message_threshold(spec) messages arrive in every iteration.
      std::vector<double> points;
      std::vector<Eigen::VectorXd> values;
      for (int i = 0; i < spec.n_servers; ++i) {
        for (int k = 0; k < outcome.per_server_units[i]; ++k) {
          const CodedMessage& msg = tasks.servers[i][k];
          points.push_back(msg.beta);
          values.push_back(compute_message(msg.rows, theta));
        }
      }
      grad = full_gradient(decode(points, values, nodes.alphas), xty);
    } else if (is_uncoded) {
      const auto covered = covered_set(assign, outcome.per_server_units);
      grad = partial_gradient(data, theta, covered);
    } else {
      grad = xtx * theta - xty;
    }

    theta -= config.eta * grad;
    record(traj, data, theta);
    traj.per_iter.push_back(std::move(outcome));
  }
  return traj;
}

}  // namespace dgd
