#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dgd/gd.hpp"
#include "dgd/uncoded.hpp"

using namespace dgd;

namespace {

const StragglerParams kParams{10.0, 0.01};

double max_rel_theta_gap(const Trajectory& a, const Trajectory& b) {
  REQUIRE(a.thetas.size() == b.thetas.size());
  double worst = 0.0;
  for (std::size_t t = 0; t < a.thetas.size(); ++t) {
    const double scale = std::max(b.thetas[t].norm(), 1e-12);
    worst = std::max(worst, (a.thetas[t] - b.thetas[t]).norm() / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("gen_synthetic: noiseless labels are exactly X theta*") {
  const auto [data, theta_star] = gen_synthetic(30, 6, 0.0, 5);
  CHECK((data.y - data.x * theta_star).norm() == 0.0);
  const auto [again, theta_again] = gen_synthetic(30, 6, 0.0, 5);
  CHECK((again.x - data.x).norm() == 0.0);
  CHECK((theta_again - theta_star).norm() == 0.0);
  const auto [other, theta_other] = gen_synthetic(30, 6, 0.0, 6);
  CHECK((other.x - data.x).norm() != 0.0);
}

TEST_CASE("centralized GD: eta = 0 is rejected, stationary point stays put") {
  const auto [data, theta_star] = gen_synthetic(40, 5, 0.3, 11);

  GdConfig config;
  config.eta = 0.0;
  config.n_iters = 3;
  config.theta0 = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(centralized_gd(data, config), std::invalid_argument);

  // Start at the least-squares solution: the gradient vanishes.
  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  const Eigen::VectorXd solution = xtx.ldlt().solve(data.x.transpose() * data.y);
  config.eta = default_learning_rate(data);
  config.theta0 = solution;
  const Trajectory traj = centralized_gd(data, config);
  for (const auto& theta : traj.thetas) {
    CHECK((theta - solution).norm() <= 1e-9 * solution.norm());
  }
}

TEST_CASE("centralized GD: loss decreases strictly for a safe learning rate") {
  const auto [data, theta_star] = gen_synthetic(100, 10, 0.0, 2);
  GdConfig config;
  // trace(X^T X) bounds the largest eigenvalue from above.
  config.eta = 0.5 * default_learning_rate(data);
  config.n_iters = 60;
  config.theta0 = Eigen::VectorXd::Zero(10);
  const Trajectory traj = centralized_gd(data, config);
  REQUIRE(traj.losses.size() == 61);
  REQUIRE(traj.thetas.size() == 61);
  for (std::size_t t = 1; t < traj.losses.size(); ++t) {
    CHECK(traj.losses[t] < traj.losses[t - 1]);
  }
}

TEST_CASE("divergence is reported as an error") {
  const auto [data, theta_star] = gen_synthetic(50, 5, 0.0, 3);
  GdConfig config;
  config.eta = 10.0;  // far beyond 2/lambda_max
  config.n_iters = 200;
  config.theta0 = Eigen::VectorXd::Ones(5);
  CHECK_THROWS_AS(centralized_gd(data, config), std::runtime_error);
}

TEST_CASE("full-gradient schemes reproduce the centralized trajectory") {
  const int n = 10, d = 5;
  const auto [data, theta_star] = gen_synthetic(n, d, 0.2, 7);
  GdConfig config;
  config.eta = default_learning_rate(data);
  config.n_iters = 50;
  config.theta0 = Eigen::VectorXd::Zero(d);
  const Trajectory central = centralized_gd(data, config);

  const std::vector<SchemeSpec> specs = {
      {SchemeKind::lcc, n, 4, 4, 1.0}, {SchemeKind::lcc, n, 4, 2, 1.0},
      {SchemeKind::lcc, n, 4, 1, 1.0}, {SchemeKind::uc_mmc, n, 4, 1, 1.0},
      {SchemeKind::gc_threshold, n, 4, 1, 1.0}};
  for (const auto& spec : specs) {
    const Trajectory traj = run_dgd(data, spec, kParams, config, 1001);
    CHECK(max_rel_theta_gap(traj, central) <= 1e-5);
    CHECK(static_cast<int>(traj.per_iter.size()) == config.n_iters);
  }
}

TEST_CASE("reconstructed gradients match the dense oracle at every iteration") {
  const int n = 8, d = 4;
  const auto [data, theta_star] = gen_synthetic(n, d, 0.1, 9);
  GdConfig config;
  config.eta = default_learning_rate(data);
  config.n_iters = 20;
  config.theta0 = Eigen::VectorXd::Zero(d);

  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  const Eigen::VectorXd xty = data.x.transpose() * data.y;

  for (const auto& [spec, tol] :
       {std::pair{SchemeSpec{SchemeKind::lcc, n, 4, 1, 1.0}, 1e-6},
        {SchemeSpec{SchemeKind::uc_mmc, n, 4, 1, 1.0}, 1e-10}}) {
    const Trajectory traj = run_dgd(data, spec, kParams, config, 77);
    for (int t = 0; t < config.n_iters; ++t) {
      const Eigen::VectorXd implied = (traj.thetas[t] - traj.thetas[t + 1]) / config.eta;
      const Eigen::VectorXd want = xtx * traj.thetas[t] - xty;
      CHECK((implied - want).norm() <= tol * std::max(want.norm(), 1e-12));
    }
  }
}

TEST_CASE("UC-MMC-PG with tolerance 1 matches UC-MMC exactly") {
  const int n = 12, d = 3;
  const auto [data, theta_star] = gen_synthetic(n, d, 0.0, 13);
  GdConfig config;
  config.eta = default_learning_rate(data);
  config.n_iters = 15;
  config.theta0 = Eigen::VectorXd::Zero(d);
  const Trajectory full =
      run_dgd(data, SchemeSpec{SchemeKind::uc_mmc, n, 3, 1, 1.0}, kParams, config, 19);
  const Trajectory pg =
      run_dgd(data, SchemeSpec{SchemeKind::uc_mmc_pg, n, 3, 1, 1.0}, kParams, config, 19);
  CHECK(max_rel_theta_gap(pg, full) == 0.0);
}

TEST_CASE("partial-gradient updates differ by exactly the missing points") {
  const int n = 40, d = 6;
  const auto [data, theta_star] = gen_synthetic(n, d, 0.1, 17);
  GdConfig config;
  config.eta = default_learning_rate(data);
  config.n_iters = 25;
  config.theta0 = Eigen::VectorXd::Zero(d);
  const SchemeSpec spec{SchemeKind::uc_mmc_pg, n, 4, 1, 0.95};
  CHECK(coverage_target(spec) == 38);

  const Trajectory traj = run_dgd(data, spec, kParams, config, 23);
  const AssignmentMatrix assign = circular_assignment(n, 4);
  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  const Eigen::VectorXd xty = data.x.transpose() * data.y;
  for (int t = 0; t < config.n_iters; ++t) {
    const auto covered = covered_set(assign, traj.per_iter[t].per_server_units);
    const int missing = n - coverage_count(covered);
    CHECK(missing <= 2);  // 5% tolerance at N=40

    Eigen::VectorXd missing_grad = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) {
      if (covered[i]) continue;
      const auto xi = data.x.row(i);
      missing_grad += xi.transpose() * (xi.dot(traj.thetas[t]) - data.y(i));
    }
    const Eigen::VectorXd implied = (traj.thetas[t] - traj.thetas[t + 1]) / config.eta;
    const Eigen::VectorXd full = xtx * traj.thetas[t] - xty;
    CHECK((implied - (full - missing_grad)).norm() <= 1e-10 * std::max(full.norm(), 1e-12));
  }
}

TEST_CASE("run_dgd validates its inputs") {
  const auto [data, theta_star] = gen_synthetic(10, 3, 0.0, 1);
  GdConfig config;
  config.eta = default_learning_rate(data);
  config.n_iters = 2;
  config.theta0 = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(run_dgd(data, SchemeSpec{SchemeKind::lcc, 12, 4, 1, 1.0}, kParams, config, 1),
                  std::invalid_argument);
  config.theta0 = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(run_dgd(data, SchemeSpec{SchemeKind::lcc, 10, 4, 1, 1.0}, kParams, config, 1),
                  std::invalid_argument);
}
