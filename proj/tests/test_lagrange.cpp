#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dgd/lagrange.hpp"
#include "dgd/rng.hpp"

using namespace dgd;

namespace {

SchemeSpec lcc_spec(int n, int r, int l) {
  return SchemeSpec{SchemeKind::lcc, n, r, l, 1.0};
}

DataSet gaussian_data(int n, int d, std::uint64_t seed) {
  Rng rng(Rng::derive(seed, 17));
  DataSet data;
  data.x.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.x(i, j) = rng.normal();
  }
  data.y.resize(n);
  for (int i = 0; i < n; ++i) data.y(i) = rng.normal();
  return data;
}

Eigen::VectorXd random_theta(int d, std::uint64_t seed) {
  Rng rng(Rng::derive(seed, 23));
  Eigen::VectorXd theta(d);
  for (int j = 0; j < d; ++j) theta(j) = rng.normal();
  return theta;
}

// Direct product-formula evaluation of the group-l interpolant; the
// independent oracle for the barycentric path used by encode.
Eigen::VectorXd oracle_coded_row(const DataSet& data, int group, int group_size,
                                 const std::vector<double>& alphas, double z) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(data.x.cols());
  for (int i = 0; i < group_size; ++i) {
    const int row = group * group_size + i;
    if (row >= data.x.rows()) continue;
    double basis = 1.0;
    for (int j = 0; j < group_size; ++j) {
      if (j == i) continue;
      basis *= (z - alphas[j]) / (alphas[i] - alphas[j]);
    }
    out += basis * data.x.row(row).transpose();
  }
  return out;
}

struct FlatMessage {
  double beta;
  const std::vector<Eigen::VectorXd>* rows;
};

std::vector<FlatMessage> flatten(const CodedTaskSet& tasks) {
  std::vector<FlatMessage> all;
  for (const auto& server : tasks.servers) {
    for (const auto& msg : server) all.push_back({msg.beta, &msg.rows});
  }
  return all;
}

std::vector<int> random_subset(Rng& rng, int n, int k) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_u64() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

Eigen::VectorXd decode_subset(const std::vector<FlatMessage>& messages,
                              const std::vector<int>& subset, const Eigen::VectorXd& theta,
                              const NodeSet& nodes) {
  std::vector<double> points;
  std::vector<Eigen::VectorXd> values;
  for (int idx : subset) {
    points.push_back(messages[idx].beta);
    values.push_back(compute_message(*messages[idx].rows, theta));
  }
  return decode(points, values, nodes.alphas);
}

double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace

TEST_CASE("make_nodes produces distinct points in (-1, 1)") {
  const NodeSet tiny = make_nodes(1, 1);
  CHECK(tiny.alphas.size() == 1);
  CHECK(tiny.betas.size() == 1);
  CHECK(tiny.alphas[0] != tiny.betas[0]);
  CHECK(std::abs(tiny.alphas[0]) < 1.0);
  CHECK(std::abs(tiny.betas[0]) < 1.0);

  const NodeSet six = make_nodes(2, 4);
  std::set<double> all(six.alphas.begin(), six.alphas.end());
  all.insert(six.betas.begin(), six.betas.end());
  CHECK(all.size() == 6);

  const NodeSet big = make_nodes(lcc_spec(10, 5, 1));
  CHECK(big.alphas.size() == 10);
  CHECK(big.betas.size() == 50);
  std::set<double> pts(big.alphas.begin(), big.alphas.end());
  pts.insert(big.betas.begin(), big.betas.end());
  CHECK(pts.size() == 60);
  for (double p : pts) CHECK(std::abs(p) < 1.0);
}

TEST_CASE("interpolation identity: the coded rows at alpha_j are the data rows") {
  for (auto [n, r, l] : {std::tuple{6, 3, 1}, {6, 3, 3}, {10, 4, 2}, {5, 2, 2}}) {
    const SchemeSpec spec = lcc_spec(n, r, l);
    const NodeSet nodes = make_nodes(spec);
    const DataSet data = gaussian_data(n, 4, 100 + n);
    const int group_size = static_cast<int>(nodes.alphas.size());
    for (int j = 0; j < group_size; ++j) {
      const auto rows = coded_rows_at(data, spec, nodes, nodes.alphas[j]);
      for (int g = 0; g < l; ++g) {
        const int idx = g * group_size + j;
        const Eigen::VectorXd want = idx < n ? Eigen::VectorXd(data.x.row(idx).transpose())
                                             : Eigen::VectorXd(Eigen::VectorXd::Zero(4));
        CHECK((rows[g] - want).norm() <= 1e-10 * std::max(1.0, want.norm()));
      }
    }
  }
}

TEST_CASE("single data point: every coded row equals it") {
  const SchemeSpec spec = lcc_spec(1, 1, 1);
  const NodeSet nodes = make_nodes(spec);
  const DataSet data = gaussian_data(1, 3, 7);
  const CodedTaskSet tasks = encode(data, spec, nodes);
  REQUIRE(tasks.servers.size() == 1);
  REQUIRE(tasks.servers[0].size() == 1);
  CHECK(rel_err(tasks.servers[0][0].rows[0], data.x.row(0).transpose()) <= 1e-12);
}

TEST_CASE("encode matches the product-formula oracle") {
  const SchemeSpec spec = lcc_spec(4, 2, 2);
  const NodeSet nodes = make_nodes(spec);
  const DataSet data = gaussian_data(4, 3, 11);
  const CodedTaskSet tasks = encode(data, spec, nodes);
  REQUIRE(tasks.servers.size() == 4);
  const int group_size = static_cast<int>(nodes.alphas.size());
  for (const auto& server : tasks.servers) {
    REQUIRE(server.size() == 1);  // r/L messages each
    for (const auto& msg : server) {
      REQUIRE(msg.rows.size() == 2);
      for (int g = 0; g < 2; ++g) {
        const auto want = oracle_coded_row(data, g, group_size, nodes.alphas, msg.beta);
        CHECK(rel_err(msg.rows[g], want) <= 1e-10);
      }
    }
  }
}

TEST_CASE("round-robin beta assignment") {
  const SchemeSpec spec = lcc_spec(3, 2, 1);
  const NodeSet nodes = make_nodes(spec);
  const DataSet data = gaussian_data(3, 2, 5);
  const CodedTaskSet tasks = encode(data, spec, nodes);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(tasks.servers[i].size() == 2);
    CHECK(tasks.servers[i][0].beta == nodes.betas[i]);
    CHECK(tasks.servers[i][1].beta == nodes.betas[3 + i]);
  }
}

TEST_CASE("compute_message") {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  std::vector<Eigen::VectorXd> rows = {random_theta(4, 1), random_theta(4, 2)};
  CHECK(compute_message(rows, zero).norm() == 0.0);

  std::vector<Eigen::VectorXd> e1 = {Eigen::VectorXd::Unit(3, 0)};
  Eigen::VectorXd theta(3);
  theta << 2.0, 0.0, 0.0;
  Eigen::VectorXd want(3);
  want << 2.0, 0.0, 0.0;
  CHECK((compute_message(e1, theta) - want).norm() == 0.0);

  const Eigen::VectorXd t2 = random_theta(4, 3);
  Eigen::VectorXd direct = rows[0] * (rows[0].dot(t2)) + rows[1] * (rows[1].dot(t2));
  CHECK(rel_err(compute_message(rows, t2), direct) <= 1e-12);

  std::vector<Eigen::VectorXd> bad = {random_theta(3, 4)};
  CHECK_THROWS_AS(compute_message(bad, t2), std::invalid_argument);
}

TEST_CASE("decode trivial cases and errors") {
  // All-zero samples decode to the zero vector.
  std::vector<double> points = {0.1, 0.2, 0.3};
  std::vector<Eigen::VectorXd> zeros(3, Eigen::VectorXd::Zero(2));
  std::vector<double> alphas = {-0.5, 0.5};
  CHECK(decode(points, zeros, alphas).norm() == 0.0);

  // Degree-0 polynomial: one sample is the answer.
  std::vector<double> one_point = {0.4};
  std::vector<Eigen::VectorXd> one_value = {random_theta(3, 9)};
  std::vector<double> one_alpha = {-0.3};
  CHECK((decode(one_point, one_value, one_alpha) - one_value[0]).norm() == 0.0);

  std::vector<double> dup = {0.1, 0.1, 0.3};
  CHECK_THROWS_AS(decode(dup, zeros, alphas), std::invalid_argument);
  std::vector<double> two = {0.1, 0.2};
  std::vector<Eigen::VectorXd> two_vals(2, Eigen::VectorXd::Zero(2));
  CHECK_THROWS_AS(decode(two, two_vals, alphas), std::invalid_argument);
}

TEST_CASE("decode from any threshold subset equals the dense oracle") {
  const SchemeSpec spec = lcc_spec(6, 3, 1);
  const NodeSet nodes = make_nodes(spec);
  const DataSet data = gaussian_data(6, 4, 31);
  const Eigen::VectorXd theta = random_theta(4, 32);
  const Eigen::VectorXd want = data.x.transpose() * (data.x * theta);

  const CodedTaskSet tasks = encode(data, spec, nodes);
  const auto messages = flatten(tasks);
  REQUIRE(messages.size() == 18);
  const int threshold = 2 * 6 - 1;

  Rng rng(2024);
  Eigen::VectorXd first;
  for (int rep = 0; rep < 20; ++rep) {
    const auto subset = random_subset(rng, 18, threshold);
    const Eigen::VectorXd got = decode_subset(messages, subset, theta, nodes);
    CHECK(rel_err(got, want) <= 1e-6);
    if (rep == 0) {
      first = got;
    } else {
      CHECK(rel_err(got, first) <= 1e-8);  // decode-set independence
    }
  }
}

TEST_CASE("end-to-end encode/compute/decode across sizes") {
  Rng rng(555);
  for (auto [n, d, r, l] : {std::tuple{12, 20, 4, 1}, {12, 20, 4, 2}, {12, 20, 4, 4},
                            {9, 7, 3, 3}, {11, 5, 2, 2}, {7, 2, 2, 1}}) {
    const SchemeSpec spec = lcc_spec(n, r, l);
    const NodeSet nodes = make_nodes(spec);
    const DataSet data = gaussian_data(n, d, 1000 + 7 * n + l);
    const Eigen::VectorXd theta = random_theta(d, 2000 + n);
    const Eigen::VectorXd want = data.x.transpose() * (data.x * theta);
    const CodedTaskSet tasks = encode(data, spec, nodes);
    const auto messages = flatten(tasks);
    const int threshold = *message_threshold(spec);
    for (int rep = 0; rep < 5; ++rep) {
      const auto subset = random_subset(rng, static_cast<int>(messages.size()), threshold);
      CHECK(rel_err(decode_subset(messages, subset, theta, nodes), want) <= 1e-6);
    }
  }
}

TEST_CASE("padding: appending zero rows leaves the decoded gradient unchanged") {
  const int d = 4;
  const DataSet data = gaussian_data(5, d, 77);
  const Eigen::VectorXd theta = random_theta(d, 78);

  DataSet padded;
  padded.x = Eigen::MatrixXd::Zero(7, d);
  padded.x.topRows(5) = data.x;
  padded.y = Eigen::VectorXd::Zero(7);
  padded.y.head(5) = data.y;

  const auto run = [&](const DataSet& ds, int n, int r, int l) {
    const SchemeSpec spec = lcc_spec(n, r, l);
    const NodeSet nodes = make_nodes(spec);
    const CodedTaskSet tasks = encode(ds, spec, nodes);
    const auto messages = flatten(tasks);
    std::vector<int> first(*message_threshold(spec));
    std::iota(first.begin(), first.end(), 0);
    return decode_subset(messages, first, theta, nodes);
  };

  const Eigen::VectorXd a = run(data, 5, 2, 2);
  const Eigen::VectorXd b = run(padded, 7, 2, 2);
  const double scale = std::max(1.0, a.norm());
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10 * scale);
}

TEST_CASE("full_gradient") {
  const Eigen::VectorXd v = random_theta(5, 91);
  CHECK((full_gradient(v, Eigen::VectorXd::Zero(5)) - v).norm() == 0.0);
  CHECK(full_gradient(v, v).norm() == 0.0);

  const DataSet data = gaussian_data(8, 5, 92);
  const Eigen::VectorXd theta = random_theta(5, 93);
  const Eigen::VectorXd want = data.x.transpose() * (data.x * theta) - data.x.transpose() * data.y;
  const Eigen::VectorXd got = full_gradient(data.x.transpose() * (data.x * theta),
                                            data.x.transpose() * data.y);
  CHECK(rel_err(got, want) <= 1e-10);

  CHECK_THROWS_AS(full_gradient(v, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("encode rejects mismatched inputs") {
  const SchemeSpec spec = lcc_spec(6, 3, 1);
  const DataSet data = gaussian_data(6, 4, 31);
  CHECK_THROWS_AS(encode(data, SchemeSpec{SchemeKind::uc_mmc, 6, 3, 1, 1.0}, make_nodes(spec)),
                  std::invalid_argument);
  CHECK_THROWS_AS(encode(data, spec, make_nodes(5, 18)), std::invalid_argument);
  CHECK_THROWS_AS(encode(gaussian_data(7, 4, 31), spec, make_nodes(spec)), std::invalid_argument);
}
