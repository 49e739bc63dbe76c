#include "dgd/uncoded.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgd {

AssignmentMatrix circular_assignment(int n, int r) {
  if (n < 1 || r < 1 || r > n) {
    throw std::invalid_argument("circular_assignment: need 1 <= r <= n");
  }
  AssignmentMatrix assign;
  assign.n_servers = n;
  assign.comp_load = r;
  assign.entries.resize(static_cast<std::size_t>(r) * n);
  for (int j = 0; j < r; ++j) {
    for (int k = 0; k < n; ++k) {
      assign.entries[static_cast<std::size_t>(j) * n + k] = (j + k) % n;
    }
  }
  return assign;
}

std::vector<bool> covered_set(const AssignmentMatrix& assign, std::span<const int> counts) {
  if (static_cast<int>(counts.size()) != assign.n_servers) {
    throw std::invalid_argument("covered_set: counts length must equal n_servers");
  }
  std::vector<bool> covered(assign.n_servers, false);
  for (int k = 0; k < assign.n_servers; ++k) {
    if (counts[k] < 0 || counts[k] > assign.comp_load) {
      throw std::invalid_argument("covered_set: count out of range");
    }
    for (int j = 0; j < counts[k]; ++j) {
      covered[assign.at(j, k)] = true;
    }
  }
  return covered;
}

int coverage_count(const std::vector<bool>& covered) {
  return static_cast<int>(std::count(covered.begin(), covered.end(), true));
}

bool is_complete(const std::vector<bool>& covered, int k_target) {
  return coverage_count(covered) >= k_target;
}

Eigen::VectorXd partial_gradient(const DataSet& data, const Eigen::VectorXd& theta,
                                 const std::vector<bool>& covered) {
  if (theta.size() != data.x.cols()) {
    throw std::invalid_argument("partial_gradient: theta dimension mismatch");
  }
  if (static_cast<Eigen::Index>(covered.size()) > data.x.rows()) {
    throw std::invalid_argument("partial_gradient: covered set larger than the data set");
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) continue;
    const auto xi = data.x.row(static_cast<Eigen::Index>(i));
    grad += xi.transpose() * (xi.dot(theta) - data.y(static_cast<Eigen::Index>(i)));
  }
  return grad;
}

}  // namespace dgd
