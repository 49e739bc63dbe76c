#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "dgd/types.hpp"

namespace dgd {

// Circular-shift task assignment. entries[j][k] = (j + k) mod n is the data
// point server k computes in j-th order, 0-based.
struct AssignmentMatrix {
  int n_servers = 0;
  int comp_load = 0;
  std::vector<int> entries;  // comp_load x n_servers, row-major

  int at(int order, int server) const {
    return entries[static_cast<std::size_t>(order) * n_servers + server];
  }
};

AssignmentMatrix circular_assignment(int n, int r);

// Points whose gradient has been received when server k has delivered its
// first counts[k] in-order results.
std::vector<bool> covered_set(const AssignmentMatrix& assign, std::span<const int> counts);

int coverage_count(const std::vector<bool>& covered);

bool is_complete(const std::vector<bool>& covered, int k_target);

// Gradient restricted to the covered points, each counted exactly once.
Eigen::VectorXd partial_gradient(const DataSet& data, const Eigen::VectorXd& theta,
                                 const std::vector<bool>& covered);

}  // namespace dgd
