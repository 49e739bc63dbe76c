#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "dgd/types.hpp"

namespace dgd {

// Interpolation nodes (alphas) and evaluation points (betas). Both come from
// one shared Chebyshev family on [-1, 1], so all points are pairwise distinct;
// the alphas are spread through the family so that decoding never has to
// extrapolate far outside the sampled range.
struct NodeSet {
  std::vector<double> alphas;
  std::vector<double> betas;
};

NodeSet make_nodes(int n_alphas, int n_betas);

// Nodes sized for an LCC-family spec: ceil(N/L) alphas, N*(r/L) betas.
NodeSet make_nodes(const SchemeSpec& spec);

// One worker-to-master message: the L coded rows evaluated at beta.
struct CodedMessage {
  double beta = 0.0;
  std::vector<Eigen::VectorXd> rows;
};

// servers[i][k] is the (k+1)-th message server i computes.
struct CodedTaskSet {
  std::vector<std::vector<CodedMessage>> servers;
};

// The L coded rows f_1(z)..f_L(z): group l of the (zero-padded) data rows
// interpolated over the alphas, evaluated at z. Exact at z == alpha_j.
std::vector<Eigen::VectorXd> coded_rows_at(const DataSet& data, const SchemeSpec& spec,
                                           const NodeSet& nodes, double z);

// Rows are split in index order into L groups of ceil(N/L) (zero-padded);
// betas are dealt to the N servers round-robin, r/L messages each.
CodedTaskSet encode(const DataSet& data, const SchemeSpec& spec, const NodeSet& nodes);

// Worker-side computation at one evaluation point: sum_l row_l * (row_l . theta).
Eigen::VectorXd compute_message(const std::vector<Eigen::VectorXd>& rows,
                                const Eigen::VectorXd& theta);

// Interpolates the gradient polynomial through the first 2*|alphas|-1 of the
// given samples (extra samples are ignored) and sums its values over the
// alphas. For samples produced by compute_message this equals X^T X theta.
Eigen::VectorXd decode(std::span<const double> points,
                       std::span<const Eigen::VectorXd> values,
                       std::span<const double> alphas);

Eigen::VectorXd full_gradient(const Eigen::VectorXd& xtx_theta, const Eigen::VectorXd& xty);

}  // namespace dgd
