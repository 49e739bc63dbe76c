#include "dgd/lagrange.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dgd {

namespace {

int ceil_div(int a, int b) {
  return (a + b - 1) / b;
}

// Second-form barycentric interpolation. Differences are rescaled by a
// quarter of the point spread so the weight products stay far from the
// overflow/underflow limits even at degree ~100.
class Barycentric {
 public:
  explicit Barycentric(std::span<const double> points)
      : points_(points.begin(), points.end()), weights_(points.size()) {
    const std::size_t k = points_.size();
    if (k == 0) throw std::invalid_argument("interpolation: need at least one point");
    const auto [lo, hi] = std::minmax_element(points_.begin(), points_.end());
    const double scale = std::max((*hi - *lo) / 4.0, 1e-300);
    for (std::size_t i = 0; i < k; ++i) {
      double w = 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        const double diff = points_[i] - points_[j];
        if (diff == 0.0) throw std::invalid_argument("interpolation: duplicate points");
        w *= diff / scale;
      }
      weights_[i] = 1.0 / w;
    }
  }

  // Basis coefficients c_i(z) with interpolant(z) = sum_i c_i(z) * v_i.
  std::vector<double> basis(double z) const {
    const std::size_t k = points_.size();
    std::vector<double> c(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      if (z == points_[i]) {
        c[i] = 1.0;
        return c;
      }
    }
    double den = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      c[i] = weights_[i] / (z - points_[i]);
      den += c[i];
    }
    for (std::size_t i = 0; i < k; ++i) c[i] /= den;
    return c;
  }

  Eigen::VectorXd eval(std::span<const Eigen::VectorXd> values, double z) const {
    assert(values.size() == points_.size());
    const std::vector<double> c = basis(z);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(values[0].size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i].size() != out.size()) {
        throw std::invalid_argument("interpolation: value dimensions differ");
      }
      if (c[i] != 0.0) out += c[i] * values[i];
    }
    return out;
  }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

void require_lcc(const SchemeSpec& spec) {
  validate(spec);
  if (spec.kind != SchemeKind::lcc) {
    throw std::invalid_argument("lagrange codec: spec.kind must be LCC");
  }
}

void require_nodes_match(const SchemeSpec& spec, const NodeSet& nodes) {
  const int groups = ceil_div(spec.n_servers, spec.poly_count);
  const int n_eval = spec.n_servers * (spec.comp_load / spec.poly_count);
  if (static_cast<int>(nodes.alphas.size()) != groups ||
      static_cast<int>(nodes.betas.size()) != n_eval) {
    throw std::invalid_argument("lagrange codec: node counts do not match the spec");
  }
}

std::vector<Eigen::VectorXd> rows_from_basis(const DataSet& data, int poly_count,
                                             int group_size, std::span<const double> basis) {
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(poly_count);
  for (int l = 0; l < poly_count; ++l) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(data.x.cols());
    for (int j = 0; j < group_size; ++j) {
      const int idx = l * group_size + j;
      if (idx >= data.x.rows()) break;  // zero padding contributes nothing
      if (basis[j] != 0.0) row += basis[j] * data.x.row(idx).transpose();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Stride near m/golden-ratio, coprime with m: walking the betas by this
// stride disperses any consecutive block across the whole family.
int coprime_stride(int m) {
  if (m <= 2) return 1;
  const int base = std::max(1, static_cast<int>(std::lround(m * 0.6180339887498949)));
  for (int delta = 0; delta < m; ++delta) {
    for (int s : {base + delta, base - delta}) {
      if (s >= 1 && s < m && std::gcd(s, m) == 1) return s;
    }
  }
  return 1;
}

}  // namespace

NodeSet make_nodes(int n_alphas, int n_betas) {
  if (n_alphas < 1 || n_betas < 1) {
    throw std::invalid_argument("make_nodes: counts must be >= 1");
  }
  const int q = n_alphas + n_betas;
  std::vector<bool> is_alpha(q, false);
  for (int j = 0; j < n_alphas; ++j) {
    const int idx = static_cast<int>((j + 0.5) * q / n_alphas);
    assert(idx < q && !is_alpha[idx]);
    is_alpha[idx] = true;
  }
  NodeSet nodes;
  nodes.alphas.reserve(n_alphas);
  std::vector<double> family;
  family.reserve(n_betas);
  for (int m = 0; m < q; ++m) {
    const double x = std::cos((2.0 * m + 1.0) * std::numbers::pi / (2.0 * q));
    (is_alpha[m] ? nodes.alphas : family).push_back(x);
  }
  // The beta order defines the round-robin dealing to servers; stride it so
  // every block of arrivals samples the whole interval, not one short arc.
  const int stride = coprime_stride(n_betas);
  nodes.betas.resize(n_betas);
  for (int j = 0; j < n_betas; ++j) {
    nodes.betas[j] = family[(static_cast<std::int64_t>(j) * stride) % n_betas];
  }
  return nodes;
}

NodeSet make_nodes(const SchemeSpec& spec) {
  require_lcc(spec);
  return make_nodes(ceil_div(spec.n_servers, spec.poly_count),
                    spec.n_servers * (spec.comp_load / spec.poly_count));
}

std::vector<Eigen::VectorXd> coded_rows_at(const DataSet& data, const SchemeSpec& spec,
                                           const NodeSet& nodes, double z) {
  require_lcc(spec);
  validate(data);
  require_nodes_match(spec, nodes);
  const int group_size = static_cast<int>(nodes.alphas.size());
  const Barycentric bary(nodes.alphas);
  const std::vector<double> basis = bary.basis(z);
  return rows_from_basis(data, spec.poly_count, group_size, basis);
}

CodedTaskSet encode(const DataSet& data, const SchemeSpec& spec, const NodeSet& nodes) {
  require_lcc(spec);
  validate(data);
  require_nodes_match(spec, nodes);
  if (data.x.rows() != spec.n_servers) {
    throw std::invalid_argument("encode: data must have one row per server (N = K)");
  }
  const int n = spec.n_servers;
  const int group_size = static_cast<int>(nodes.alphas.size());
  const int msgs_per_server = spec.comp_load / spec.poly_count;
  const Barycentric bary(nodes.alphas);

  CodedTaskSet tasks;
  tasks.servers.resize(n);
  for (auto& s : tasks.servers) s.reserve(msgs_per_server);
  for (int m = 0; m < msgs_per_server; ++m) {
    for (int i = 0; i < n; ++i) {
      const double beta = nodes.betas[static_cast<std::size_t>(m) * n + i];
      const std::vector<double> basis = bary.basis(beta);
      tasks.servers[i].push_back(
          CodedMessage{beta, rows_from_basis(data, spec.poly_count, group_size, basis)});
    }
  }
  return tasks;
}

Eigen::VectorXd compute_message(const std::vector<Eigen::VectorXd>& rows,
                                const Eigen::VectorXd& theta) {
  if (rows.empty()) throw std::invalid_argument("compute_message: no coded rows");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(theta.size());
  for (const auto& row : rows) {
    if (row.size() != theta.size()) {
      throw std::invalid_argument("compute_message: dimension mismatch");
    }
    out += row * row.dot(theta);
  }
  return out;
}

Eigen::VectorXd decode(std::span<const double> points,
                       std::span<const Eigen::VectorXd> values,
                       std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("decode: no alphas");
  if (points.size() != values.size()) {
    throw std::invalid_argument("decode: points/values length mismatch");
  }
  const std::size_t need = 2 * alphas.size() - 1;
  if (points.size() < need) {
    throw std::invalid_argument("decode: fewer samples than the decoding threshold");
  }
  const Barycentric bary(points.subspan(0, need));
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(values[0].size());
  for (double a : alphas) {
    grad += bary.eval(values.subspan(0, need), a);
  }
  return grad;
}

Eigen::VectorXd full_gradient(const Eigen::VectorXd& xtx_theta, const Eigen::VectorXd& xty) {
  if (xtx_theta.size() != xty.size()) {
    throw std::invalid_argument("full_gradient: dimension mismatch");
  }
  return xtx_theta - xty;
}

}  // namespace dgd
