#include "dgd/analytic.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <string>
#include <vector>

#include "dgd/straggler.hpp"
#include "dgd/uncoded.hpp"

namespace dgd {

namespace {

int ceil_div(int a, int b) {
  return (a + b - 1) / b;
}

// Exact below n = 30 (all intermediates stay under 2^53), log-space above.
double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 30) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

void validate(const UnitModel& model) {
  if (model.n_servers < 1 || model.max_units < 1 || model.cost < 1 || model.m_threshold < 1) {
    throw std::invalid_argument("UnitModel: all fields must be >= 1");
  }
  if (static_cast<std::int64_t>(model.n_servers) * model.max_units < model.m_threshold) {
    throw std::invalid_argument("UnitModel: m_threshold exceeds n_servers * max_units");
  }
}

struct CompositionSum {
  const std::vector<std::vector<double>>& powers;  // powers[s][k] = P_s(t)^k
  int n_servers;
  int max_units;
  int m_threshold;
  double total = 0.0;
  std::int64_t visited = 0;

  // Enumerates N_s servers finishing exactly s messages, s ascending; prob
  // carries the partial multinomial product.
  void recurse(int s, int remaining, int units, double prob) {
    if (s == max_units) {
      ++visited;
      if (units + max_units * remaining >= m_threshold) {
        total += prob * powers[s][remaining];
      }
      return;
    }
    for (int count = 0; count <= remaining; ++count) {
      recurse(s + 1, remaining - count, units + s * count,
              prob * binomial(remaining, count) * powers[s][count]);
    }
  }
};

}  // namespace

UnitModel unit_model_for(const SchemeSpec& spec) {
  validate(spec);
  const auto threshold = message_threshold(spec);
  if (!threshold) {
    throw std::invalid_argument(
        "unit_model_for: " + scheme_label(spec) + " completes on coverage, not a message count");
  }
  return UnitModel{spec.n_servers, max_messages_per_server(spec), unit_cost(spec), *threshold};
}

double count_threshold_cdf(double t, const UnitModel& model, const StragglerParams& params,
                           std::int64_t cap, std::int64_t* visited) {
  validate(model);
  validate(params);
  const double compositions = binomial(model.n_servers + model.max_units, model.max_units);
  if (compositions > static_cast<double>(cap)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "count_threshold_cdf: %.4g compositions exceed the enumeration cap %lld; "
                  "use the Monte Carlo simulator instead",
                  compositions, static_cast<long long>(cap));
    throw EnumerationCapError(msg);
  }

  std::vector<std::vector<double>> powers(model.max_units + 1);
  for (int s = 0; s <= model.max_units; ++s) {
    const double p = prob_exactly(s, t, model.cost, model.max_units, params);
    powers[s].resize(model.n_servers + 1);
    powers[s][0] = 1.0;
    for (int k = 1; k <= model.n_servers; ++k) powers[s][k] = powers[s][k - 1] * p;
  }

  CompositionSum sum{powers, model.n_servers, model.max_units, model.m_threshold};
  sum.recurse(0, model.n_servers, 0, 1.0);
  if (visited) *visited = sum.visited;
  return std::clamp(sum.total, 0.0, 1.0);
}

double expected_completion(const UnitModel& model, const StragglerParams& params,
                           double rel_tol, std::int64_t cap) {
  validate(model);
  validate(params);
  if (!(rel_tol > 0.0)) throw std::invalid_argument("expected_completion: rel_tol must be > 0");

  const auto survival = [&](double t) { return 1.0 - count_threshold_cdf(t, model, params, cap); };

  // Survival is identically 1 below the deterministic completion bound.
  const double lower = ceil_div(model.m_threshold, model.n_servers) *
                       static_cast<double>(model.cost) * params.alpha;
  double span = std::max(1.0 / params.mu, params.alpha);
  while (survival(lower + span) >= 1e-9) span *= 2.0;
  const double upper = lower + span;

  double estimate = 0.5 * span * (survival(lower) + survival(upper));
  std::int64_t intervals = 1;
  for (int depth = 1; depth <= 24; ++depth) {
    const double h = span / static_cast<double>(intervals);
    double mid_sum = 0.0;
    for (std::int64_t i = 0; i < intervals; ++i) {
      mid_sum += survival(lower + (static_cast<double>(i) + 0.5) * h);
    }
    const double refined = 0.5 * estimate + 0.5 * h * mid_sum;
    if (depth >= 3 && std::abs(refined - estimate) <= rel_tol * std::max(std::abs(refined), 1e-300)) {
      return lower + refined;
    }
    estimate = refined;
    intervals *= 2;
  }
  throw std::runtime_error("expected_completion: quadrature did not converge");
}

double server_threshold_cdf(double t, int n, int r, int k_th, const StragglerParams& params) {
  validate(params);
  if (n < 1 || r < 1) throw std::invalid_argument("server_threshold_cdf: n and r must be >= 1");
  if (k_th < 1 || k_th > n) {
    throw std::invalid_argument("server_threshold_cdf: need 1 <= k_th <= n");
  }
  if (t < static_cast<double>(r) * params.alpha) return 0.0;
  const double p = prob_at_least(1, t, r, params);
  const double q = 1.0 - p;
  double total = 0.0;
  for (int k = k_th; k <= n; ++k) {
    total += binomial(n, k) * std::pow(p, k) * std::pow(q, n - k);
  }
  return std::clamp(total, 0.0, 1.0);
}

double coverage_cdf_bruteforce(double t, int n, int r, int k_target,
                               const StragglerParams& params, std::int64_t cap) {
  validate(params);
  if (n < 1 || r < 1 || r > n) {
    throw std::invalid_argument("coverage_cdf_bruteforce: need 1 <= r <= n");
  }
  if (k_target < 0 || k_target > n) {
    throw std::invalid_argument("coverage_cdf_bruteforce: need 0 <= k_target <= n");
  }
  const double vectors = std::pow(static_cast<double>(r + 1), n);
  if (vectors > static_cast<double>(cap)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "coverage_cdf_bruteforce: %.4g count vectors exceed the enumeration cap %lld; "
                  "use the Monte Carlo simulator instead",
                  vectors, static_cast<long long>(cap));
    throw EnumerationCapError(msg);
  }

  std::vector<double> p(r + 1);
  for (int s = 0; s <= r; ++s) p[s] = prob_exactly(s, t, 1, r, params);

  const AssignmentMatrix assign = circular_assignment(n, r);
  std::vector<int> counts(n, 0);
  double total = 0.0;
  while (true) {
    if (coverage_count(covered_set(assign, counts)) >= k_target) {
      double prob = 1.0;
      for (int k = 0; k < n; ++k) prob *= p[counts[k]];
      total += prob;
    }
    int pos = 0;
    while (pos < n && counts[pos] == r) counts[pos++] = 0;
    if (pos == n) break;
    ++counts[pos];
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace dgd
