#include "dgd/straggler.hpp"

#include <cmath>
#include <stdexcept>

namespace dgd {

ServerDraw sample_server(const StragglerParams& params, Rng& rng) {
  return ServerDraw{rng.exponential(params.mu)};
}

double prob_at_least(int s, double t, int cost, const StragglerParams& params) {
  if (s < 1 || cost < 1) {
    throw std::invalid_argument("prob_at_least: s and cost must be >= 1");
  }
  const double units = static_cast<double>(s) * cost;
  if (t < units * params.alpha) return 0.0;
  const double p = 1.0 - std::exp(-params.mu * (t / units - params.alpha));
  return p < 0.0 ? 0.0 : p;
}

double prob_exactly(int s, double t, int cost, int max_units, const StragglerParams& params) {
  if (s < 0 || s > max_units) {
    throw std::invalid_argument("prob_exactly: s must satisfy 0 <= s <= max_units");
  }
  // P_s = F_s - F_{s+1}, with F_0 = 1 and F_{max_units+1} = 0.
  const double hi = (s == 0) ? 1.0 : prob_at_least(s, t, cost, params);
  const double lo = (s == max_units) ? 0.0 : prob_at_least(s + 1, t, cost, params);
  const double p = hi - lo;
  return p < 0.0 ? 0.0 : p;
}

}  // namespace dgd
