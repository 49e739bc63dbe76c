#pragma once

#include <cstdint>
#include <stdexcept>

#include "dgd/types.hpp"

namespace dgd {

// Count-threshold timing model: n_servers each send up to max_units messages
// of `cost` computations; the gradient is decodable once m_threshold messages
// have arrived.
struct UnitModel {
  int n_servers = 1;
  int max_units = 1;
  int cost = 1;
  int m_threshold = 1;
};

// Unit model for a count-threshold scheme (LCC family or GC). Throws for UC
// kinds, whose completion is coverage-based, not count-based.
UnitModel unit_model_for(const SchemeSpec& spec);

struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

// Exact Pr(T <= t): sums, over every realization of per-server completion
// counts reaching m_threshold total messages, the multinomial probability of
// that realization. Enumerates C(n_servers + max_units, max_units)
// compositions and throws EnumerationCapError past `cap` (use the Monte Carlo
// simulator there). `visited`, when non-null, receives the composition count.
double count_threshold_cdf(double t, const UnitModel& model, const StragglerParams& params,
                           std::int64_t cap = kDefaultEnumerationCap,
                           std::int64_t* visited = nullptr);

// E[T] as the integral of the survival function from the deterministic lower
// bound, composite trapezoid with interval halving until successive
// refinements agree to rel_tol; the upper limit grows geometrically until the
// survival drops below 1e-9.
double expected_completion(const UnitModel& model, const StragglerParams& params,
                           double rel_tol = 1e-6, std::int64_t cap = kDefaultEnumerationCap);

// Pr(T <= t) when completion needs k_th of n servers to each finish all r of
// their computations.
double server_threshold_cdf(double t, int n, int r, int k_th, const StragglerParams& params);

// Exact coverage CDF for circular-shift uncoded schemes by enumerating all
// (r+1)^n per-server count vectors; an oracle for small instances only.
double coverage_cdf_bruteforce(double t, int n, int r, int k_target,
                               const StragglerParams& params,
                               std::int64_t cap = kDefaultEnumerationCap);

}  // namespace dgd
