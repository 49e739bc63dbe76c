#pragma once

#include "dgd/rng.hpp"
#include "dgd/types.hpp"

namespace dgd {

// Per-server excess latency for one iteration. Every computation on the
// server takes alpha + y, so its j-th completed unit finishes at
// j * (alpha + y); this is the unique identical-duration model whose
// time-to-s-computations CDF is 1 - exp(-mu * (t/s - alpha)).
struct ServerDraw {
  double y = 0.0;
};

ServerDraw sample_server(const StragglerParams& params, Rng& rng);

// Pr(at least s messages of `cost` computations each are done by time t).
double prob_at_least(int s, double t, int cost, const StragglerParams& params);

// Pr(exactly s of the server's max_units messages are done by time t).
double prob_exactly(int s, double t, int cost, int max_units, const StragglerParams& params);

}  // namespace dgd
