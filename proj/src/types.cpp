#include "dgd/types.hpp"

#include <cmath>
#include <stdexcept>

namespace dgd {

namespace {

int ceil_div(int a, int b) {
  return (a + b - 1) / b;
}

}  // namespace

void validate(const StragglerParams& params) {
  if (!(params.mu > 0.0) || !std::isfinite(params.mu)) {
    throw std::invalid_argument("StragglerParams: mu must be finite and > 0");
  }
  if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha)) {
    throw std::invalid_argument("StragglerParams: alpha must be finite and >= 0");
  }
}

void validate(const SchemeSpec& spec) {
  if (spec.n_servers < 1) {
    throw std::invalid_argument("SchemeSpec: n_servers must be >= 1");
  }
  if (spec.comp_load < 1 || spec.comp_load > spec.n_servers) {
    throw std::invalid_argument("SchemeSpec: comp_load must satisfy 1 <= r <= n_servers");
  }
  if (!(spec.tolerance_fraction > 0.0) || spec.tolerance_fraction > 1.0) {
    throw std::invalid_argument("SchemeSpec: tolerance_fraction must be in (0, 1]");
  }
  if (spec.kind == SchemeKind::lcc) {
    if (spec.poly_count < 1 || spec.poly_count > spec.comp_load ||
        spec.comp_load % spec.poly_count != 0) {
      throw std::invalid_argument("SchemeSpec: poly_count must divide comp_load (1 <= L <= r)");
    }
    // The gradient polynomial needs 2*ceil(N/L)-1 samples but only N*(r/L)
    // messages exist in total; r=1 is infeasible for any N >= 2.
    const int threshold = 2 * ceil_div(spec.n_servers, spec.poly_count) - 1;
    const int total = spec.n_servers * (spec.comp_load / spec.poly_count);
    if (threshold > total) {
      throw std::invalid_argument(
          "SchemeSpec: LCC threshold exceeds the total message count; increase comp_load");
    }
  } else if (spec.poly_count < 1) {
    throw std::invalid_argument("SchemeSpec: poly_count must be >= 1");
  }
}

int unit_cost(const SchemeSpec& spec) {
  switch (spec.kind) {
    case SchemeKind::lcc:
      return spec.poly_count;
    case SchemeKind::uc_mmc:
    case SchemeKind::uc_mmc_pg:
      return 1;
    case SchemeKind::gc_threshold:
      return spec.comp_load;
  }
  throw std::invalid_argument("unit_cost: unknown scheme kind");
}

int max_messages_per_server(const SchemeSpec& spec) {
  switch (spec.kind) {
    case SchemeKind::lcc:
      return spec.comp_load / spec.poly_count;
    case SchemeKind::uc_mmc:
    case SchemeKind::uc_mmc_pg:
      return spec.comp_load;
    case SchemeKind::gc_threshold:
      return 1;
  }
  throw std::invalid_argument("max_messages_per_server: unknown scheme kind");
}

std::optional<int> message_threshold(const SchemeSpec& spec) {
  switch (spec.kind) {
    case SchemeKind::lcc:
      return 2 * ceil_div(spec.n_servers, spec.poly_count) - 1;
    case SchemeKind::gc_threshold:
      return spec.n_servers - spec.comp_load + 1;
    case SchemeKind::uc_mmc:
    case SchemeKind::uc_mmc_pg:
      return std::nullopt;
  }
  throw std::invalid_argument("message_threshold: unknown scheme kind");
}

int coverage_target(const SchemeSpec& spec) {
  if (spec.kind == SchemeKind::uc_mmc_pg) {
    // Nudge below the ceiling so 0.9 * 10 -> 9 despite 9.000000000000002.
    return static_cast<int>(std::ceil(spec.tolerance_fraction * spec.n_servers - 1e-9));
  }
  return spec.n_servers;
}

std::string scheme_label(const SchemeSpec& spec) {
  switch (spec.kind) {
    case SchemeKind::lcc:
      if (spec.poly_count == spec.comp_load) return "LCC";
      if (spec.poly_count == 1) return "LCC-MMC";
      return "LCC-MMC-" + std::to_string(spec.poly_count);
    case SchemeKind::uc_mmc:
      return "UC-MMC";
    case SchemeKind::uc_mmc_pg:
      return "UC-MMC-PG";
    case SchemeKind::gc_threshold:
      return "GC";
  }
  return "?";
}

void validate(const DataSet& data) {
  if (data.x.rows() < 1 || data.x.cols() < 1) {
    throw std::invalid_argument("DataSet: x must be a non-empty N x d matrix");
  }
  if (data.y.size() != data.x.rows()) {
    throw std::invalid_argument("DataSet: y length must equal the number of rows of x");
  }
  if (!data.x.allFinite() || !data.y.allFinite()) {
    throw std::invalid_argument("DataSet: entries must be finite");
  }
}

}  // namespace dgd
