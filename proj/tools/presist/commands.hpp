#pragma once

#include "run_config.hpp"

namespace presist::cli {

// Each returns the process exit status (0 success, 1 property or
// convergence failure). Validation problems throw UsageError or
// presist::Error and are mapped to status 2 by the caller.
int cmd_build_graph(const RunConfig& cfg);
int cmd_distances(const RunConfig& cfg);
int cmd_cluster(const RunConfig& cfg);
int cmd_bench(const RunConfig& cfg);
int cmd_bound(const RunConfig& cfg);
int cmd_ratio(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

/// Flag-level checks run before any computation. Throws UsageError.
void validate(const RunConfig& cfg);

}  // namespace presist::cli
