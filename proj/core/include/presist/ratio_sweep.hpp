#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "presist/graph.hpp"
#include "presist/operator_norm.hpp"
#include "presist/solver.hpp"

namespace presist {

struct RatioRow {
  double p = 2.0;
  Vertex i = 0;
  Vertex j = 0;
  double approx_metric = 0.0;
  double exact_metric = 0.0;
  /// approx_metric / exact_metric; at least 1 up to solver accuracy.
  double ratio = 1.0;
  double alpha = 1.0;
  /// alpha^q with the estimated alpha.
  double alpha_q = 1.0;
  /// Guaranteed ceiling^q (interpolation bound on alpha).
  double ceiling_q = 1.0;
  bool converged = true;
  /// Empty, or the solver failure for this pair.
  std::string note;
};

struct RatioSweepOptions {
  /// Pairs sampled without replacement (all pairs when larger).
  std::size_t sample_pairs = 20;
  std::uint64_t seed = 0;
  SolverConfig solver;
  EstimatorSettings estimator;
  std::size_t workers = 1;
};

/// For each p, compares the approximate and exact metric on the sampled
/// pairs and emits the alpha^q ceiling. Asserts nothing.
/// Throws Error{InvalidP} if any p <= 1.
std::vector<RatioRow> ratio_sweep(const Graph& g, const std::vector<double>& p_grid,
                                  const RatioSweepOptions& options = {});

void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows);

}  // namespace presist
