#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "presist/dataset.hpp"
#include "presist/graph.hpp"
#include "presist/knn_graph.hpp"
#include "presist/solver.hpp"

namespace presist {

enum class BenchMethod {
  KMedoidsApprox,
  KMedoidsExact,
  KMedoidsP2,
  FarthestFirstApprox,
  FarthestFirstExact,
  FarthestFirstP2,
  Sc2,
};

std::string_view to_string(BenchMethod m) noexcept;
std::optional<BenchMethod> parse_bench_method(std::string_view name) noexcept;

/// True for methods whose result does not depend on p (recorded at p = 2).
bool is_p_independent(BenchMethod m) noexcept;

struct BenchConfig {
  std::vector<double> mu_grid{0.04, 0.06, 0.08, 0.1, 1.0};
  std::vector<double> sigma_grid{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  std::vector<double> p_grid{1.1, 1.4, 1.7, 2.0, 2.3, 2.6, 2.9, 5.0, 10.0, 100.0, 1000.0};
  std::vector<BenchMethod> methods{BenchMethod::KMedoidsApprox, BenchMethod::KMedoidsP2};
  std::size_t repetitions = 10;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Restarts per k-medoids run.
  std::size_t kmedoids_restarts = 10;
  Symmetrization symmetrization = Symmetrization::Union;
  OnDisconnect on_disconnect = OnDisconnect::Fail;
  /// Recorded only; the caller standardises the dataset.
  bool standardized = false;
  SolverConfig solver;
};

struct BenchRecord {
  double mu = 0.0;
  double sigma = 0.0;
  double p = 0.0;
  BenchMethod method = BenchMethod::KMedoidsApprox;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  /// NaN when the cell failed.
  double error_rate = 0.0;
  /// Distance computation (shared by the cell) plus clustering time.
  double wall_seconds = 0.0;
  /// "ok" or the failure message.
  std::string status = "ok";
  /// Points evaluated (smaller than the dataset after restriction).
  std::size_t points = 0;
};

struct BenchSummary {
  double mu = 0.0;
  double sigma = 0.0;
  double p = 0.0;
  BenchMethod method = BenchMethod::KMedoidsApprox;
  double mean_error = 0.0;
  double sd_error = 0.0;
  std::size_t runs = 0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  /// Mean and standard deviation per (mu, sigma, p, method) over the
  /// successful repetitions, in grid order.
  std::vector<BenchSummary> cells;
  /// Lowest mean error per method (first in grid order on ties).
  std::vector<BenchSummary> best;
};

/// Grid search: for each (mu, sigma) build the k-NN graph, then for every
/// p and method compute distances, cluster with k = number of classes
/// and score against the labels. Failing cells are recorded and skipped.
/// Deterministic for a given config, independent of `workers`.
/// Throws Error{InvalidParams} for an unlabeled dataset or empty grids.
BenchResult bench_grid(const FeatureDataset& ds, const BenchConfig& config);

/// Records as CSV. Timing is left out unless requested so that repeated
/// runs compare byte for byte.
void write_bench_records_csv(std::ostream& out, const BenchResult& result, bool include_timing = false);
void write_bench_timing_csv(std::ostream& out, const BenchResult& result);
/// {config, cells, best} as JSON text.
std::string bench_summary_json(const BenchResult& result, const BenchConfig& config);

struct PairTiming {
  std::size_t pairs = 0;
  double pinv_seconds = 0.0;
  /// Approximation time per pair with L+ reused, pseudoinverse excluded.
  double approx_per_pair = 0.0;
  /// (pinv_seconds + all approximations) / pairs.
  double approx_amortized_per_pair = 0.0;
  double exact_per_pair = 0.0;
  std::size_t exact_unconverged = 0;
};

/// Times `pairs` seeded random vertex pairs both ways on one graph.
PairTiming compare_pair_timing(const Graph& g, double p, std::size_t pairs, std::uint64_t seed,
                               const SolverConfig& solver = {});

}  // namespace presist
