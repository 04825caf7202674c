#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "presist/generators.hpp"
#include "presist/solver.hpp"

namespace presist::cli {

/// Invalid flag or flag combination; exits with status 2.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& flag, const std::string& message)
      : std::runtime_error(flag.empty() ? message : flag + ": " + message) {}
};

struct RunConfig {
  std::string subcommand;

  // inputs
  std::string features;
  std::string graph;
  std::string distances;
  std::string labels;
  std::string pinv_cache;

  // dataset loading
  bool has_labels = true;
  std::string label_column = "last";
  std::size_t skip_rows = 0;
  std::string delimiter = ",";
  bool standardize = false;

  // k-NN graph construction
  double mu = 0.1;
  double sigma = 1.0;
  std::string symmetrization = "union";
  std::string on_disconnect = "fail";

  // generated graphs (when no --graph is given)
  std::string family;
  GeneratorParams generator;
  std::uint64_t graph_seed = 0;

  // distances
  double p = 2.0;
  std::string mode = "approx";
  std::string form = "metric";

  // clustering
  std::size_t k = 2;
  std::string method = "kmedoids";
  std::size_t start = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;

  // grids and sweeps
  std::vector<double> p_grid;
  std::vector<double> mu_grid;
  std::vector<double> sigma_grid;
  std::vector<std::string> methods;
  std::size_t repetitions = 10;
  std::size_t estimator_restarts = 5;
  std::size_t pairs = 20;

  // verify
  std::vector<std::string> suites;
  std::size_t verify_n = 10;
  std::size_t instances = 3;
  bool inject_fault = false;

  SolverConfig solver;

  // outputs
  std::string output;
  std::string report;
  std::string timing;
  std::string summary;
  std::string labels_out;

  /// Not part of the serialized form: results do not depend on it.
  std::size_t workers = 0;
};

/// Full configuration as JSON (everything except `workers`).
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Overlays the keys present in `doc` onto `cfg`. Accepts either a bare
/// configuration object or an artifact header {tool, version, config}.
/// Throws UsageError for unknown keys or wrongly typed values.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);

/// Reads a configuration and applies it. The file may be a JSON document,
/// a text artifact carrying a "# config" line, or a binary distance
/// matrix whose metadata holds the provenance. Throws UsageError.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// {tool, version, config}: the provenance block embedded in artifacts.
nlohmann::ordered_json provenance(const RunConfig& cfg);

/// Provenance as '#'-prefixed lines for text artifacts.
std::vector<std::string> provenance_lines(const RunConfig& cfg);

/// Worker count from PRESIST_WORKERS, or 0 (all cores) when unset.
/// Throws UsageError for a malformed value.
std::size_t default_workers();

}  // namespace presist::cli
