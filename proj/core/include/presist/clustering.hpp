#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "presist/distance_matrix.hpp"
#include "presist/graph.hpp"

namespace presist {

struct ClusterResult {
  /// Cluster id in [0, k) per point.
  std::vector<std::size_t> assignments;
  /// Point index of each cluster's center; cluster c is centers[c].
  std::vector<Vertex> centers;
  /// Sum of distances to the assigned medoid (k-medoids), covering radius
  /// (farthest-first) or within-cluster sum of squares (spectral).
  double objective = 0.0;
  std::uint64_t seed = 0;
  /// SWAP passes (k-medoids) or Lloyd iterations of the best run (spectral).
  std::size_t iterations = 0;
  std::string method;
  /// k-medoids: objective after BUILD/initialisation and after each swap
  /// of the winning restart.
  std::vector<double> objective_history;
};

struct KMedoidsOptions {
  /// Restart 0 starts from the BUILD medoids; later restarts from seeded
  /// random medoids.
  std::size_t restarts = 10;
  std::size_t max_swaps = 10000;
};

/// PAM: BUILD (or random) initialisation, then best-improvement SWAP with
/// a strict 1e-12 improvement threshold and lowest-index tie-breaks. The
/// best restart by (objective, restart index) is returned. Centers are
/// sorted ascending and each medoid always belongs to its own cluster.
/// Throws Error{InvalidK} unless 2 <= k <= n.
ClusterResult k_medoids(const DistanceMatrix& d, std::size_t k, std::uint64_t seed,
                        const KMedoidsOptions& options = {});

/// Gonzalez greedy k-center from `start`; centers keep selection order.
/// Throws Error{InvalidK} unless 1 <= k <= n.
ClusterResult farthest_first(const DistanceMatrix& d, std::size_t k, Vertex start = 0);

/// Unnormalised spectral clustering: rows of the k eigenvectors of L with
/// the smallest eigenvalues, clustered by k-means++ (10 restarts, 100
/// iterations). Centers are the points nearest each centroid.
/// Throws Error{InvalidK}, Error{EigenFailure}.
ClusterResult sc2_baseline(const Graph& g, std::size_t k, std::uint64_t seed);

/// Nearest-center assignment, ties to the lowest point index among the
/// tied centers. Returns positions into `centers`.
std::vector<std::size_t> assign_nearest(const DistanceMatrix& d, const std::vector<Vertex>& centers);

/// Structured text form {assignments, centers, objective, seed, method,
/// iterations, params}; `params_json` must be a JSON document.
std::string to_json(const ClusterResult& result, std::string_view params_json = "{}");
ClusterResult cluster_result_from_json(std::string_view text);

struct Evaluation {
  double error_rate = 0.0;
  /// matching[c] is the dense true-class id matched to predicted cluster c
  /// (both in first-appearance order), or -1 when left unmatched.
  std::vector<long> matching;
};

/// Minimum misclassification rate over one-to-one matchings of predicted
/// clusters to true classes: exhaustive for up to 6 labels, Hungarian
/// assignment otherwise. Throws Error{LengthMismatch}.
Evaluation error_rate(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth);

}  // namespace presist
