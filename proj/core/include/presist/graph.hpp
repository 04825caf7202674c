#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace presist {

using Vertex = std::size_t;

/// Undirected weighted edge. Canonical form has i > j.
struct Edge {
  Vertex i = 0;
  Vertex j = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Identifies the graph a derived artifact (L+, distance matrix) was computed from.
struct GraphFingerprint {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t hash = 0;

  friend bool operator==(const GraphFingerprint&, const GraphFingerprint&) = default;
};

struct Neighbor {
  Vertex v;
  std::size_t edge;
};

struct BuildOptions {
  // When set, a disconnected input is restricted to its largest component
  // (ties broken by the component containing the lowest vertex) instead of
  // raising Disconnected.
  bool largest_component = false;
};

struct RestrictedGraph;

/// Weighted undirected connected graph with a fixed edge order.
///
/// Immutable after construction. Edge order is insertion order after
/// canonicalisation, and fixes the row order of the incidence matrix.
class Graph {
 public:
  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t l) const { return edges_[l]; }

  /// Edge weights in edge order.
  Eigen::VectorXd weights() const;
  std::span<const Neighbor> neighbors(Vertex v) const;
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }

  double min_weight() const noexcept { return min_w_; }
  double max_weight() const noexcept { return max_w_; }
  bool is_unweighted() const noexcept { return min_w_ == 1.0 && max_w_ == 1.0; }

  const GraphFingerprint& fingerprint() const noexcept { return fingerprint_; }

  /// Same topology, all weights set to one.
  Graph unweighted() const;

 private:
  friend RestrictedGraph build_graph_restricted(std::size_t, std::vector<Edge>, const BuildOptions&);

  Graph() = default;
  void finalize();

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  double min_w_ = 0.0;
  double max_w_ = 0.0;
  GraphFingerprint fingerprint_;
};

/// Result of a build that may have been restricted to the largest component.
struct RestrictedGraph {
  Graph graph;
  /// kept[new_index] = original vertex index.
  std::vector<Vertex> kept;
};

/// Validates and canonicalises an edge list.
///
/// Throws Error{InvalidParams} for n == 0 or out-of-range indices,
/// Error{SelfLoop}, Error{DuplicateEdge}, Error{NonPositiveWeight}, and
/// DisconnectedError when the graph is not connected (unless
/// options.largest_component is set, in which case the result keeps only
/// the largest component, relabelled in increasing original order).
Graph build_graph(std::size_t n, std::vector<Edge> edges, const BuildOptions& options = {});

/// Like build_graph but also reports which original vertices survived.
RestrictedGraph build_graph_restricted(std::size_t n, std::vector<Edge> edges,
                                       const BuildOptions& options = {});

/// Connected components of an arbitrary edge list, each sorted, ordered by
/// their smallest vertex.
std::vector<std::vector<Vertex>> connected_components(std::size_t n, std::span<const Edge> edges);

/// m x n signed incidence matrix: row l has +1 at column i and -1 at column j.
Eigen::MatrixXd incidence(const Graph& g);

/// Dense Laplacian D - A.
Eigen::MatrixXd laplacian(const Graph& g);

/// Dense Laplacian assembled as C^T W C.
Eigen::MatrixXd laplacian_from_incidence(const Graph& g);

bool is_tree(const Graph& g) noexcept;

}  // namespace presist
