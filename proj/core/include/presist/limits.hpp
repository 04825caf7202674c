#pragma once

#include "presist/graph.hpp"

namespace presist {

/// Minimum s-t cut weight, via shortest augmenting paths (Edmonds-Karp)
/// on real capacities. O(V E^2); intended for small graphs.
/// Throws Error{InvalidParams} unless s and t are distinct vertices.
double mincut(const Graph& g, Vertex s, Vertex t);

/// Dijkstra distance from s to t. With weighted = false every edge has
/// length one (hop count); otherwise the edge weight is its length.
double shortest_path(const Graph& g, Vertex s, Vertex t, bool weighted = false);

}  // namespace presist
