#include "presist/limits.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "presist/error.hpp"

namespace presist {

namespace {

void require_vertices(const Graph& g, Vertex s, Vertex t, bool distinct) {
  if (s >= g.num_vertices() || t >= g.num_vertices() || (distinct && s == t)) {
    std::ostringstream msg;
    msg << "invalid terminals (" << s << ", " << t << ") for " << g.num_vertices() << " vertices";
    throw Error(ErrorKind::InvalidParams, msg.str());
  }
}

}  // namespace

double mincut(const Graph& g, Vertex s, Vertex t) {
  require_vertices(g, s, t, true);
  // Each undirected edge is a pair of arcs with capacity w in both
  // directions; flow[l] > 0 means flow from e.i to e.j.
  const auto& edges = g.edges();
  std::vector<double> flow(edges.size(), 0.0);
  auto residual = [&](std::size_t l, Vertex from) {
    const double f = edges[l].i == from ? flow[l] : -flow[l];
    return edges[l].w - f;
  };

  double total = 0.0;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  while (true) {
    std::vector<std::size_t> via(g.num_vertices(), kNone);
    std::vector<bool> seen(g.num_vertices(), false);
    std::queue<Vertex> frontier;
    frontier.push(s);
    seen[s] = true;
    while (!frontier.empty() && !seen[t]) {
      const Vertex u = frontier.front();
      frontier.pop();
      for (const auto& nb : g.neighbors(u)) {
        if (seen[nb.v] || residual(nb.edge, u) <= 1e-15 * edges[nb.edge].w) continue;
        seen[nb.v] = true;
        via[nb.v] = nb.edge;
        frontier.push(nb.v);
      }
    }
    if (!seen[t]) break;

    double bottleneck = std::numeric_limits<double>::infinity();
    for (Vertex v = t; v != s;) {
      const auto& e = edges[via[v]];
      const Vertex u = e.i == v ? e.j : e.i;
      bottleneck = std::min(bottleneck, residual(via[v], u));
      v = u;
    }
    for (Vertex v = t; v != s;) {
      const auto l = via[v];
      const Vertex u = edges[l].i == v ? edges[l].j : edges[l].i;
      flow[l] += edges[l].i == u ? bottleneck : -bottleneck;
      v = u;
    }
    total += bottleneck;
  }
  return total;
}

double shortest_path(const Graph& g, Vertex s, Vertex t, bool weighted) {
  require_vertices(g, s, t, false);
  std::vector<double> dist(g.num_vertices(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[s] = 0.0;
  heap.emplace(0.0, s);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == t) return d;
    for (const auto& nb : g.neighbors(u)) {
      const double len = weighted ? g.edge(nb.edge).w : 1.0;
      if (d + len < dist[nb.v]) {
        dist[nb.v] = d + len;
        heap.emplace(dist[nb.v], nb.v);
      }
    }
  }
  return dist[t];
}

}  // namespace presist
