#include "presist/graph.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "detail.hpp"
#include "presist/error.hpp"

namespace presist {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::NonNumericFeature: return "NonNumericFeature";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string describe_components(const std::vector<std::vector<std::size_t>>& components) {
  std::ostringstream out;
  out << components.size() << " components:";
  for (const auto& c : components) {
    out << " {";
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k > 0) out << ',';
      if (k == 8 && c.size() > 10) {
        out << "... (" << c.size() << " vertices)";
        break;
      }
      out << c[k];
    }
    out << '}';
  }
  return out.str();
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// FNV-1a over the canonical edge sequence.
std::uint64_t hash_edges(std::size_t n, const std::vector<Edge>& edges) {
  detail::Fnv1a h;
  h.mix(static_cast<std::uint64_t>(n));
  for (const auto& e : edges) {
    h.mix(static_cast<std::uint64_t>(e.i));
    h.mix(static_cast<std::uint64_t>(e.j));
    h.mix(e.w);
  }
  return h.value();
}

std::vector<Edge> canonicalize(std::size_t n, std::vector<Edge> edges) {
  if (n == 0) throw Error(ErrorKind::InvalidParams, "graph must have at least one vertex");
  std::set<std::pair<Vertex, Vertex>> seen;
  for (auto& e : edges) {
    if (e.i >= n || e.j >= n) {
      std::ostringstream msg;
      msg << "edge (" << e.i << ", " << e.j << ") has an index outside [0, " << n << ")";
      throw Error(ErrorKind::InvalidParams, msg.str());
    }
    if (e.i == e.j) {
      throw Error(ErrorKind::SelfLoop, "self-loop at vertex " + std::to_string(e.i));
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      std::ostringstream msg;
      msg << "edge (" << e.i << ", " << e.j << ") has weight " << e.w;
      throw Error(ErrorKind::NonPositiveWeight, msg.str());
    }
    if (e.i < e.j) std::swap(e.i, e.j);
    if (!seen.emplace(e.i, e.j).second) {
      std::ostringstream msg;
      msg << "edge (" << e.i << ", " << e.j << ") appears more than once";
      throw Error(ErrorKind::DuplicateEdge, msg.str());
    }
  }
  return edges;
}

}  // namespace

DisconnectedError::DisconnectedError(std::vector<std::vector<std::size_t>> components)
    : Error(ErrorKind::Disconnected, describe_components(components)),
      components_(std::move(components)) {}

ParseError::ParseError(ErrorKind kind, std::size_t row, std::size_t column, const std::string& message)
    : Error(kind, "row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + message),
      row_(row),
      column_(column) {}

Eigen::VectorXd Graph::weights() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(edges_.size()));
  for (std::size_t l = 0; l < edges_.size(); ++l) w[static_cast<Eigen::Index>(l)] = edges_[l].w;
  return w;
}

std::span<const Neighbor> Graph::neighbors(Vertex v) const {
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

void Graph::finalize() {
  offsets_.assign(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.i + 1];
    ++offsets_[e.j + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t l = 0; l < edges_.size(); ++l) {
    const auto& e = edges_[l];
    adjacency_[cursor[e.i]++] = {e.j, l};
    adjacency_[cursor[e.j]++] = {e.i, l};
  }
  min_w_ = edges_.empty() ? 0.0 : edges_.front().w;
  max_w_ = min_w_;
  for (const auto& e : edges_) {
    min_w_ = std::min(min_w_, e.w);
    max_w_ = std::max(max_w_, e.w);
  }
  fingerprint_ = {n_, edges_.size(), hash_edges(n_, edges_)};
}

Graph Graph::unweighted() const {
  Graph g;
  g.n_ = n_;
  g.edges_ = edges_;
  for (auto& e : g.edges_) e.w = 1.0;
  g.finalize();
  return g;
}

std::vector<std::vector<Vertex>> connected_components(std::size_t n, std::span<const Edge> edges) {
  UnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.i, e.j);
  std::vector<std::vector<Vertex>> components;
  std::vector<std::size_t> slot(n, n);
  for (Vertex v = 0; v < n; ++v) {
    const auto root = uf.find(v);
    if (slot[root] == n) {
      slot[root] = components.size();
      components.emplace_back();
    }
    components[slot[root]].push_back(v);
  }
  return components;
}

RestrictedGraph build_graph_restricted(std::size_t n, std::vector<Edge> edges, const BuildOptions& options) {
  edges = canonicalize(n, std::move(edges));
  auto components = connected_components(n, edges);

  std::vector<Vertex> kept(n);
  std::iota(kept.begin(), kept.end(), 0);
  if (components.size() > 1) {
    if (!options.largest_component) throw DisconnectedError(std::move(components));
    const auto largest = std::max_element(components.begin(), components.end(),
                                          [](const auto& a, const auto& b) { return a.size() < b.size(); });
    kept = *largest;
    std::vector<std::size_t> relabel(n, n);
    for (std::size_t k = 0; k < kept.size(); ++k) relabel[kept[k]] = k;
    std::vector<Edge> restricted;
    for (const auto& e : edges) {
      if (relabel[e.i] != n) restricted.push_back({relabel[e.i], relabel[e.j], e.w});
    }
    edges = std::move(restricted);
    n = kept.size();
  }

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.finalize();
  return {std::move(g), std::move(kept)};
}

Graph build_graph(std::size_t n, std::vector<Edge> edges, const BuildOptions& options) {
  return build_graph_restricted(n, std::move(edges), options).graph;
}

Eigen::MatrixXd incidence(const Graph& g) {
  const auto m = static_cast<Eigen::Index>(g.num_edges());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(g.num_vertices()));
  for (Eigen::Index l = 0; l < m; ++l) {
    const auto& e = g.edge(static_cast<std::size_t>(l));
    c(l, static_cast<Eigen::Index>(e.i)) = 1.0;
    c(l, static_cast<Eigen::Index>(e.j)) = -1.0;
  }
  return c;
}

Eigen::MatrixXd laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    lap(i, j) -= e.w;
    lap(j, i) -= e.w;
    lap(i, i) += e.w;
    lap(j, j) += e.w;
  }
  return lap;
}

Eigen::MatrixXd laplacian_from_incidence(const Graph& g) {
  const Eigen::MatrixXd c = incidence(g);
  return c.transpose() * g.weights().asDiagonal() * c;
}

bool is_tree(const Graph& g) noexcept { return g.num_edges() + 1 == g.num_vertices(); }

}  // namespace presist
