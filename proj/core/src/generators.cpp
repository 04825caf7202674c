#include "presist/generators.hpp"

#include <array>
#include <random>
#include <utility>
#include <vector>

#include "presist/error.hpp"

namespace presist {

namespace {

constexpr std::array<std::pair<GraphFamily, std::string_view>, 11> kFamilyNames{{
    {GraphFamily::Path, "path"},
    {GraphFamily::Cycle, "cycle"},
    {GraphFamily::Complete, "complete"},
    {GraphFamily::Star, "star"},
    {GraphFamily::RandomTree, "random_tree"},
    {GraphFamily::GnpConnected, "gnp_connected"},
    {GraphFamily::BroomA, "broom_a"},
    {GraphFamily::BroomB, "broom_b"},
    {GraphFamily::ExampleG1, "example_g1"},
    {GraphFamily::ExampleG2, "example_g2"},
    {GraphFamily::ExampleG3, "example_g3"},
}};

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidParams, message);
}

class WeightSampler {
 public:
  WeightSampler(const GeneratorParams& params, std::mt19937_64& rng) : params_(params), rng_(rng) {
    require(params.weight_min > 0.0 && params.weight_max >= params.weight_min,
            "weights require 0 < weight_min <= weight_max");
  }

  double operator()() {
    if (params_.weight_min == params_.weight_max) return params_.weight_min;
    return std::uniform_real_distribution<double>(params_.weight_min, params_.weight_max)(rng_);
  }

 private:
  const GeneratorParams& params_;
  std::mt19937_64& rng_;
};

void add_clique(std::vector<Edge>& edges, Vertex first, Vertex last) {
  for (Vertex a = first; a <= last; ++a) {
    for (Vertex b = first; b < a; ++b) edges.push_back({a, b, 1.0});
  }
}

std::vector<Edge> broom_edges(std::size_t delta, std::size_t zeta) {
  std::vector<Edge> edges;
  Vertex next = 2;
  for (std::size_t line = 0; line < delta; ++line) {
    Vertex prev = kBroomStart;
    for (std::size_t step = 1; step < zeta; ++step) {
      edges.push_back({next, prev, 1.0});
      prev = next++;
    }
    edges.push_back({prev, kBroomEnd, 1.0});
  }
  return edges;
}

}  // namespace

std::string_view to_string(GraphFamily family) noexcept {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

std::optional<GraphFamily> parse_graph_family(std::string_view name) noexcept {
  for (const auto& [f, candidate] : kFamilyNames) {
    if (candidate == name) return f;
  }
  return std::nullopt;
}

Graph generate(GraphFamily family, const GeneratorParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WeightSampler weight(params, rng);
  const std::size_t n = params.n;
  std::vector<Edge> edges;

  switch (family) {
    case GraphFamily::Path:
      require(n >= 2, "path needs n >= 2");
      for (Vertex v = 1; v < n; ++v) edges.push_back({v, v - 1, weight()});
      return build_graph(n, std::move(edges));

    case GraphFamily::Cycle:
      require(n >= 3, "cycle needs n >= 3");
      for (Vertex v = 1; v < n; ++v) edges.push_back({v, v - 1, weight()});
      edges.push_back({n - 1, 0, weight()});
      return build_graph(n, std::move(edges));

    case GraphFamily::Complete:
      require(n >= 2, "complete graph needs n >= 2");
      for (Vertex a = 1; a < n; ++a) {
        for (Vertex b = 0; b < a; ++b) edges.push_back({a, b, weight()});
      }
      return build_graph(n, std::move(edges));

    case GraphFamily::Star:
      require(n >= 2, "star needs n >= 2");
      for (Vertex v = 1; v < n; ++v) edges.push_back({v, 0, weight()});
      return build_graph(n, std::move(edges));

    case GraphFamily::RandomTree:
      require(n >= 2, "random_tree needs n >= 2");
      for (Vertex v = 1; v < n; ++v) {
        const auto parent = std::uniform_int_distribution<Vertex>(0, v - 1)(rng);
        edges.push_back({v, parent, weight()});
      }
      return build_graph(n, std::move(edges));

    case GraphFamily::GnpConnected: {
      require(n >= 2, "gnp_connected needs n >= 2");
      require(params.edge_probability > 0.0 && params.edge_probability <= 1.0,
              "gnp_connected needs edge_probability in (0, 1]");
      std::bernoulli_distribution coin(params.edge_probability);
      for (std::size_t attempt = 0; attempt < params.max_attempts; ++attempt) {
        edges.clear();
        for (Vertex a = 1; a < n; ++a) {
          for (Vertex b = 0; b < a; ++b) {
            if (coin(rng)) edges.push_back({a, b, weight()});
          }
        }
        if (connected_components(n, edges).size() == 1) return build_graph(n, std::move(edges));
      }
      throw Error(ErrorKind::InvalidParams, "gnp_connected found no connected sample within max_attempts");
    }

    case GraphFamily::BroomA:
    case GraphFamily::BroomB: {
      require(params.delta >= 2 && params.zeta >= 2, "broom needs delta >= 2 and zeta >= 2");
      edges = broom_edges(params.delta, params.zeta);
      if (family == GraphFamily::BroomB) edges.push_back({kBroomEnd, kBroomStart, 1.0});
      return build_graph(params.delta * (params.zeta - 1) + 2, std::move(edges));
    }

    case GraphFamily::ExampleG1:
      edges.push_back({1, 0, 1.0});
      add_clique(edges, 1, 5);
      add_clique(edges, 6, 10);
      for (Vertex a : {6, 7}) {
        for (Vertex b : {4, 5}) edges.push_back({a, b, 1.0});
      }
      return build_graph(11, std::move(edges));

    case GraphFamily::ExampleG2:
      add_clique(edges, 0, 4);
      for (Vertex v = 5; v <= 9; ++v) edges.push_back({v, v - 1, 1.0});
      edges.push_back({9, 4, 1.0});
      return build_graph(10, std::move(edges));

    case GraphFamily::ExampleG3:
      require(params.epsilon > 0.0 && params.epsilon < 1.0, "example_g3 needs epsilon in (0, 1)");
      for (Vertex v = 1; v < 6; ++v) edges.push_back({v, v - 1, v == 4 ? params.epsilon : 1.0});
      return build_graph(6, std::move(edges));
  }
  throw Error(ErrorKind::InvalidParams, "unknown graph family");
}

}  // namespace presist
