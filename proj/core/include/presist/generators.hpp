#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "presist/graph.hpp"

namespace presist {

enum class GraphFamily {
  Path,
  Cycle,
  Complete,
  Star,
  RandomTree,
  GnpConnected,
  BroomA,
  BroomB,
  ExampleG1,
  ExampleG2,
  ExampleG3,
};

std::string_view to_string(GraphFamily family) noexcept;
std::optional<GraphFamily> parse_graph_family(std::string_view name) noexcept;

/// Union of every family's parameters; each family reads only what it needs.
struct GeneratorParams {
  std::size_t n = 10;
  /// Edge probability for gnp_connected.
  double edge_probability = 0.3;
  /// Number of parallel lines of a broom graph.
  std::size_t delta = 5;
  /// Edge length of each broom line.
  std::size_t zeta = 5;
  /// Weight of the weak edge in example_g3, in (0, 1).
  double epsilon = 0.1;
  /// Random families draw weights uniformly from [weight_min, weight_max];
  /// equal bounds give a constant weight.
  double weight_min = 1.0;
  double weight_max = 1.0;
  /// Rejection-sampling budget for gnp_connected.
  std::size_t max_attempts = 1000;
};

/// Deterministic graph generator; throws Error{InvalidParams}.
///
/// Labelling conventions (0-based):
///  - path: 0-1-...-(n-1).  cycle: path plus (n-1, 0).  star: center 0.
///  - random_tree: vertex v >= 1 attaches to a uniform earlier vertex.
///  - broom_a(delta, zeta): glue vertices 0 and 1; line k contributes
///    zeta-1 interior vertices, so n = delta(zeta-1)+2 and m = delta*zeta.
///    broom_b adds the unit edge (1, 0).
///  - example_g1: pendant 0-1, K5 on {1..5}, K5 on {6..10}, and the four
///    bridge edges {4,5}x{6,7}.
///  - example_g2: K5 on {0..4} and the 6-cycle 4-5-6-7-8-9-4 sharing vertex 4.
///  - example_g3: unit path 0-...-5 whose edge (4,3) has weight epsilon.
/// The example graphs use the drawing's vertex v as index v-1.
Graph generate(GraphFamily family, const GeneratorParams& params = {}, std::uint64_t seed = 0);

/// Glue vertices of a broom graph: the two endpoints shared by all lines.
inline constexpr Vertex kBroomStart = 0;
inline constexpr Vertex kBroomEnd = 1;

}  // namespace presist
