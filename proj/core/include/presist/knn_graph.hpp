#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "presist/dataset.hpp"
#include "presist/graph.hpp"

namespace presist {

enum class Symmetrization { Union, Mutual };
enum class OnDisconnect { Fail, LargestComponent };

std::string_view to_string(Symmetrization s) noexcept;
std::string_view to_string(OnDisconnect d) noexcept;
std::optional<Symmetrization> parse_symmetrization(std::string_view name) noexcept;
std::optional<OnDisconnect> parse_on_disconnect(std::string_view name) noexcept;

struct GraphBuildParams {
  /// Neighbour fraction: k = floor(mu * n), clamped to n - 1.
  double mu = 0.1;
  /// Kernel bandwidth in exp(-sigma ||x_i - x_j||^2).
  double sigma = 1.0;
  Symmetrization symmetrization = Symmetrization::Union;
  OnDisconnect on_disconnect = OnDisconnect::Fail;

  /// Throws Error{InvalidParams}.
  void validate(std::size_t n) const;
  std::size_t neighbours(std::size_t n) const;
};

struct KnnGraph {
  Graph graph;
  /// Original row of each graph vertex (identity unless restricted).
  std::vector<std::size_t> kept;
  std::size_t k = 0;
  /// Candidate edges dropped because their weight underflowed (<= 1e-300).
  std::size_t underflow_edges = 0;
};

/// k-NN graph with Gaussian weights. Neighbour ranking uses Euclidean
/// distance with ties to the lower index. Throws Error{InvalidParams},
/// DisconnectedError (on_disconnect = Fail) or Error{DegenerateKernel}
/// when every candidate weight underflows.
KnnGraph knn_gaussian_graph(const FeatureDataset& ds, const GraphBuildParams& params);

}  // namespace presist
