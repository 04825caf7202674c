#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "presist/graph.hpp"

namespace presist {

/// Raw edge list as read from text, before validation.
struct EdgeList {
  std::size_t n = 0;
  std::vector<Edge> edges;
  /// Lines starting with '#', without the marker, in file order.
  std::vector<std::string> comments;
};

/// Parses `i j w` lines (0-based, whitespace separated, '#' comments).
///
/// The vertex count is taken from a `# n <count>` comment when present,
/// otherwise it is one more than the largest index. Throws ParseError.
EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list(const std::filesystem::path& path);

/// Reads and validates in one step.
Graph load_graph(const std::filesystem::path& path, const BuildOptions& options = {});

/// Writes a `# n <count>` line, one `# <line>` per header entry, then
/// edges in canonical (i > j) order with round-trip precision weights.
void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& header = {});
void write_edge_list(const std::filesystem::path& path, const Graph& g,
                     const std::vector<std::string>& header = {});

}  // namespace presist
