#include "presist/edge_list_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "presist/error.hpp"

namespace presist {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

EdgeList read_edge_list(std::istream& in) {
  EdgeList list;
  std::size_t declared_n = 0;
  std::size_t max_index = 0;
  bool any_edge = false;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      auto body = trim(text.substr(1));
      std::istringstream header(body);
      std::string key;
      std::size_t value = 0;
      if (header >> key >> value && key == "n" && header.eof()) declared_n = value;
      list.comments.push_back(std::move(body));
      continue;
    }
    std::istringstream fields(text);
    long long i = -1;
    long long j = -1;
    double w = 0.0;
    if (!(fields >> i >> j >> w)) {
      throw ParseError(ErrorKind::ParseError, row, 0, "expected `i j w`, got '" + text + "'");
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError(ErrorKind::ParseError, row, 4, "unexpected trailing field '" + extra + "'");
    }
    if (i < 0 || j < 0) throw ParseError(ErrorKind::ParseError, row, i < 0 ? 1 : 2, "negative vertex index");
    list.edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), w});
    max_index = std::max({max_index, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    any_edge = true;
  }
  list.n = std::max(declared_n, any_edge ? max_index + 1 : 0);
  return list;
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open edge list '" + path.string() + "'");
  return read_edge_list(in);
}

Graph load_graph(const std::filesystem::path& path, const BuildOptions& options) {
  auto list = read_edge_list(path);
  return build_graph(list.n, std::move(list.edges), options);
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& header) {
  out << "# n " << g.num_vertices() << '\n';
  for (const auto& h : header) out << "# " << h << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : g.edges()) out << e.i << ' ' << e.j << ' ' << e.w << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write edge list '" + path.string() + "'");
  write_edge_list(out, g, header);
}

}  // namespace presist
