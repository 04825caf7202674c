#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "presist/edge_list_io.hpp"
#include "presist/error.hpp"
#include "presist/generators.hpp"
#include "presist/graph.hpp"

namespace presist {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::Io;
}

TEST(Graph, CanonicalisesEdgeOrientation) {
  const auto g = build_graph(3, {{0, 1, 2.0}, {1, 2, 1.0}});
  ASSERT_EQ(g.num_edges(), 2u);
  for (const auto& e : g.edges()) EXPECT_GT(e.i, e.j);
  EXPECT_DOUBLE_EQ(g.edge(0).w, 2.0);
  EXPECT_DOUBLE_EQ(g.min_weight(), 1.0);
  EXPECT_DOUBLE_EQ(g.max_weight(), 2.0);
  EXPECT_FALSE(g.is_unweighted());
  EXPECT_TRUE(g.unweighted().is_unweighted());
}

TEST(Graph, RejectsInvalidInput) {
  EXPECT_EQ(kind_of([] { build_graph(0, {}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { build_graph(2, {{0, 2, 1.0}}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { build_graph(2, {{1, 1, 1.0}}); }), ErrorKind::SelfLoop);
  EXPECT_EQ(kind_of([] { build_graph(2, {{1, 0, 1.0}, {0, 1, 2.0}}); }), ErrorKind::DuplicateEdge);
  EXPECT_EQ(kind_of([] { build_graph(2, {{1, 0, 0.0}}); }), ErrorKind::NonPositiveWeight);
  EXPECT_EQ(kind_of([] { build_graph(2, {{1, 0, -1.0}}); }), ErrorKind::NonPositiveWeight);
  EXPECT_EQ(kind_of([] { build_graph(4, {{1, 0, 1.0}, {3, 2, 1.0}}); }), ErrorKind::Disconnected);
}

TEST(Graph, DisconnectedErrorListsComponents) {
  try {
    build_graph(5, {{1, 0, 1.0}, {3, 2, 1.0}, {4, 3, 1.0}});
    FAIL();
  } catch (const DisconnectedError& e) {
    ASSERT_EQ(e.components().size(), 2u);
    EXPECT_EQ(e.components()[0], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(e.components()[1], (std::vector<std::size_t>{2, 3, 4}));
  }
}

TEST(Graph, LargestComponentRestriction) {
  BuildOptions opts;
  opts.largest_component = true;
  const auto r = build_graph_restricted(6, {{1, 0, 1.0}, {3, 2, 1.0}, {4, 3, 1.0}, {5, 4, 3.0}}, opts);
  EXPECT_EQ(r.kept, (std::vector<Vertex>{2, 3, 4, 5}));
  EXPECT_EQ(r.graph.num_vertices(), 4u);
  EXPECT_EQ(r.graph.num_edges(), 3u);
}

TEST(Graph, SingleVertexIsConnected) {
  const auto g = build_graph(1, {});
  EXPECT_EQ(g.num_vertices(), 1u);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(Graph, LaplacianMatchesIncidenceForm) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::random_graph(9, seed);
    const Eigen::MatrixXd l = laplacian(g);
    EXPECT_LT((l - laplacian_from_incidence(g)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((l - oracle::dense_laplacian(g)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((l * Eigen::VectorXd::Ones(9)).cwiseAbs().maxCoeff(), 1e-12);
    const auto c = incidence(g);
    for (Eigen::Index row = 0; row < c.rows(); ++row) {
      const auto& e = g.edge(static_cast<std::size_t>(row));
      EXPECT_EQ(c(row, static_cast<Eigen::Index>(e.i)), 1.0);
      EXPECT_EQ(c(row, static_cast<Eigen::Index>(e.j)), -1.0);
      EXPECT_DOUBLE_EQ(c.row(row).cwiseAbs().sum(), 2.0);
    }
  }
}

TEST(Graph, FingerprintTracksWeightsAndTopology) {
  const auto a = build_graph(3, {{1, 0, 1.0}, {2, 1, 1.0}});
  const auto b = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto c = build_graph(3, {{1, 0, 1.0}, {2, 1, 2.0}});
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(Graph, ConnectedComponents) {
  const std::vector<Edge> edges{{1, 0, 1.0}, {4, 3, 1.0}};
  const auto comps = connected_components(5, edges);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[1], (std::vector<Vertex>{2}));
}

TEST(Generators, FamilySizes) {
  GeneratorParams p;
  p.n = 7;
  EXPECT_EQ(generate(GraphFamily::Path, p).num_edges(), 6u);
  EXPECT_EQ(generate(GraphFamily::Cycle, p).num_edges(), 7u);
  EXPECT_EQ(generate(GraphFamily::Complete, p).num_edges(), 21u);
  EXPECT_EQ(generate(GraphFamily::Star, p).num_edges(), 6u);
  EXPECT_TRUE(is_tree(generate(GraphFamily::RandomTree, p, 3)));
  EXPECT_TRUE(is_tree(generate(GraphFamily::Star, p)));
  EXPECT_FALSE(is_tree(generate(GraphFamily::Cycle, p)));

  p.delta = 3;
  p.zeta = 4;
  const auto a = generate(GraphFamily::BroomA, p);
  EXPECT_EQ(a.num_vertices(), 3u * 3u + 2u);
  EXPECT_EQ(a.num_edges(), 12u);
  EXPECT_EQ(generate(GraphFamily::BroomB, p).num_edges(), 13u);

  EXPECT_EQ(generate(GraphFamily::ExampleG1).num_vertices(), 11u);
  EXPECT_EQ(generate(GraphFamily::ExampleG1).num_edges(), 1u + 10u + 10u + 4u);
  EXPECT_EQ(generate(GraphFamily::ExampleG2).num_vertices(), 10u);
  EXPECT_EQ(generate(GraphFamily::ExampleG2).num_edges(), 16u);
  const auto g3 = generate(GraphFamily::ExampleG3);
  EXPECT_EQ(g3.num_vertices(), 6u);
  EXPECT_DOUBLE_EQ(g3.min_weight(), 0.1);
}

TEST(Generators, DeterministicInSeed) {
  GeneratorParams p;
  p.n = 12;
  p.weight_min = 0.5;
  p.weight_max = 2.0;
  for (auto fam : {GraphFamily::RandomTree, GraphFamily::GnpConnected}) {
    EXPECT_EQ(generate(fam, p, 5).edges(), generate(fam, p, 5).edges());
    EXPECT_NE(generate(fam, p, 5).fingerprint(), generate(fam, p, 6).fingerprint());
  }
  const auto g = generate(GraphFamily::GnpConnected, p, 1);
  EXPECT_GE(g.min_weight(), 0.5);
  EXPECT_LE(g.max_weight(), 2.0);
}

TEST(Generators, RejectsBadParameters) {
  GeneratorParams p;
  p.n = 2;
  EXPECT_THROW(generate(GraphFamily::Cycle, p), Error);
  p.n = 5;
  p.edge_probability = 0.0;
  EXPECT_THROW(generate(GraphFamily::GnpConnected, p), Error);
  p.edge_probability = 0.5;
  p.weight_min = 0.0;
  EXPECT_THROW(generate(GraphFamily::GnpConnected, p), Error);
}

TEST(Generators, NamesRoundTrip) {
  for (auto fam : {GraphFamily::Path, GraphFamily::Cycle, GraphFamily::Complete, GraphFamily::Star,
                   GraphFamily::RandomTree, GraphFamily::GnpConnected, GraphFamily::BroomA, GraphFamily::BroomB,
                   GraphFamily::ExampleG1, GraphFamily::ExampleG2, GraphFamily::ExampleG3}) {
    EXPECT_EQ(parse_graph_family(to_string(fam)), fam);
  }
  EXPECT_FALSE(parse_graph_family("wheel"));
}

TEST(EdgeListIo, RoundTripPreservesWeightsExactly) {
  const auto g = oracle::random_graph(10, 7);
  std::stringstream buf;
  write_edge_list(buf, g, {"hello", "config {}"});
  const auto raw = read_edge_list(buf);
  EXPECT_EQ(raw.n, 10u);
  ASSERT_GE(raw.comments.size(), 3u);
  EXPECT_EQ(raw.comments[1], "hello");
  const auto back = build_graph(raw.n, raw.edges);
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_EQ(back.fingerprint(), g.fingerprint());
}

TEST(EdgeListIo, VertexCountFromHeaderOrLargestIndex) {
  std::istringstream with_header("# n 4\n1 0 1\n2 1 1\n3 2 1\n");
  EXPECT_EQ(read_edge_list(with_header).n, 4u);
  std::istringstream without("0 1 2.5\n1 2 1\n");
  const auto raw = read_edge_list(without);
  EXPECT_EQ(raw.n, 3u);
  EXPECT_DOUBLE_EQ(raw.edges[0].w, 2.5);
}

TEST(EdgeListIo, MalformedLinesThrow) {
  std::istringstream bad("0 1 x\n");
  EXPECT_THROW(read_edge_list(bad), ParseError);
  std::istringstream short_line("0\n");
  EXPECT_THROW(read_edge_list(short_line), ParseError);
  EXPECT_THROW(load_graph("/nonexistent/graph.txt"), Error);
}

}  // namespace
}  // namespace presist
