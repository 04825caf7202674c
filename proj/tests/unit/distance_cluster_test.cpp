#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "presist/approx.hpp"
#include "presist/clustering.hpp"
#include "presist/distance_matrix.hpp"
#include "presist/error.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/solver.hpp"

namespace presist {
namespace {

namespace fs = std::filesystem;

TEST(DistanceMatrix, ApproxEntriesMatchPairwiseCalls) {
  const auto g = oracle::random_graph(9, 1);
  const auto lp = laplacian_pinv(g);
  for (auto form : {DistanceForm::Metric, DistanceForm::Resistance}) {
    const auto dm = distance_matrix(g, 3.0, DistanceMode::Approx, form);
    EXPECT_EQ(dm.size(), 9u);
    EXPECT_EQ(dm.graph, g.fingerprint());
    EXPECT_EQ(dm.config_hash, 0u);
    for (Vertex i = 0; i < 9; ++i) {
      EXPECT_EQ(dm(i, i), 0.0);
      for (Vertex j = 0; j < 9; ++j) {
        EXPECT_EQ(dm(i, j), dm(j, i));
        if (i == j) continue;
        const double want = form == DistanceForm::Metric ? approx_metric(lp, g, {i, j, 3.0})
                                                         : approx_presistance(lp, g, {i, j, 3.0});
        EXPECT_NEAR(dm(i, j), want, 1e-12 * want);
      }
    }
  }
}

TEST(DistanceMatrix, ExactEntriesMatchSolverAndAreWorkerIndependent) {
  const auto g = oracle::random_graph(8, 2);
  DistanceOptions one;
  one.workers = 1;
  DistanceOptions four;
  four.workers = 4;
  DistanceTiming timing;
  const auto a = distance_matrix(g, 1.5, DistanceMode::Exact, DistanceForm::Metric, one, &timing);
  const auto b = distance_matrix(g, 1.5, DistanceMode::Exact, DistanceForm::Metric, four);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(timing.pairs, 28u);
  EXPECT_TRUE(a.warnings.empty());
  EXPECT_NE(a.config_hash, 0u);
  EXPECT_NEAR(a(2, 5), exact_presistance(g, {2, 5, 1.5}).metric, 1e-12);
}

TEST(DistanceMatrix, UnconvergedPairsBecomeWarnings) {
  const auto g = oracle::random_graph(6, 3);
  DistanceOptions opts;
  opts.solver.max_iter = 1;
  opts.solver.init = SolverInit::Zeros;
  const auto dm = distance_matrix(g, 3.0, DistanceMode::Exact, DistanceForm::Metric, opts);
  EXPECT_FALSE(dm.warnings.empty());
  EXPECT_TRUE(dm.values.allFinite());
}

TEST(DistanceMatrix, ReusesSuppliedPseudoinverseAndRejectsForeignOne) {
  const auto g = oracle::random_graph(7, 4);
  const auto lp = laplacian_pinv(g);
  DistanceOptions opts;
  opts.pinv = &lp;
  DistanceTiming timing;
  const auto dm = distance_matrix(g, 2.5, DistanceMode::Approx, DistanceForm::Metric, opts, &timing);
  EXPECT_LT(timing.pinv_seconds, 1e-3);
  EXPECT_EQ(dm.values, distance_matrix(g, 2.5, DistanceMode::Approx, DistanceForm::Metric).values);
  const auto other = laplacian_pinv(oracle::random_graph(7, 5));
  opts.pinv = &other;
  EXPECT_THROW(distance_matrix(g, 2.5, DistanceMode::Approx, DistanceForm::Metric, opts), Error);
}

TEST(DistanceMatrix, ResistanceFormOverflowIsReported) {
  GeneratorParams params;
  params.n = 40;
  const auto g = generate(GraphFamily::Path, params);
  try {
    distance_matrix(g, 1000.0, DistanceMode::Approx, DistanceForm::Resistance);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
  }
  const auto metric = distance_matrix(g, 1000.0, DistanceMode::Approx, DistanceForm::Metric);
  EXPECT_NEAR(metric(0, 39), 39.0, 1e-9);
}

TEST(DistanceMatrix, BinaryAndCsvRoundTrips) {
  const auto g = oracle::random_graph(8, 6);
  DistanceOptions opts;
  opts.solver.max_iter = 2;
  auto dm = distance_matrix(g, 3.0, DistanceMode::Exact, DistanceForm::Metric, opts);
  dm.metadata = R"({"tool":"test"})";
  const auto dir = fs::temp_directory_path();
  const auto bin = dir / "presist_dm_test.bin";
  const auto csv = dir / "presist_dm_test.csv";
  save_distance_matrix(bin, dm);
  const auto back = load_distance_matrix(bin);
  EXPECT_EQ(back.values, dm.values);
  EXPECT_EQ(back.p, dm.p);
  EXPECT_EQ(back.mode, dm.mode);
  EXPECT_EQ(back.form, dm.form);
  EXPECT_EQ(back.graph, dm.graph);
  EXPECT_EQ(back.config_hash, dm.config_hash);
  EXPECT_EQ(back.metadata, dm.metadata);
  EXPECT_EQ(back.warnings, dm.warnings);
  EXPECT_EQ(load_distance_any(bin).values, dm.values);

  write_distance_csv(csv, dm);
  const auto from_csv = load_distance_any(csv);
  EXPECT_EQ(from_csv.values, dm.values);
  EXPECT_NE(from_csv.metadata.find("tool"), std::string::npos);
  fs::remove(bin);
  fs::remove(csv);
}

TEST(DistanceMatrix, UserMatricesAreValidated) {
  Eigen::MatrixXd ok(3, 3);
  ok << 0, 1, 2, 1, 0, 1.5, 2, 1.5, 0;
  EXPECT_NO_THROW(make_distance_matrix(ok));
  Eigen::MatrixXd asym = ok;
  asym(0, 1) = 1.1;
  EXPECT_THROW(make_distance_matrix(asym), Error);
  Eigen::MatrixXd diag = ok;
  diag(1, 1) = 0.5;
  EXPECT_THROW(make_distance_matrix(diag), Error);
  Eigen::MatrixXd negative = ok;
  negative(0, 2) = negative(2, 0) = -1.0;
  EXPECT_THROW(make_distance_matrix(negative), Error);
  EXPECT_THROW(make_distance_matrix(Eigen::MatrixXd::Zero(2, 3)), Error);

  const auto path = fs::temp_directory_path() / "presist_bad.csv";
  std::ofstream(path) << "0,1\n1\n";
  EXPECT_THROW(read_distance_csv(path), Error);
  fs::remove(path);
}

// Points on a line in three well separated groups.
DistanceMatrix three_groups(std::vector<std::size_t>* truth = nullptr) {
  const std::vector<double> pos{0.0, 0.3, 0.5, 0.2, 10.0, 10.4, 10.1, 20.0, 20.2, 20.5, 20.1};
  const std::vector<std::size_t> label{0, 0, 0, 0, 1, 1, 1, 2, 2, 2, 2};
  const auto n = static_cast<Eigen::Index>(pos.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) d(a, b) = std::abs(pos[a] - pos[b]);
  }
  if (truth) *truth = label;
  return make_distance_matrix(d);
}

double medoid_cost(const DistanceMatrix& d, const std::vector<Vertex>& centers) {
  double total = 0.0;
  for (Vertex v = 0; v < d.size(); ++v) {
    double best = std::numeric_limits<double>::infinity();
    for (auto c : centers) best = std::min(best, d(v, c));
    total += best;
  }
  return total;
}

TEST(KMedoids, RecoversSeparatedGroups) {
  std::vector<std::size_t> truth;
  const auto d = three_groups(&truth);
  const auto r = k_medoids(d, 3, 0);
  EXPECT_EQ(r.method, "k_medoids");
  EXPECT_EQ(error_rate(r.assignments, truth).error_rate, 0.0);
  EXPECT_TRUE(std::is_sorted(r.centers.begin(), r.centers.end()));
  for (std::size_t c = 0; c < r.centers.size(); ++c) EXPECT_EQ(r.assignments[r.centers[c]], c);
  EXPECT_NEAR(r.objective, medoid_cost(d, r.centers), 1e-12);
}

TEST(KMedoids, MatchesExhaustiveOptimumOnSmallInputs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 9;
    std::vector<std::pair<double, double>> pts(n);
    for (auto& [x, y] : pts) x = unif(rng), y = unif(rng);
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) m(a, b) = std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second);
    }
    const auto d = make_distance_matrix(m);
    double best = std::numeric_limits<double>::infinity();
    for (Vertex a = 0; a < 9; ++a) {
      for (Vertex b = a + 1; b < 9; ++b) {
        for (Vertex c = b + 1; c < 9; ++c) best = std::min(best, medoid_cost(d, {a, b, c}));
      }
    }
    const auto r = k_medoids(d, 3, static_cast<std::uint64_t>(trial));
    // PAM is a local search; with restarts it reaches the optimum here.
    EXPECT_NEAR(r.objective, best, 1e-12);
    for (std::size_t k = 1; k < r.objective_history.size(); ++k) {
      EXPECT_LT(r.objective_history[k], r.objective_history[k - 1]);
    }
  }
}

TEST(KMedoids, DeterministicAndValidatesK) {
  const auto d = three_groups();
  const auto a = k_medoids(d, 2, 7);
  const auto b = k_medoids(d, 2, 7);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.centers, b.centers);
  EXPECT_THROW(k_medoids(d, 1, 0), Error);
  EXPECT_THROW(k_medoids(d, 12, 0), Error);
  const auto all = k_medoids(d, 11, 0);
  EXPECT_EQ(all.objective, 0.0);
}

TEST(FarthestFirst, TwoApproximationOfKCenter) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 10;
  Eigen::MatrixXd m(n, n);
  std::vector<double> x(n), y(n);
  for (int a = 0; a < n; ++a) x[a] = unif(rng), y[a] = unif(rng);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) m(a, b) = std::hypot(x[a] - x[b], y[a] - y[b]);
  }
  const auto d = make_distance_matrix(m);
  double best = std::numeric_limits<double>::infinity();
  for (Vertex a = 0; a < 10; ++a) {
    for (Vertex b = a + 1; b < 10; ++b) {
      for (Vertex c = b + 1; c < 10; ++c) {
        double radius = 0.0;
        for (Vertex v = 0; v < 10; ++v) radius = std::max(radius, std::min({d(v, a), d(v, b), d(v, c)}));
        best = std::min(best, radius);
      }
    }
  }
  for (Vertex start = 0; start < 10; ++start) {
    const auto r = farthest_first(d, 3, start);
    EXPECT_EQ(r.centers.front(), start);
    EXPECT_LE(r.objective, 2.0 * best + 1e-12);
  }
  EXPECT_EQ(farthest_first(d, 1, 4).assignments, std::vector<std::size_t>(10, 0));
  EXPECT_THROW(farthest_first(d, 0, 0), Error);
}

TEST(Sc2, SeparatesTwoCliquesJoinedByOneEdge) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < 5; ++a) {
    for (Vertex b = a + 1; b < 5; ++b) {
      edges.push_back({b, a, 1.0});
      edges.push_back({b + 5, a + 5, 1.0});
    }
  }
  edges.push_back({5, 0, 0.1});
  const auto g = build_graph(10, edges);
  const auto r = sc2_baseline(g, 2, 0);
  const std::vector<std::size_t> truth{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  EXPECT_EQ(error_rate(r.assignments, truth).error_rate, 0.0);
  EXPECT_THROW(sc2_baseline(g, 11, 0), Error);
}

TEST(ClusterResult, JsonRoundTrip) {
  const auto r = k_medoids(three_groups(), 3, 1);
  const auto back = cluster_result_from_json(to_json(r, R"({"k":3})"));
  EXPECT_EQ(back.assignments, r.assignments);
  EXPECT_EQ(back.centers, r.centers);
  EXPECT_DOUBLE_EQ(back.objective, r.objective);
  EXPECT_EQ(back.method, r.method);
  EXPECT_EQ(back.seed, r.seed);
}

TEST(ErrorRate, MatchesPermutationOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t kp = 2 + trial % 4;
    const std::size_t kt = 2 + (trial / 4) % 4;
    std::vector<std::size_t> pred(30), truth(30);
    for (auto& v : pred) v = std::uniform_int_distribution<std::size_t>(0, kp - 1)(rng);
    for (auto& v : truth) v = std::uniform_int_distribution<std::size_t>(0, kt - 1)(rng);
    // Dense ids in first-appearance order, as the oracle expects labels 0..k-1.
    EXPECT_NEAR(error_rate(pred, truth).error_rate, oracle::brute_error_rate(pred, truth), 1e-12);
  }
}

TEST(ErrorRate, InvariantToRelabelling) {
  const std::vector<std::size_t> truth{0, 0, 1, 1, 2, 2, 2};
  EXPECT_EQ(error_rate({2, 2, 0, 0, 1, 1, 1}, truth).error_rate, 0.0);
  EXPECT_NEAR(error_rate({2, 2, 0, 0, 1, 1, 0}, truth).error_rate, 1.0 / 7.0, 1e-12);
  EXPECT_THROW(error_rate({0, 1}, {0}), Error);
}

TEST(ErrorRate, HungarianPathForManyLabels) {
  std::vector<std::size_t> truth, pred;
  for (std::size_t c = 0; c < 9; ++c) {
    for (int r = 0; r < 4; ++r) {
      truth.push_back(c);
      pred.push_back((c + 3) % 9);
    }
  }
  pred[0] = 5;
  EXPECT_NEAR(error_rate(pred, truth).error_rate, 1.0 / 36.0, 1e-12);
}

}  // namespace
}  // namespace presist
