#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "presist/bench.hpp"
#include "presist/dataset.hpp"
#include "presist/error.hpp"
#include "presist/knn_graph.hpp"
#include "presist/ratio_sweep.hpp"
#include "presist/verify.hpp"

namespace presist {
namespace {

FeatureDataset parse(const std::string& text, LoadOptions opts = {}) {
  std::istringstream in(text);
  return load_features(in, opts, "inline");
}

TEST(Dataset, ParsesLabelsInEitherColumn) {
  const auto last = parse("1,2,a\n3,4,b\n5,6,a\n");
  EXPECT_EQ(last.size(), 3u);
  EXPECT_EQ(last.x.cols(), 2);
  EXPECT_EQ(last.x(2, 1), 6.0);
  EXPECT_EQ(*last.labels, (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_EQ(last.class_names, (std::vector<std::string>{"a", "b"}));

  LoadOptions first;
  first.label_column = LabelColumn::First;
  first.skip_rows = 1;
  first.delimiter = ';';
  const auto ds = parse("header;x;y\nz; 1; 2\n\nq;3;4\n", first);
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.x(1, 0), 3.0);
  EXPECT_EQ(ds.class_names, (std::vector<std::string>{"z", "q"}));

  LoadOptions none;
  none.has_labels = false;
  const auto raw = parse("1,2\n3,4\n", none);
  EXPECT_FALSE(raw.labels.has_value());
  EXPECT_EQ(raw.x.cols(), 2);
}

TEST(Dataset, ParseErrorsCarryRowAndColumn) {
  try {
    parse("1,2,a\n3,x,b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonNumericFeature);
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), 2u);
  }
  try {
    parse("1,2,a\n3,b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RaggedRows);
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("1,nan,a\n"), ParseError);
  EXPECT_THROW(load_features(std::filesystem::path("/nonexistent/features.csv")), Error);
}

TEST(Dataset, StandardizeGivesZeroMeanUnitVariance) {
  auto ds = standardize(parse("1,10,a\n2,10,b\n3,10,a\n6,10,b\n"));
  EXPECT_NEAR(ds.x.col(0).mean(), 0.0, 1e-12);
  EXPECT_NEAR(ds.x.col(0).squaredNorm() / 4.0, 1.0, 1e-12);
  // A constant column is centred but not scaled.
  EXPECT_EQ(ds.x.col(1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dataset, RestrictRowsRelabelsDensely) {
  const auto ds = parse("1,a\n2,b\n3,c\n4,b\n");
  const auto sub = restrict_rows(ds, {1, 3, 2});
  EXPECT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub.x(2, 0), 3.0);
  EXPECT_EQ(*sub.labels, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(sub.class_names, (std::vector<std::string>{"b", "c"}));
}

FeatureDataset blobs(std::size_t per, std::size_t groups, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spread);
  FeatureDataset ds;
  ds.x.resize(static_cast<Eigen::Index>(per * groups), 2);
  std::vector<std::size_t> labels;
  for (std::size_t g = 0; g < groups; ++g) {
    ds.class_names.push_back("c" + std::to_string(g));
    for (std::size_t r = 0; r < per; ++r) {
      const auto row = static_cast<Eigen::Index>(g * per + r);
      ds.x(row, 0) = 3.0 * static_cast<double>(g) + noise(rng);
      ds.x(row, 1) = noise(rng);
      labels.push_back(g);
    }
  }
  ds.labels = labels;
  return ds;
}

TEST(Knn, NeighbourCountIsFlooredAndClamped) {
  GraphBuildParams params;
  params.mu = 0.25;
  EXPECT_EQ(params.neighbours(10), 2u);
  params.mu = 1.0;
  EXPECT_EQ(params.neighbours(10), 9u);
  params.mu = 0.05;
  EXPECT_THROW(params.validate(10), Error);
  params.mu = 0.0;
  EXPECT_THROW(params.validate(10), Error);
  params.mu = 0.5;
  params.sigma = -1.0;
  EXPECT_THROW(params.validate(10), Error);
}

TEST(Knn, EdgesFollowNeighbourSetsAndGaussianWeights) {
  const auto ds = blobs(6, 2, 0.3, 1);
  for (auto sym : {Symmetrization::Union, Symmetrization::Mutual}) {
    GraphBuildParams params;
    params.mu = 0.5;
    params.sigma = 0.7;
    params.symmetrization = sym;
    const auto knn = knn_gaussian_graph(ds, params);
    EXPECT_EQ(knn.k, 6u);
    const std::size_t n = ds.size();
    // Oracle: recompute neighbour sets by full sort.
    std::vector<std::set<std::size_t>> nbrs(n);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<std::pair<double, std::size_t>> d;
      for (std::size_t b = 0; b < n; ++b) {
        if (b != a) d.push_back({(ds.x.row(a) - ds.x.row(b)).squaredNorm(), b});
      }
      std::sort(d.begin(), d.end());
      for (std::size_t r = 0; r < knn.k; ++r) nbrs[a].insert(d[r].second);
    }
    std::size_t expected = 0;
    for (std::size_t a = 1; a < n; ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        const bool ab = nbrs[a].count(b) > 0;
        const bool ba = nbrs[b].count(a) > 0;
        expected += sym == Symmetrization::Union ? (ab || ba) : (ab && ba);
      }
    }
    ASSERT_EQ(knn.graph.num_edges(), expected);
    for (const auto& e : knn.graph.edges()) {
      const double d2 = (ds.x.row(knn.kept[e.i]) - ds.x.row(knn.kept[e.j])).squaredNorm();
      EXPECT_NEAR(e.w, std::exp(-0.7 * d2), 1e-15);
    }
  }
}

TEST(Knn, DisconnectedGraphFailsOrKeepsLargestComponent) {
  auto ds = blobs(5, 2, 0.1, 2);
  ds.x.bottomRows(5).array() += 100.0;
  GraphBuildParams params;
  params.mu = 0.3;
  EXPECT_THROW(knn_gaussian_graph(ds, params), DisconnectedError);
  params.on_disconnect = OnDisconnect::LargestComponent;
  const auto knn = knn_gaussian_graph(ds, params);
  EXPECT_EQ(knn.graph.num_vertices(), 5u);
  EXPECT_EQ(knn.kept.size(), 5u);
}

TEST(Knn, UnderflowEdgesAreDropped) {
  FeatureDataset ds;
  ds.x.resize(4, 1);
  ds.x << 0.0, 0.1, 50.0, 50.1;
  GraphBuildParams params;
  params.mu = 1.0;
  params.sigma = 1.0;
  params.on_disconnect = OnDisconnect::LargestComponent;
  const auto knn = knn_gaussian_graph(ds, params);
  EXPECT_EQ(knn.underflow_edges, 4u);
  params.sigma = 1e6;
  EXPECT_THROW(knn_gaussian_graph(ds, params), Error);
}

BenchConfig small_bench() {
  BenchConfig cfg;
  cfg.mu_grid = {0.3, 0.5};
  cfg.sigma_grid = {1.0};
  cfg.p_grid = {1.5, 3.0};
  cfg.methods = {BenchMethod::KMedoidsApprox, BenchMethod::KMedoidsP2, BenchMethod::FarthestFirstApprox,
                 BenchMethod::Sc2};
  cfg.repetitions = 2;
  cfg.kmedoids_restarts = 2;
  return cfg;
}

TEST(Bench, GridRecordsAreDeterministicAndWorkerIndependent) {
  const auto ds = blobs(8, 3, 1.0, 3);
  auto cfg = small_bench();
  const auto a = bench_grid(ds, cfg);
  cfg.workers = 3;
  const auto b = bench_grid(ds, cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  std::size_t ok = 0;
  for (std::size_t r = 0; r < a.records.size(); ++r) {
    // Failed cells carry NaN.
    if (std::isnan(a.records[r].error_rate)) {
      EXPECT_TRUE(std::isnan(b.records[r].error_rate));
    } else {
      EXPECT_EQ(a.records[r].error_rate, b.records[r].error_rate);
      ++ok;
    }
    EXPECT_EQ(a.records[r].seed, b.records[r].seed);
    EXPECT_EQ(a.records[r].status, b.records[r].status);
  }
  // p-dependent methods per p, p-independent ones once at p = 2.
  EXPECT_EQ(a.records.size(), 2u * 1u * (2u * 2u + 2u) * 2u);
  for (const auto& rec : a.records) {
    if (is_p_independent(rec.method)) EXPECT_EQ(rec.p, 2.0);
    if (std::isnan(rec.error_rate)) continue;
    EXPECT_GE(rec.error_rate, 0.0);
    EXPECT_LE(rec.error_rate, 1.0);
  }
  EXPECT_GT(ok, a.records.size() / 2);
  EXPECT_FALSE(a.best.empty());
}

TEST(Bench, CsvLayoutIsStable) {
  auto cfg = small_bench();
  cfg.mu_grid = {0.5};
  cfg.p_grid = {2.0};
  cfg.repetitions = 1;
  const auto result = bench_grid(blobs(6, 2, 0.3, 4), cfg);
  std::ostringstream plain, timed, timing;
  write_bench_records_csv(plain, result);
  write_bench_records_csv(timed, result, true);
  write_bench_timing_csv(timing, result);
  const auto header = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  EXPECT_EQ(header(plain.str()), "mu,sigma,p,method,repetition,seed,points,error_rate,status");
  EXPECT_NE(header(timed.str()).find("wall_seconds"), std::string::npos);
  EXPECT_NE(header(timing.str()).find("wall_seconds"), std::string::npos);
  const auto text = plain.str();
  const auto rows = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(static_cast<std::size_t>(rows), result.records.size() + 1);
}

TEST(Bench, DisconnectedCellsAreReportedNotFatal) {
  auto ds = blobs(5, 2, 0.1, 5);
  ds.x.bottomRows(5).array() += 100.0;
  auto cfg = small_bench();
  cfg.mu_grid = {0.3};
  cfg.p_grid = {2.0};
  cfg.repetitions = 1;
  const auto result = bench_grid(ds, cfg);
  ASSERT_FALSE(result.records.empty());
  for (const auto& rec : result.records) EXPECT_NE(rec.status, "ok");
}

TEST(RatioSweep, RatiosStayBetweenOneAndAlphaPower) {
  const auto g = oracle::random_graph(9, 11);
  RatioSweepOptions opts;
  opts.sample_pairs = 6;
  const auto rows = ratio_sweep(g, {1.5, 2.0, 4.0}, opts);
  ASSERT_EQ(rows.size(), 18u);
  for (const auto& row : rows) {
    EXPECT_TRUE(row.converged);
    EXPECT_NEAR(row.ratio, row.approx_metric / row.exact_metric, 1e-12);
    EXPECT_GE(row.ratio, 1.0 - 1e-6);
    EXPECT_LE(row.ratio, row.alpha_q * (1.0 + 1e-6));
    EXPECT_LE(row.alpha_q, row.ceiling_q * (1.0 + 1e-9));
    if (row.p == 2.0) EXPECT_NEAR(row.ratio, 1.0, 1e-6);
  }
  std::ostringstream out;
  write_ratio_csv(out, rows);
  const auto text = out.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), rows.size() + 1);
}

TEST(Verify, DefaultRunPassesAndFaultInjectionFails) {
  VerifyOptions opts;
  opts.instances = 2;
  const auto ok = run_verify(opts);
  EXPECT_TRUE(ok.passed()) << ::testing::PrintToString(ok.failed());
  EXPECT_FALSE(ok.results.empty());
  opts.inject_fault = true;
  const auto bad = run_verify(opts);
  EXPECT_FALSE(bad.passed());
  EXPECT_FALSE(bad.failed().empty());
  const auto json = nlohmann::json::parse(bad.to_json());
  EXPECT_TRUE(json.is_object());
}

TEST(Verify, SuiteSelection) {
  VerifyOptions opts;
  opts.suites = {verify_suite_names().front()};
  opts.instances = 1;
  const auto rep = run_verify(opts);
  for (const auto& r : rep.results) EXPECT_EQ(r.suite, opts.suites.front());
  opts.suites = {"no-such-suite"};
  EXPECT_THROW(run_verify(opts), Error);
}

}  // namespace
}  // namespace presist
