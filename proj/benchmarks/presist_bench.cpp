#include <benchmark/benchmark.h>

#include "presist/approx.hpp"
#include "presist/distance_matrix.hpp"
#include "presist/generators.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/solver.hpp"

namespace {

using namespace presist;

Graph bench_graph(std::int64_t n) {
  GeneratorParams gp;
  gp.n = static_cast<std::size_t>(n);
  gp.edge_probability = 0.1;
  gp.weight_min = 0.5;
  gp.weight_max = 2.0;
  return generate(GraphFamily::GnpConnected, gp, 42);
}

void BM_LaplacianPinv(benchmark::State& state) {
  const auto g = bench_graph(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_pinv(g));
}
BENCHMARK(BM_LaplacianPinv)->Arg(50)->Arg(150)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ApproxPair(benchmark::State& state) {
  const auto g = bench_graph(state.range(0));
  const auto pinv = laplacian_pinv(g);
  Vertex j = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx_metric(pinv, g, {0, j, 3.0}));
    j = j + 1 < g.num_vertices() ? j + 1 : 1;
  }
}
BENCHMARK(BM_ApproxPair)->Arg(50)->Arg(150)->Arg(400);

void BM_ExactPair(benchmark::State& state) {
  const auto g = bench_graph(state.range(0));
  const double p = static_cast<double>(state.range(1)) / 10.0;
  Vertex j = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_presistance(g, {0, j, p}).metric);
    j = j + 1 < g.num_vertices() ? j + 1 : 1;
  }
}
BENCHMARK(BM_ExactPair)->Args({50, 15})->Args({50, 30})->Args({150, 15})->Args({150, 30})->Unit(benchmark::kMillisecond);

void BM_ApproxDistanceMatrix(benchmark::State& state) {
  const auto g = bench_graph(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance_matrix(g, 3.0, DistanceMode::Approx, DistanceForm::Metric).values.sum());
  }
}
BENCHMARK(BM_ApproxDistanceMatrix)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
