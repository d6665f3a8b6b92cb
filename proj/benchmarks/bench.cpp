#include <benchmark/benchmark.h>

#include "heatlab/graph.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/line_kernel.hpp"
#include "heatlab/metric.hpp"
#include "heatlab/solvers.hpp"

using namespace heatlab;

static void BM_PropagatorAdvance(benchmark::State& state) {
  Graph g = build_lattice_box(2, static_cast<int>(state.range(0)),
                              ConductanceRule::constant(1), MeasureRule::constant(1));
  for (auto _ : state) {
    UniformizationPropagator prop(g, 0);
    prop.advance_to(5.0);
    benchmark::DoNotOptimize(prop.at(0));
  }
}
BENCHMARK(BM_PropagatorAdvance)->Arg(10)->Arg(20)->Arg(40);

static void BM_DenseEig(benchmark::State& state) {
  Graph g = build_lattice_box(2, static_cast<int>(state.range(0)),
                              ConductanceRule::constant(1), MeasureRule::constant(1));
  for (auto _ : state) {
    DenseHeatKernel k(g);
    benchmark::DoNotOptimize(k.at(1.0, 0, 0));
  }
}
BENCHMARK(BM_DenseEig)->Arg(5)->Arg(10)->Arg(15);

static void BM_LineKernel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(log_exact_integer_line_kernel(state.range(0), 7.5));
}
BENCHMARK(BM_LineKernel)->Arg(0)->Arg(10)->Arg(100);

static void BM_DaviesMetric(benchmark::State& state) {
  Graph g = build_random_connected(static_cast<int>(state.range(0)), 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(davies_metric(g, 0, g.size() - 1, 1e-6));
}
BENCHMARK(BM_DaviesMetric)->Arg(6)->Arg(10);

static void BM_PathMetricRow(benchmark::State& state) {
  Graph g = build_lattice_box(2, 30, ConductanceRule::iid_uniform(1, 2, 5),
                              MeasureRule::constant(1));
  for (auto _ : state) {
    auto rho = path_degree_metric(g, 1.0);
    benchmark::DoNotOptimize(rho.row(0));
  }
}
BENCHMARK(BM_PathMetricRow);

BENCHMARK_MAIN();
