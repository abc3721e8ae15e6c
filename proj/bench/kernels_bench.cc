// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "../tests/support/toy_instances.h"
#include "pipeplan/planning.h"
#include "pipeplan/raster.h"
#include "pipeplan/routing.h"

namespace {

using namespace pipeplan;

GridSpec grid(int side) {
  GridSpec s;
  s.width = side;
  s.height = side;
  s.cell_size = 1.5;
  return s;
}

LayerSet layers(int side) {
  std::mt19937 g(1);
  LayerSet set;
  GeoLayer pop;
  pop.kind = LayerKind::kPopulationDensity;
  GeoLayer slope;
  slope.kind = LayerKind::kSlope;
  for (int i = 0; i < side * side; ++i) {
    pop.values.push_back(static_cast<double>(g() % 4000));
    slope.values.push_back(static_cast<double>(g() % 30));
  }
  GeoLayer water;
  water.kind = LayerKind::kWater;
  for (int r = 0; r < side; ++r) water.cells.push_back({r, side / 2});
  set.layers = {pop, slope, water};
  return set;
}

template <RasterMap (*Compose)(const LayerSet&, const GridSpec&)>
void BM_ComposeRaster(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const LayerSet set = layers(side);
  const GridSpec spec = grid(side);
  for (auto _ : state) benchmark::DoNotOptimize(Compose(set, spec));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_ComposeRaster<compose_raster_serial>)->Name("compose_raster/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_ComposeRaster<compose_raster>)->Name("compose_raster/parallel")->Arg(256)->Arg(1024);

std::vector<CellPair> pairs(int side, int count) {
  std::mt19937 g(2);
  std::vector<CellPair> out;
  for (int i = 0; i < count; ++i) {
    out.push_back({{static_cast<int>(g() % side), static_cast<int>(g() % side)},
                   {static_cast<int>(g() % side), static_cast<int>(g() % side)}});
  }
  return out;
}

template <std::vector<RouteResult> (*Route)(const RasterMap&, const std::vector<CellPair>&)>
void BM_RoutePairs(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const RasterMap r = compose_raster(layers(side), grid(side));
  const auto ps = pairs(side, 16);
  for (auto _ : state) benchmark::DoNotOptimize(Route(r, ps));
  state.SetItemsProcessed(state.iterations() * ps.size());
}
BENCHMARK(BM_RoutePairs<route_pairs_serial>)->Name("route_pairs/serial")->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoutePairs<route_pairs>)->Name("route_pairs/parallel")->Arg(128)->Unit(benchmark::kMillisecond);

template <std::vector<PlanSolution> (*Best)(const PlanningInput&, const SolverConfig&)>
void BM_BestSolutions(benchmark::State& state) {
  const auto tc = toy::make_toy(7, toy::Shape::kMeshed, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Best(tc.input, {}));
}
BENCHMARK(BM_BestSolutions<best_solutions_serial>)->Name("best_solutions/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BestSolutions<best_solutions>)->Name("best_solutions/parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
