#include <benchmark/benchmark.h>

#include "nestfold/labeling.hpp"
#include "nestfold/metric.hpp"
#include "nestfold/projection.hpp"
#include "nestfold/walk.hpp"

using namespace nestfold;

namespace {

const FractalSpec& spec(int i) {
  static const FractalSpec specs[] = {load_spec("builtin:gasket"), load_spec("builtin:vicsek"),
                                      load_spec("builtin:hexagon")};
  return specs[i];
}

void BM_Window(benchmark::State& state) {
  const auto& s = spec(static_cast<int>(state.range(0)));
  const int depth = static_cast<int>(state.range(1));
  for (auto _ : state) {
    Window w(s, 0, depth);
    benchmark::DoNotOptimize(w.vertex_count());
  }
  state.SetLabel(s.name);
}
BENCHMARK(BM_Window)->Args({0, 4})->Args({0, 6})->Args({1, 3})->Args({2, 3});

void BM_Propagate(benchmark::State& state) {
  const auto& s = spec(static_cast<int>(state.range(0)));
  auto w = std::make_shared<const Window>(s, 0, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_labels(w, identity_seed(s.k)).ok());
  state.SetLabel(s.name);
}
BENCHMARK(BM_Propagate)->Args({0, 5})->Args({1, 3});

void BM_LabelVertex(benchmark::State& state) {
  const auto& s = spec(0);
  const GoodLabeling good(s);
  const Window w(s, 0, 6);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(good.label_vertex(w.vertex(i), 0));
    i = (i + 1) % w.vertex_count();
  }
}
BENCHMARK(BM_LabelVertex);

void BM_Project(benchmark::State& state) {
  const auto& s = spec(1);
  const Folding f(std::make_shared<const GoodLabeling>(s));
  const Window w(s, 0, 3);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.project(Point{w.vertex(i), 0}, 1));
    i = (i + 1) % w.vertex_count();
  }
}
BENCHMARK(BM_Project);

void BM_Distance(benchmark::State& state) {
  const auto& s = spec(0);
  const Point x{s.zero(), 0};
  const Point y{FieldElement(s.field(), Rational(13)), 0};
  for (auto _ : state) benchmark::DoNotOptimize(graph_distance(s, x, y, 0));
}
BENCHMARK(BM_Distance);

void BM_KernelExact(benchmark::State& state) {
  const auto& s = spec(0);
  const GridGraph g(s, 0, 5);
  const int x0 = g.window().find_vertex(s.zero());
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel(g, x0, n, KernelMode::exact).escape(n));
}
BENCHMARK(BM_KernelExact)->Arg(10)->Arg(30);

void BM_KernelFloat(benchmark::State& state) {
  const auto& s = spec(2);
  const GridGraph g(s, 0, 3);
  const int x0 = g.window().find_vertex(s.zero());
  for (auto _ : state) benchmark::DoNotOptimize(kernel(g, x0, 100, KernelMode::floating).escape_d(100));
}
BENCHMARK(BM_KernelFloat);

void BM_Simulate(benchmark::State& state) {
  const auto& s = spec(0);
  auto lab = std::make_shared<const GoodLabeling>(s);
  const Folding folding(lab);
  const auto grid = grid_around(s, 0, Point{s.zero(), 0}, 10);
  const FoldIndex fold(folding, *grid, 1);
  SimulationConfig cfg;
  cfg.seed = 1;
  cfg.count = state.range(0);
  cfg.steps = 10;
  cfg.threads = 1;
  const int start = grid->window().find_vertex(s.zero());
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(*grid, fold, start, cfg).escaped);
  state.SetItemsProcessed(state.iterations() * cfg.count);
}
BENCHMARK(BM_Simulate)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
