#include <benchmark/benchmark.h>

#include <embalign/align.hpp>
#include <embalign/synth.hpp>

namespace {

using embalign::Matrix;

struct Problem {
  Matrix x;
  Matrix y;
};

Problem make_problem(std::size_t n, std::size_t dim) {
  const auto cloud = embalign::generate_identity_cloud(n / 4, 4, dim / 2, 1.0, 0.3, 17);
  embalign::ViewOptions a{dim, 1, 0.05};
  embalign::ViewOptions b{dim, 2, 0.05};
  return {embalign::embed_view(cloud, a).to_matrix(), embalign::embed_view(cloud, b).to_matrix()};
}

void BM_Procrustes(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(embalign::fit_procrustes(p.x, p.y));
}

void BM_Linear(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(embalign::fit_linear(p.x, p.y));
}

void BM_Ridge(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(embalign::fit_ridge(p.x, p.y, 1e-3));
}

void BM_FitMap(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const embalign::FitOptions options;
  for (auto _ : state) benchmark::DoNotOptimize(embalign::fit_map(p.x, p.y, options));
}

void solver_sizes(benchmark::internal::Benchmark* b) {
  for (long n : {1000, 8000})
    for (long d : {64, 256, 512}) b->Args({n, d});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_Procrustes)->Apply(solver_sizes);
BENCHMARK(BM_Linear)->Apply(solver_sizes);
BENCHMARK(BM_Ridge)->Apply(solver_sizes);
BENCHMARK(BM_FitMap)->Args({8000, 512})->Unit(benchmark::kMillisecond);
