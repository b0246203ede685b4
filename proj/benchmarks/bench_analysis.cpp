#include <benchmark/benchmark.h>

#include <embalign/analysis.hpp>
#include <embalign/rng.hpp>

namespace {

embalign::Matrix random_similarity(std::size_t m) {
  embalign::Rng rng(11, "bench-cluster");
  embalign::Matrix s(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    s(i, i) = 100.0;
    for (std::size_t j = i + 1; j < m; ++j) s(i, j) = s(j, i) = 100.0 * rng.uniform01();
  }
  return s;
}

void BM_Agglomerative(benchmark::State& state) {
  const auto s = random_similarity(static_cast<std::size_t>(state.range(0)));
  const auto linkage = static_cast<embalign::Linkage>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(embalign::agglomerative_cluster(s, linkage));
}

}  // namespace

BENCHMARK(BM_Agglomerative)
    ->ArgsProduct({{16, 64}, {static_cast<long>(embalign::Linkage::Single), static_cast<long>(embalign::Linkage::Average),
                              static_cast<long>(embalign::Linkage::Complete)}})
    ->Unit(benchmark::kMicrosecond);
