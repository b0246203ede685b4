#include <benchmark/benchmark.h>

#include <embalign/ident_eval.hpp>
#include <embalign/rng.hpp>
#include <embalign/splits.hpp>
#include <embalign/synth.hpp>
#include <embalign/verif_eval.hpp>

namespace {

void BM_RetrievalMetrics(benchmark::State& state) {
  const auto ids = static_cast<std::size_t>(state.range(0));
  const auto cloud = embalign::generate_identity_cloud(ids, 10, 32, 1.0, 0.5, 3);
  const auto set = embalign::embed_view(cloud, embalign::ViewOptions{128, 1, 0.1});
  const auto rows = set.to_matrix();
  embalign::RetrievalOptions options;
  options.exclude_self = true;
  for (auto _ : state)
    benchmark::DoNotOptimize(embalign::retrieval_metrics(rows, rows, set.labels(), set.labels(), options));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(rows.rows()));
}

void BM_RocCurve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  embalign::Rng rng(5, "bench-roc");
  std::vector<double> scores(n);
  std::vector<bool> genuine(n);
  for (std::size_t i = 0; i < n; ++i) {
    genuine[i] = rng.uniform01() < 0.1;
    scores[i] = rng.normal() + (genuine[i] ? 2.0 : 0.0);
  }
  for (auto _ : state) {
    const auto roc = embalign::roc_curve(scores, genuine);
    benchmark::DoNotOptimize(embalign::auc(roc));
    benchmark::DoNotOptimize(embalign::eer(roc));
    benchmark::DoNotOptimize(embalign::tmr_at_fmr(roc, 1e-3));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}

void BM_SamplePairs(benchmark::State& state) {
  std::vector<std::string> labels;
  for (int i = 0; i < state.range(0); ++i)
    for (int k = 0; k < 10; ++k) labels.push_back("id" + std::to_string(i));
  for (auto _ : state) benchmark::DoNotOptimize(embalign::sample_pairs_capped(labels, 20000, 200000, 9));
}

}  // namespace

BENCHMARK(BM_RetrievalMetrics)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RocCurve)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePairs)->Arg(2000)->Unit(benchmark::kMillisecond);
