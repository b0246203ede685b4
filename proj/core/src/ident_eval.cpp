#include "embalign/ident_eval.hpp"

#include "embalign/errors.hpp"
#include "embalign/parallel.hpp"
#include "embalign/splits.hpp"
#include "protocol.hpp"

namespace embalign {

namespace {

FitOptions fit_options(const IdentificationConfig& config, const EmbeddingSet& source,
                       const EmbeddingSet& target, std::uint64_t seed) {
  FitOptions options;
  options.method = config.method;
  options.alpha = config.alpha;
  options.source_model = source.model_name();
  options.target_model = target.model_name();
  options.seed = static_cast<std::int64_t>(seed);
  return options;
}

void check_config(const IdentificationConfig& config) {
  if (config.seeds.empty()) throw ArgumentError("at least one seed is required");
}

}  // namespace

IdentificationReport evaluate_identification(const EmbeddingSet& source, const EmbeddingSet& target,
                                             const IdentificationConfig& config) {
  check_config(config);
  detail::require_paired(source, target);

  const std::size_t n_seeds = config.seeds.size();
  std::vector<RetrievalMetrics> aligned(n_seeds), baseline(n_seeds);
  parallel_for(config.jobs, n_seeds, [&](std::size_t s) {
    const auto seed = config.seeds[s];
    const SplitSpec split = identity_disjoint_split(source.labels(), config.train_fraction, seed);
    const auto views = detail::prepare_views(
        source.to_matrix(split.train_rows), target.to_matrix(split.train_rows),
        source.to_matrix(split.test_rows), target.to_matrix(split.test_rows),
        fit_options(config, source, target, seed));
    const auto labels = detail::select_labels(source.labels(), split.test_rows);
    aligned[s] = retrieval_metrics(views.aligned_queries, views.gallery, labels, labels,
                                   config.retrieval);
    baseline[s] = retrieval_metrics(views.baseline_queries, views.baseline_gallery, labels, labels,
                                    config.retrieval);
  });

  IdentificationReport report;
  report.protocol = "intra-dataset";
  report.source_model = source.model_name();
  report.target_model = target.model_name();
  report.config = config;
  report.aligned = aggregate(config.seeds, std::move(aligned));
  report.baseline = aggregate(config.seeds, std::move(baseline));
  return report;
}

IdentificationReport evaluate_identification_cross(const EmbeddingSet& train_source,
                                                   const EmbeddingSet& train_target,
                                                   const EmbeddingSet& eval_source,
                                                   const EmbeddingSet& eval_target,
                                                   const IdentificationConfig& config) {
  check_config(config);
  detail::require_paired(train_source, train_target);
  detail::require_paired(eval_source, eval_target);

  const auto views = detail::prepare_views(
      train_source.to_matrix(), train_target.to_matrix(), eval_source.to_matrix(),
      eval_target.to_matrix(), fit_options(config, train_source, train_target, config.seeds.front()));
  const auto& labels = eval_source.labels();
  const auto aligned = retrieval_metrics(views.aligned_queries, views.gallery, labels, labels,
                                         config.retrieval);
  const auto baseline = retrieval_metrics(views.baseline_queries, views.baseline_gallery, labels,
                                          labels, config.retrieval);

  IdentificationReport report;
  report.protocol = "cross-dataset";
  report.source_model = train_source.model_name();
  report.target_model = train_target.model_name();
  report.config = config;
  report.aligned = aggregate(config.seeds, std::vector<RetrievalMetrics>(config.seeds.size(), aligned));
  report.baseline =
      aggregate(config.seeds, std::vector<RetrievalMetrics>(config.seeds.size(), baseline));
  return report;
}

}  // namespace embalign
