#include "protocol.hpp"

#include <algorithm>

#include "embalign/errors.hpp"
#include "embalign/prep.hpp"

namespace embalign::detail {

PreparedViews prepare_views(const Matrix& source_train, const Matrix& target_train,
                            const Matrix& source_eval, const Matrix& target_eval,
                            const FitOptions& options) {
  const AlignmentMap map = fit_map(source_train, target_train, options);
  PreparedViews views;
  views.aligned_queries = transform(source_eval, map);
  views.gallery = apply_prep(l2_normalize(target_eval), map.stats, Side::Target);
  views.baseline_queries = pad_columns(l2_normalize(source_eval), map.stats.D);
  views.baseline_gallery = pad_columns(l2_normalize(target_eval), map.stats.D);
  return views;
}

void require_paired(const EmbeddingSet& source, const EmbeddingSet& target) {
  if (source.image_ids() != target.image_ids()) {
    throw ConsistencyError(source.model_name() + " and " + target.model_name() +
                           " do not list the same images in the same order; "
                           "run intersect_on_images first");
  }
}

std::vector<std::string> select_labels(const std::vector<std::string>& labels,
                                       const std::vector<std::size_t>& rows) {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(labels[r]);
  return out;
}

}  // namespace embalign::detail
