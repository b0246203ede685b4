#pragma once

#include "embalign/align.hpp"
#include "embalign/embedstore.hpp"
#include "embalign/types.hpp"

namespace embalign::detail {

/// Evaluation-side matrices for one fitted split.
struct PreparedViews {
  Matrix aligned_queries;   // transform(eval source)
  Matrix gallery;           // preprocessed eval target
  Matrix baseline_queries;  // normalized, zero-padded eval source
  Matrix baseline_gallery;  // normalized, zero-padded eval target
};

PreparedViews prepare_views(const Matrix& source_train, const Matrix& target_train,
                            const Matrix& source_eval, const Matrix& target_eval,
                            const FitOptions& options);

/// Throws ConsistencyError unless both sets list the same image ids in the
/// same order.
void require_paired(const EmbeddingSet& source, const EmbeddingSet& target);

std::vector<std::string> select_labels(const std::vector<std::string>& labels,
                                       const std::vector<std::size_t>& rows);

}  // namespace embalign::detail
