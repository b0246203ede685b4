#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "embalign/align.hpp"
#include "embalign/embedstore.hpp"
#include "embalign/stats.hpp"
#include "embalign/types.hpp"

namespace embalign {

/// Cosine similarity of every query row with every gallery row.
/// Throws DegenerateRowError (query row index) for a zero row.
Matrix score_matrix(const Matrix& queries, const Matrix& gallery);

// Ranking metrics over a precomputed Q x G score matrix. Gallery items are
// ranked by descending score, ties broken by ascending gallery index.

/// Fraction of queries with a same-label gallery item in the top k.
double rank_k_accuracy(const Matrix& scores, const std::vector<std::string>& query_labels,
                       const std::vector<std::string>& gallery_labels, std::size_t k);

/// Mean over queries of standard average precision, all same-label gallery
/// items relevant. Throws ProtocolError for a query with no relevant item.
double mean_average_precision(const Matrix& scores, const std::vector<std::string>& query_labels,
                              const std::vector<std::string>& gallery_labels);

/// Rank-k accuracy for k = 1..max_rank.
std::vector<double> cmc_curve(const Matrix& scores, const std::vector<std::string>& query_labels,
                              const std::vector<std::string>& gallery_labels,
                              std::size_t max_rank = 50);

struct RetrievalMetrics {
  std::map<std::size_t, double> rank_k;
  double map_score = 0.0;
  std::vector<double> cmc;
  std::size_t n_queries = 0;  // queries that were scored
  std::size_t n_gallery = 0;
  /// Queries dropped under exclude_self because no other image shares
  /// their identity.
  std::size_t n_skipped = 0;
};

struct RetrievalOptions {
  std::vector<std::size_t> ks{1, 5, 10};
  std::size_t max_rank = 50;
  /// Query i and gallery i are the same image; drop it from query i's list.
  bool exclude_self = false;
  /// Queries scored per block; bounds memory at block_rows x G.
  std::size_t block_rows = 512;
};

/// All identification metrics from embeddings, scored block by block.
/// Ranks and max_rank beyond the gallery size are clamped.
RetrievalMetrics retrieval_metrics(const Matrix& queries, const Matrix& gallery,
                                   const std::vector<std::string>& query_labels,
                                   const std::vector<std::string>& gallery_labels,
                                   const RetrievalOptions& options);

struct RetrievalReport {
  std::vector<std::uint64_t> seeds;
  std::vector<RetrievalMetrics> per_seed;
  std::map<std::size_t, MetricSummary> rank_k;
  MetricSummary map_score;
  std::vector<MetricSummary> cmc;
};

RetrievalReport aggregate(std::vector<std::uint64_t> seeds, std::vector<RetrievalMetrics> per_seed);

struct IdentificationConfig {
  Method method = Method::Procrustes;
  double alpha = kDefaultRidgeAlpha;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  double train_fraction = 0.7;
  RetrievalOptions retrieval;
  std::size_t jobs = 1;
};

struct IdentificationReport {
  std::string protocol;  // "intra-dataset" or "cross-dataset"
  std::string source_model;
  std::string target_model;
  IdentificationConfig config;
  RetrievalReport aligned;
  RetrievalReport baseline;
};

/// Intra-dataset protocol. Source and target must list the same image ids
/// in the same order (see intersect_on_images). Per seed: identity-disjoint
/// split, fit on training identities, query with aligned test-source rows
/// against preprocessed test-target rows. The baseline compares normalized,
/// zero-padded raw rows.
IdentificationReport evaluate_identification(const EmbeddingSet& source, const EmbeddingSet& target,
                                             const IdentificationConfig& config);

/// Cross-dataset protocol: fit on every row of the training pair, evaluate on
/// every row of the evaluation pair. The fit does not depend on the seed.
IdentificationReport evaluate_identification_cross(const EmbeddingSet& train_source,
                                                   const EmbeddingSet& train_target,
                                                   const EmbeddingSet& eval_source,
                                                   const EmbeddingSet& eval_target,
                                                   const IdentificationConfig& config);

}  // namespace embalign
