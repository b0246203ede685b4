#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "embalign/align.hpp"
#include "embalign/embedstore.hpp"
#include "embalign/ident_eval.hpp"
#include "embalign/stats.hpp"
#include "embalign/types.hpp"

namespace embalign {

/// Directed cross-model Rank-1 percentages: rank1[a][b] is a -> b.
struct CompatibilityMatrix {
  std::vector<std::string> model_names;
  std::vector<std::vector<std::optional<double>>> rank1;
  std::string dataset_name;
  std::string method;
  /// "a -> b: reason" for every entry left missing.
  std::vector<std::string> failures;

  std::size_t size() const { return model_names.size(); }
};

/// Runs the intra-dataset identification protocol for every ordered pair
/// (diagonal included) and stores the mean Rank-1 in percent. Pairs that
/// fail are left missing rather than zero. config.jobs bounds pair-level
/// parallelism.
CompatibilityMatrix build_compatibility_matrix(const std::vector<EmbeddingSet>& sets,
                                               const IdentificationConfig& config);

/// (rank1 + rank1^T) / 2. A missing diagonal is taken as 100.
Matrix symmetrize(const CompatibilityMatrix& cm);
Matrix symmetrize(const Matrix& m);

enum class Linkage { Average, Single, Complete };

Linkage parse_linkage(const std::string& name);
std::string to_string(Linkage linkage);

struct Merge {
  std::size_t left = 0;   // cluster ids: leaves are 0..M-1, merge k creates M+k
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;   // leaves under the new cluster
};

struct Dendrogram {
  std::size_t num_leaves = 0;
  std::vector<Merge> merges;
  std::vector<std::size_t> leaf_order;
};

/// Agglomerative clustering on distances 100 - similarity. Equal distances
/// are resolved toward the lowest pair of cluster ids.
Dendrogram agglomerative_cluster(const Matrix& similarity, Linkage linkage = Linkage::Average);

std::string to_newick(const Dendrogram& dendrogram, const std::vector<std::string>& names);

struct AsymmetryReport {
  std::vector<std::string> model_names;
  std::vector<double> incoming;  // mean over a != m of rank1[a][m]
  std::vector<double> outgoing;  // mean over b != m of rank1[m][b]
  double mean_deviation = 0.0;   // mean over unordered pairs of |a->b - b->a|
  double max_deviation = 0.0;
};

AsymmetryReport asymmetry_stats(const CompatibilityMatrix& cm);

struct SweepConfig {
  std::vector<double> fractions{0.1, 0.25, 0.5, 0.75, 1.0};
  std::vector<Method> methods{Method::Procrustes, Method::Linear, Method::Ridge};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  double alpha = kDefaultRidgeAlpha;
  double train_fraction = 0.7;
  RetrievalOptions retrieval;
  std::size_t jobs = 1;
};

struct SweepRow {
  Method method = Method::Procrustes;
  double fraction = 0.0;
  std::vector<std::size_t> n_train;  // per seed
  std::vector<double> rank1;         // per seed, percent
  MetricSummary rank1_summary;
};

struct SweepTable {
  std::vector<std::uint64_t> seeds;
  std::vector<SweepRow> rows;  // method-major, fractions ascending
};

/// Per seed the identity split is fixed; the training pool is shrunk to a
/// prefix of its identities and the test pool never changes.
SweepTable training_size_sweep(const EmbeddingSet& source, const EmbeddingSet& target,
                               const SweepConfig& config);

}  // namespace embalign
