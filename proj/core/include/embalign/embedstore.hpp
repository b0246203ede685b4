#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "embalign/types.hpp"

namespace embalign {

enum class FileFormat { Binary, Csv };

/// Picks Csv for a ".csv" extension and Binary otherwise.
FileFormat format_from_path(const std::filesystem::path& path);

/// Labeled per-image embeddings produced by one model on one dataset.
///
/// Immutable once constructed; the constructor validates that rows, ids and
/// labels agree in length, ids are unique, and every entry is finite.
class EmbeddingSet {
 public:
  EmbeddingSet(std::string model_name, std::string dataset_name,
               StorageMatrix rows, std::vector<std::string> image_ids,
               std::vector<std::string> labels);

  const std::string& model_name() const noexcept { return model_name_; }
  const std::string& dataset_name() const noexcept { return dataset_name_; }
  const StorageMatrix& rows() const noexcept { return rows_; }
  const std::vector<std::string>& image_ids() const noexcept { return image_ids_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::size_t size() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(rows_.cols()); }

  /// Rows widened to float64.
  Matrix to_matrix() const;
  /// Selected rows widened to float64, in the given order.
  Matrix to_matrix(const std::vector<std::size_t>& row_indices) const;

  /// Subset in the given row order.
  EmbeddingSet select(const std::vector<std::size_t>& row_indices) const;

  friend bool operator==(const EmbeddingSet& a, const EmbeddingSet& b);

 private:
  std::string model_name_;
  std::string dataset_name_;
  StorageMatrix rows_;
  std::vector<std::string> image_ids_;
  std::vector<std::string> labels_;
};

/// Binary: `<path>` holds the `EMB1` matrix and `<stem>.labels.tsv` next to
/// it holds one `image_id<TAB>identity` line per row. Csv: a single file
/// with header `image_id,identity,e0,...`.
///
/// The model name defaults to the file stem; the dataset name is left empty
/// unless given.
EmbeddingSet load_embeddings(const std::filesystem::path& path, FileFormat format,
                             std::string model_name = {},
                             std::string dataset_name = {});

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path,
                     FileFormat format);

/// Companion label file for a binary matrix file: `a/b.emb` -> `a/b.labels.tsv`.
std::filesystem::path labels_path_for(const std::filesystem::path& matrix_path);

/// Restricts both sets to their shared image ids, ordered lexicographically
/// by id. Throws LabelConflictError if a shared id carries different labels
/// and EmptyIntersectionError if nothing is shared.
std::pair<EmbeddingSet, EmbeddingSet> intersect_on_images(const EmbeddingSet& a,
                                                          const EmbeddingSet& b);

}  // namespace embalign
