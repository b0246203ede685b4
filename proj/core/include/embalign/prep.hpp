#pragma once

#include <cstddef>

#include "embalign/types.hpp"

namespace embalign {

/// Training statistics for one (source, target) model pair: the column means
/// of each side's normalized training rows and the common padded width.
struct PrepStats {
  Vector mu_x;  // source mean, length d_a
  Vector mu_y;  // target mean, length d_b
  std::size_t d_a = 0;
  std::size_t d_b = 0;
  std::size_t D = 0;  // max(d_a, d_b)
  std::size_t n_train = 0;

  /// Throws ConsistencyError/DataError if the invariants above do not hold.
  void validate() const;
};

enum class Side { Source, Target };

/// Scales every row to unit Euclidean norm. Throws DegenerateRowError for a
/// zero row.
Matrix l2_normalize(const Matrix& rows);

/// Column means of already-normalized training rows of both models.
PrepStats fit_prep(const Matrix& x_train, const Matrix& y_train);

/// [rows - mu | 0]: centers with the side's training mean and appends zero
/// columns up to stats.D.
Matrix apply_prep(const Matrix& rows, const PrepStats& stats, Side side);

/// Zero-pads normalized rows to `width` columns without centering; used for
/// the unaligned baseline.
Matrix pad_columns(const Matrix& rows, std::size_t width);

}  // namespace embalign
