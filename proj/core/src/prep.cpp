#include "embalign/prep.hpp"

#include <algorithm>
#include <string>

#include "embalign/errors.hpp"

namespace embalign {

void PrepStats::validate() const {
  if (d_a == 0 || d_b == 0) throw ConsistencyError("prep stats: zero dimension");
  if (D != std::max(d_a, d_b)) throw ConsistencyError("prep stats: D != max(d_a, d_b)");
  if (static_cast<std::size_t>(mu_x.size()) != d_a || static_cast<std::size_t>(mu_y.size()) != d_b) {
    throw ConsistencyError("prep stats: mean length does not match dimension");
  }
  if (!mu_x.allFinite() || !mu_y.allFinite()) throw DataError("prep stats: non-finite mean");
}

Matrix l2_normalize(const Matrix& rows) {
  Matrix out = rows;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0)) throw DegenerateRowError(static_cast<std::size_t>(i));
    out.row(i) /= norm;
  }
  return out;
}

PrepStats fit_prep(const Matrix& x_train, const Matrix& y_train) {
  if (x_train.rows() != y_train.rows()) {
    throw ConsistencyError("fit_prep: source has " + std::to_string(x_train.rows()) +
                           " training rows, target has " + std::to_string(y_train.rows()));
  }
  if (x_train.rows() == 0) throw ConsistencyError("fit_prep: no training rows");
  if (x_train.cols() == 0 || y_train.cols() == 0) throw ConsistencyError("fit_prep: zero width");
  if (!x_train.allFinite() || !y_train.allFinite()) throw DataError("fit_prep: non-finite input");

  PrepStats stats;
  stats.mu_x = x_train.colwise().mean().transpose();
  stats.mu_y = y_train.colwise().mean().transpose();
  stats.d_a = static_cast<std::size_t>(x_train.cols());
  stats.d_b = static_cast<std::size_t>(y_train.cols());
  stats.D = std::max(stats.d_a, stats.d_b);
  stats.n_train = static_cast<std::size_t>(x_train.rows());
  return stats;
}

Matrix apply_prep(const Matrix& rows, const PrepStats& stats, Side side) {
  const Vector& mu = side == Side::Source ? stats.mu_x : stats.mu_y;
  const auto d = static_cast<std::size_t>(mu.size());
  if (static_cast<std::size_t>(rows.cols()) != d) {
    throw ConsistencyError(std::string("apply_prep: ") +
                           (side == Side::Source ? "source" : "target") + " width " +
                           std::to_string(rows.cols()) + " does not match " + std::to_string(d));
  }
  Matrix out = Matrix::Zero(rows.rows(), static_cast<Eigen::Index>(stats.D));
  out.leftCols(static_cast<Eigen::Index>(d)) = rows.rowwise() - mu.transpose();
  return out;
}

Matrix pad_columns(const Matrix& rows, std::size_t width) {
  if (static_cast<std::size_t>(rows.cols()) > width) {
    throw ConsistencyError("pad_columns: rows are wider than the target width");
  }
  Matrix out = Matrix::Zero(rows.rows(), static_cast<Eigen::Index>(width));
  out.leftCols(rows.cols()) = rows;
  return out;
}

}  // namespace embalign
