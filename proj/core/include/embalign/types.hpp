#pragma once

#include <Eigen/Core>

namespace embalign {

/// Solver-side matrices are float64, column-major.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Storage-side embeddings are float32, row-major so a file's payload maps
/// onto the buffer directly.
using StorageMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace embalign
