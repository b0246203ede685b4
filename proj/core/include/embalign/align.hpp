#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "embalign/prep.hpp"
#include "embalign/types.hpp"

namespace embalign {

enum class Method { Procrustes, Linear, Ridge };

std::string_view to_string(Method method);
/// Accepts "procrustes", "linear", "ridge". Throws ArgumentError otherwise.
Method parse_method(std::string_view name);

/// Default ridge damping.
inline constexpr double kDefaultRidgeAlpha = 0.1;
/// Singular values below this fraction of the largest are treated as zero
/// by the pseudo-inverse.
inline constexpr double kPinvRelativeTolerance = 1e-10;

/// Orthogonal W = U V^T from the SVD of x^T y. Reflections are allowed.
Matrix fit_procrustes(const Matrix& x_train, const Matrix& y_train);

/// Minimum-norm least-squares W = pinv(x) y via a thin SVD of x.
Matrix fit_linear(const Matrix& x_train, const Matrix& y_train);

/// W = (x^T x + alpha I)^{-1} x^T y via Cholesky. alpha must be > 0.
Matrix fit_ridge(const Matrix& x_train, const Matrix& y_train, double alpha);

Matrix fit_solver(Method method, const Matrix& x_train, const Matrix& y_train, double alpha);

/// ||x W - y||_F.
double residual(const Matrix& w, const Matrix& x, const Matrix& y);

/// A fitted source-to-target map together with the preprocessing it expects.
struct AlignmentMap {
  Matrix w;  // D x D, applied on the right of row vectors
  PrepStats stats;
  Method method = Method::Procrustes;
  double alpha = 0.0;
  std::string source_model;
  std::string target_model;
  std::int64_t seed = 0;

  void validate() const;
};

struct FitOptions {
  Method method = Method::Procrustes;
  double alpha = kDefaultRidgeAlpha;  // only used for ridge
  std::string source_model;
  std::string target_model;
  std::int64_t seed = 0;
};

/// Full fit from raw (unnormalized) training rows of both models: normalize,
/// fit means, center and pad, then solve.
AlignmentMap fit_map(const Matrix& source_train, const Matrix& target_train,
                     const FitOptions& options);

/// Maps raw source rows into the target's preprocessed space.
Matrix transform(const Matrix& rows, const AlignmentMap& map);

/// Frobenius residual of the map's W on raw training rows, after the same
/// normalization and centering the fit used (no ridge penalty term).
double training_residual(const AlignmentMap& map, const Matrix& x_train, const Matrix& y_train);

inline constexpr int kMapFormatVersion = 1;

/// One compact JSON header line, then mu_x, mu_y and row-major W as
/// little-endian float64. Block offsets in the header count bytes from the
/// first byte after the header's newline.
std::string serialize_map(const AlignmentMap& map);
AlignmentMap deserialize_map(std::string_view bytes);

void save_map(const AlignmentMap& map, const std::filesystem::path& path);
AlignmentMap load_map(const std::filesystem::path& path);

}  // namespace embalign
