#include "embalign/synth.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>

#include "embalign/errors.hpp"
#include "embalign/rng.hpp"

namespace embalign {

namespace {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Filled row by row so the draw order does not depend on storage order.
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

std::string numbered(const char* prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (digits.size() < static_cast<std::size_t>(width)) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

int digits_for(std::size_t n) {
  int d = 1;
  for (std::size_t v = n; v >= 10; v /= 10) ++d;
  return std::max(d, 4);
}

}  // namespace

IdentityCloud generate_identity_cloud(std::size_t num_identities, std::size_t per_identity,
                                      std::size_t intrinsic_dim, double center_scale,
                                      double spread, std::uint64_t seed) {
  if (num_identities < 1 || per_identity < 1 || intrinsic_dim < 1) {
    throw ArgumentError("identity cloud counts must all be >= 1");
  }
  if (!(spread >= 0.0) || !(center_scale >= 0.0)) {
    throw ArgumentError("spread and center_scale must be non-negative");
  }
  IdentityCloud cloud;
  cloud.num_identities = num_identities;
  cloud.per_identity = per_identity;
  cloud.intrinsic_dim = intrinsic_dim;
  cloud.seed = seed;

  Rng center_rng(seed, "cloud-centers");
  cloud.centers = center_scale * gaussian_matrix(num_identities, intrinsic_dim, center_rng);

  Rng point_rng(seed, "cloud-points");
  const std::size_t n = num_identities * per_identity;
  cloud.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(intrinsic_dim));
  const int id_width = digits_for(num_identities);
  const int img_width = digits_for(n);
  for (std::size_t k = 0; k < num_identities; ++k) {
    const std::string label = numbered("id", k, id_width);
    for (std::size_t p = 0; p < per_identity; ++p) {
      const std::size_t row = k * per_identity + p;
      for (std::size_t j = 0; j < intrinsic_dim; ++j) {
        cloud.points(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
            cloud.centers(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) +
            spread * point_rng.normal();
      }
      cloud.labels.push_back(label);
      cloud.image_ids.push_back(numbered("img", row, img_width));
    }
  }
  return cloud;
}

MapKind parse_map_kind(const std::string& name) {
  if (name == "orthogonal") return MapKind::Orthogonal;
  if (name == "general_linear" || name == "general-linear") return MapKind::GeneralLinear;
  throw ArgumentError("unknown map kind '" + name + "'");
}

std::string to_string(MapKind kind) {
  return kind == MapKind::Orthogonal ? "orthogonal" : "general_linear";
}

Matrix random_orthogonal(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw ArgumentError("random_orthogonal: dim must be >= 1");
  Rng rng(seed, "orthogonal-map");
  const Matrix a = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix random_general_linear(std::size_t dim, std::uint64_t seed, double max_condition) {
  if (dim < 1) throw ArgumentError("random_general_linear: dim must be >= 1");
  if (!(max_condition >= 1.0)) throw ArgumentError("max_condition must be >= 1");
  Rng rng(seed, "general-linear-map");
  const Matrix a = gaussian_matrix(dim, dim, rng);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector sigma = svd.singularValues();
  const double floor = sigma(0) / max_condition;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) sigma(i) = std::max(sigma(i), floor);
  return svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
}

Matrix view_map(std::size_t target_dim, std::uint64_t view_seed, MapKind kind) {
  return kind == MapKind::Orthogonal ? random_orthogonal(target_dim, view_seed)
                                     : random_general_linear(target_dim, view_seed);
}

EmbeddingSet embed_view(const IdentityCloud& cloud, const ViewOptions& options) {
  if (options.target_dim < cloud.intrinsic_dim) {
    throw ArgumentError("target_dim " + std::to_string(options.target_dim) +
                        " is smaller than intrinsic_dim " + std::to_string(cloud.intrinsic_dim));
  }
  if (!(options.noise >= 0.0)) throw ArgumentError("noise must be non-negative");
  const auto d = static_cast<Eigen::Index>(options.target_dim);
  const Matrix q = view_map(options.target_dim, options.view_seed, options.map_kind);

  Matrix lifted = Matrix::Zero(cloud.points.rows(), d);
  lifted.leftCols(cloud.points.cols()) = cloud.points;
  Matrix embedded = lifted * q.transpose();
  if (options.noise > 0.0) {
    Rng rng(options.view_seed, "view-noise");
    embedded += options.noise * gaussian_matrix(static_cast<std::size_t>(embedded.rows()),
                                                options.target_dim, rng);
  }
  StorageMatrix rows(embedded.rows(), d);
  for (Eigen::Index i = 0; i < embedded.rows(); ++i) {
    const double norm = embedded.row(i).norm();
    if (!(norm > 0.0)) throw DegenerateRowError(static_cast<std::size_t>(i));
    rows.row(i) = (embedded.row(i) / norm).cast<float>();
  }
  return EmbeddingSet(options.model_name, options.dataset_name, std::move(rows), cloud.image_ids,
                      cloud.labels);
}

}  // namespace embalign
