#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "embalign/embedstore.hpp"
#include "embalign/types.hpp"

namespace embalign {

/// Identities as Gaussian clusters in a low-dimensional intrinsic space.
struct IdentityCloud {
  std::size_t num_identities = 0;
  std::size_t per_identity = 0;
  std::size_t intrinsic_dim = 0;
  Matrix centers;  // num_identities x intrinsic_dim
  Matrix points;   // (num_identities * per_identity) x intrinsic_dim, identity-major
  std::vector<std::string> labels;
  std::vector<std::string> image_ids;
  std::uint64_t seed = 0;
};

/// centers ~ center_scale * N(0, I); point = center + spread * N(0, I).
IdentityCloud generate_identity_cloud(std::size_t num_identities, std::size_t per_identity,
                                      std::size_t intrinsic_dim, double center_scale,
                                      double spread, std::uint64_t seed);

enum class MapKind { Orthogonal, GeneralLinear };

MapKind parse_map_kind(const std::string& name);
std::string to_string(MapKind kind);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
Matrix random_orthogonal(std::size_t dim, std::uint64_t seed);

/// Gaussian matrix whose singular values are clamped so that the condition
/// number does not exceed max_condition.
Matrix random_general_linear(std::size_t dim, std::uint64_t seed, double max_condition = 99.0);

/// The map embed_view applies for (target_dim, view_seed, kind).
Matrix view_map(std::size_t target_dim, std::uint64_t view_seed, MapKind kind);

struct ViewOptions {
  std::size_t target_dim = 64;
  std::uint64_t view_seed = 1;
  double noise = 0.0;
  MapKind map_kind = MapKind::Orthogonal;
  std::string model_name = "view";
  std::string dataset_name = "synth";
};

/// One "model" of the cloud: zero-extend points to target_dim, multiply by
/// the view map's transpose, add Gaussian noise, then l2-normalize rows.
/// Views of one cloud share image ids.
EmbeddingSet embed_view(const IdentityCloud& cloud, const ViewOptions& options);

}  // namespace embalign
