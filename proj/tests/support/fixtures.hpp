#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

#include "embalign/embedstore.hpp"
#include "embalign/synth.hpp"

namespace fixtures {

struct ViewPairSpec {
  std::size_t ids = 100;
  std::size_t per_id = 10;
  std::size_t intrinsic_dim = 16;
  std::size_t dim_a = 64;
  std::size_t dim_b = 64;
  double spread = 0.3;
  double noise = 0.0;
  embalign::MapKind kind = embalign::MapKind::Orthogonal;
  std::uint64_t seed = 7;
};

/// Two views of one identity cloud, named "a" and "b".
std::pair<embalign::EmbeddingSet, embalign::EmbeddingSet> view_pair(const ViewPairSpec& spec);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace fixtures
