#include "fixtures.hpp"

namespace fixtures {

std::pair<embalign::EmbeddingSet, embalign::EmbeddingSet> view_pair(const ViewPairSpec& spec) {
  const auto cloud = embalign::generate_identity_cloud(spec.ids, spec.per_id, spec.intrinsic_dim,
                                                       1.0, spec.spread, spec.seed);
  embalign::ViewOptions a;
  a.target_dim = spec.dim_a;
  a.view_seed = spec.seed * 1000 + 1;
  a.noise = spec.noise;
  a.map_kind = spec.kind;
  a.model_name = "a";
  embalign::ViewOptions b = a;
  b.target_dim = spec.dim_b;
  b.view_seed = spec.seed * 1000 + 2;
  b.model_name = "b";
  return {embalign::embed_view(cloud, a), embalign::embed_view(cloud, b)};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("embalign-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
