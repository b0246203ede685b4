#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include "embalign/align.hpp"
#include "embalign/errors.hpp"
#include "embalign/fileio.hpp"
#include "embalign/rng.hpp"
#include "embalign/synth.hpp"
#include "fixtures.hpp"

using namespace embalign;

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed, "test-align");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST(Procrustes, RecoversPlantedRotation) {
  const Matrix x = gaussian(200, 12, 1);
  const Matrix q = random_orthogonal(12, 5);
  const Matrix w = fit_procrustes(x, x * q);
  EXPECT_LE((w - q).norm(), 1e-10);
}

TEST(Procrustes, IsOrthogonalOnRankDeficientInput) {
  Matrix x = Matrix::Zero(5, 10);
  x.leftCols(3) = gaussian(5, 3, 2);
  const Matrix y = gaussian(5, 10, 3);
  const Matrix w = fit_procrustes(x, y);
  EXPECT_LE((w.transpose() * w - Matrix::Identity(10, 10)).norm(), 1e-8);
}

TEST(Procrustes, BeatsRandomRotations) {
  const Matrix x = gaussian(50, 6, 4);
  const Matrix y = gaussian(50, 6, 5);
  const double best = residual(fit_procrustes(x, y), x, y);
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_LE(best, residual(random_orthogonal(6, 100 + s), x, y) + 1e-12);
  }
}

TEST(Linear, MatchesNormalEquationsWhenFullRank) {
  const Matrix x = gaussian(80, 7, 6);
  const Matrix y = gaussian(80, 7, 7);
  const Matrix expected = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  EXPECT_LE((fit_linear(x, y) - expected).norm(), 1e-10);
}

TEST(Linear, UnderdeterminedGivesMinimumNormInterpolant) {
  // n = 50 < D = 64: pinv solution interpolates and lies in the row space.
  const Matrix x = gaussian(50, 64, 8);
  const Matrix y = gaussian(50, 64, 9);
  const Matrix w = fit_linear(x, y);
  EXPECT_LE((x * w - y).norm(), 1e-8 * y.norm());
  const Eigen::ColPivHouseholderQR<Matrix> qr(x.transpose());
  const Matrix basis = qr.householderQ() * Matrix::Identity(64, 50);
  EXPECT_LE((w - basis * (basis.transpose() * w)).norm(), 1e-8);
}

TEST(Ridge, MatchesClosedForm) {
  const Matrix x = gaussian(30, 9, 10);
  const Matrix y = gaussian(30, 9, 11);
  const Matrix expected =
      (x.transpose() * x + 0.1 * Matrix::Identity(9, 9)).inverse() * x.transpose() * y;
  EXPECT_LE((fit_ridge(x, y, 0.1) - expected).norm(), 1e-10);
}

TEST(Ridge, RejectsNonPositiveAlpha) {
  const Matrix x = gaussian(5, 3, 12);
  EXPECT_THROW(fit_ridge(x, x, 0.0), ArgumentError);
  EXPECT_THROW(fit_ridge(x, x, -1.0), ArgumentError);
}

TEST(Ridge, DefaultAlpha) { EXPECT_DOUBLE_EQ(kDefaultRidgeAlpha, 0.1); }

TEST(Solvers, ShapeMismatchIsConsistencyError) {
  EXPECT_THROW(fit_procrustes(Matrix::Ones(3, 2), Matrix::Ones(4, 2)), ConsistencyError);
  EXPECT_THROW(fit_linear(Matrix::Ones(3, 2), Matrix::Ones(3, 3)), ConsistencyError);
}

TEST(Method, ParseAndPrint) {
  for (auto m : {Method::Procrustes, Method::Linear, Method::Ridge}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("cca"), ArgumentError);
}

TEST(AlignmentMap, FitTransformRecoversViews) {
  auto [a, b] = fixtures::view_pair({.ids = 30, .per_id = 4, .intrinsic_dim = 8, .dim_a = 24, .dim_b = 32});
  FitOptions opt;
  const auto map = fit_map(a.to_matrix(), b.to_matrix(), opt);
  EXPECT_EQ(map.stats.D, 32u);
  EXPECT_NO_THROW(map.validate());
  const Matrix x = a.to_matrix();
  const Matrix y = b.to_matrix();
  EXPECT_LE(training_residual(map, x, y), 1e-6 * std::sqrt(static_cast<double>(y.rows())));
}

TEST(AlignmentMap, LinearOnFewerRowsThanDimensions) {
  auto [a, b] = fixtures::view_pair({.ids = 10, .per_id = 5, .dim_a = 64, .dim_b = 64});
  FitOptions opt;
  opt.method = Method::Linear;
  const auto map = fit_map(a.to_matrix(), b.to_matrix(), opt);
  EXPECT_EQ(map.stats.n_train, 50u);
  EXPECT_TRUE(map.w.allFinite());
}

TEST(AlignmentMap, SerializationRoundTripIsBitwise) {
  auto [a, b] = fixtures::view_pair({.ids = 8, .per_id = 3, .intrinsic_dim = 6, .dim_a = 10, .dim_b = 12});
  FitOptions opt;
  opt.method = Method::Ridge;
  opt.alpha = 0.25;
  opt.source_model = "a";
  opt.target_model = "b";
  opt.seed = 3;
  const auto map = fit_map(a.to_matrix(), b.to_matrix(), opt);
  const auto bytes = serialize_map(map);
  const auto back = deserialize_map(bytes);
  EXPECT_EQ(back.w, map.w);
  EXPECT_EQ(back.stats.mu_x, map.stats.mu_x);
  EXPECT_EQ(back.stats.mu_y, map.stats.mu_y);
  EXPECT_EQ(back.method, Method::Ridge);
  EXPECT_EQ(back.alpha, 0.25);
  EXPECT_EQ(back.source_model, "a");
  EXPECT_EQ(back.seed, 3);
  EXPECT_EQ(serialize_map(back), bytes);

  const auto dir = fixtures::scratch_dir("align-map");
  save_map(map, dir / "m.amap");
  EXPECT_EQ(read_file(dir / "m.amap"), bytes);
  EXPECT_EQ(load_map(dir / "m.amap").w, map.w);
}

TEST(AlignmentMap, CorruptFilesAreFormatErrors) {
  auto [a, b] = fixtures::view_pair({.ids = 8, .per_id = 3, .intrinsic_dim = 6, .dim_a = 10, .dim_b = 10});
  const auto bytes = serialize_map(fit_map(a.to_matrix(), b.to_matrix(), {}));
  EXPECT_THROW(deserialize_map(bytes.substr(0, bytes.size() - 8)), FormatError);
  EXPECT_THROW(deserialize_map("not json\n"), FormatError);
  EXPECT_THROW(deserialize_map("no newline"), FormatError);
}

TEST(AlignmentMap, TransformChecksWidth) {
  auto [a, b] = fixtures::view_pair({.ids = 8, .per_id = 3, .intrinsic_dim = 6, .dim_a = 10, .dim_b = 12});
  const auto map = fit_map(a.to_matrix(), b.to_matrix(), {});
  EXPECT_THROW(transform(b.to_matrix(), map), ConsistencyError);
  EXPECT_EQ(transform(a.to_matrix(), map).cols(), 12);
}
