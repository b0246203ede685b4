#include <gtest/gtest.h>

#include "embalign/errors.hpp"
#include "embalign/ident_eval.hpp"
#include "embalign/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace embalign;

TEST(ScoreMatrix, CosineValues) {
  Matrix q(2, 2), g(2, 2);
  q << 1, 0, 0, 2;
  g << 3, 0, 1, 1;
  const Matrix s = score_matrix(q, g);
  EXPECT_DOUBLE_EQ(s(0, 0), 1.0);
  EXPECT_NEAR(s(1, 1), std::sqrt(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(s(1, 0), 0.0);
  EXPECT_THROW(score_matrix(Matrix::Zero(1, 2), g), DegenerateRowError);
}

TEST(Ranking, HandExample) {
  Matrix s(2, 3);
  s << 0.9, 0.8, 0.1,
       0.5, 0.5, 0.7;
  const std::vector<std::string> ql{"x", "y"}, gl{"z", "y", "x"};
  EXPECT_DOUBLE_EQ(rank_k_accuracy(s, ql, gl, 1), 0.0);
  // Query 1: order is 2 (x), 0 (z, tie won by lower index), 1 (y).
  EXPECT_DOUBLE_EQ(rank_k_accuracy(s, ql, gl, 2), 0.0);
  EXPECT_DOUBLE_EQ(rank_k_accuracy(s, ql, gl, 3), 1.0);
  EXPECT_DOUBLE_EQ(mean_average_precision(s, ql, gl), (1.0 / 3 + 1.0 / 3) / 2);
  const auto cmc = cmc_curve(s, ql, gl, 3);
  EXPECT_EQ(cmc, (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(Ranking, ArgumentChecks) {
  const Matrix s = Matrix::Ones(1, 2);
  EXPECT_THROW(rank_k_accuracy(s, {"a"}, {"a", "b"}, 0), ArgumentError);
  EXPECT_THROW(rank_k_accuracy(s, {"a"}, {"a", "b"}, 3), ArgumentError);
  EXPECT_THROW(rank_k_accuracy(s, {"a", "b"}, {"a", "b"}, 1), ConsistencyError);
  EXPECT_THROW(mean_average_precision(s, {"c"}, {"a", "b"}), ProtocolError);
  EXPECT_THROW(cmc_curve(s, {"a"}, {"a", "b"}, 3), ArgumentError);
}

TEST(Ranking, MatchesNaiveReferenceWithTies) {
  Rng rng(11, "ident-test");
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t q = 5 + rng.uniform_index(20), g = 5 + rng.uniform_index(30);
    Matrix s(q, g);
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        s(i, j) = static_cast<double>(rng.uniform_index(5)) / 4.0;
    std::vector<std::string> gl(g), ql(q);
    for (auto& l : gl) l = std::to_string(rng.uniform_index(4));
    for (auto& l : ql) l = gl[rng.uniform_index(g)];
    for (std::size_t k : {1u, 3u, 5u}) {
      EXPECT_EQ(rank_k_accuracy(s, ql, gl, k), oracle::rank_k(s, ql, gl, k));
    }
    EXPECT_EQ(mean_average_precision(s, ql, gl), oracle::mean_ap(s, ql, gl));
  }
}

TEST(Retrieval, SelfInclusionAndExclusion) {
  // Four images, two identities; queries equal gallery.
  Matrix e(4, 2);
  e << 1, 0, 0.9, 0.1, 0, 1, 0.1, 0.9;
  const std::vector<std::string> labels{"a", "a", "b", "b"};
  RetrievalOptions opt;
  opt.ks = {1, 5};
  opt.max_rank = 10;
  const auto inc = retrieval_metrics(e, e, labels, labels, opt);
  EXPECT_DOUBLE_EQ(inc.rank_k.at(1), 1.0);
  EXPECT_EQ(inc.cmc.size(), 4u);  // clamped to gallery size
  EXPECT_EQ(inc.rank_k.count(5), 1u);
  opt.exclude_self = true;
  const auto exc = retrieval_metrics(e, e, labels, labels, opt);
  EXPECT_DOUBLE_EQ(exc.rank_k.at(1), 1.0);
  EXPECT_EQ(exc.n_gallery, 3u);
  EXPECT_EQ(exc.n_skipped, 0u);
}

TEST(Retrieval, ExcludeSelfSkipsSingletons) {
  Matrix e(3, 2);
  e << 1, 0, 0.9, 0.1, 0, 1;
  const std::vector<std::string> labels{"a", "a", "b"};
  RetrievalOptions opt;
  opt.exclude_self = true;
  const auto m = retrieval_metrics(e, e, labels, labels, opt);
  EXPECT_EQ(m.n_skipped, 1u);
  EXPECT_EQ(m.n_queries, 2u);
}

TEST(Retrieval, BlockSizeDoesNotChangeResults) {
  auto [a, b] = fixtures::view_pair({.ids = 20, .per_id = 3, .dim_a = 16, .dim_b = 16, .noise = 0.3});
  RetrievalOptions big, tiny;
  tiny.block_rows = 7;
  const auto x = retrieval_metrics(a.to_matrix(), b.to_matrix(), a.labels(), b.labels(), big);
  const auto y = retrieval_metrics(a.to_matrix(), b.to_matrix(), a.labels(), b.labels(), tiny);
  EXPECT_EQ(x.rank_k, y.rank_k);
  EXPECT_EQ(x.map_score, y.map_score);
  EXPECT_EQ(x.cmc, y.cmc);
}

TEST(Identification, SyntheticRecoveryAndShape) {
  auto [a, b] = fixtures::view_pair({.ids = 50, .per_id = 4});
  IdentificationConfig cfg;
  cfg.seeds = {0, 1};
  const auto r = evaluate_identification(a, b, cfg);
  EXPECT_EQ(r.protocol, "intra-dataset");
  EXPECT_EQ(r.aligned.per_seed.size(), 2u);
  EXPECT_GE(r.aligned.rank_k.at(1).mean, 0.99);
  EXPECT_LE(r.baseline.rank_k.at(1).mean, 0.2);
  EXPECT_EQ(r.aligned.cmc.size(), 50u);
  for (std::size_t i = 1; i < r.aligned.cmc.size(); ++i) {
    EXPECT_GE(r.aligned.cmc[i].mean, r.aligned.cmc[i - 1].mean);
  }
}

TEST(Identification, SelfPairBaselineIsPerfect) {
  auto [a, b] = fixtures::view_pair({.ids = 30, .per_id = 3});
  IdentificationConfig cfg;
  cfg.seeds = {0};
  const auto r = evaluate_identification(a, a, cfg);
  EXPECT_DOUBLE_EQ(r.baseline.rank_k.at(1).mean, 1.0);
}

TEST(Identification, JobsDoNotChangeResults) {
  auto [a, b] = fixtures::view_pair({.ids = 30, .per_id = 3, .noise = 0.2});
  IdentificationConfig cfg;
  const auto one = evaluate_identification(a, b, cfg);
  cfg.jobs = 4;
  const auto four = evaluate_identification(a, b, cfg);
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    EXPECT_EQ(one.aligned.per_seed[s].rank_k, four.aligned.per_seed[s].rank_k);
    EXPECT_EQ(one.aligned.per_seed[s].map_score, four.aligned.per_seed[s].map_score);
  }
}

TEST(Identification, UnpairedSetsAreRejected) {
  auto [a, b] = fixtures::view_pair({.ids = 10, .per_id = 2});
  EXPECT_THROW(evaluate_identification(a, b.select({1, 0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19}), {}),
               ConsistencyError);
}

TEST(Identification, CrossDatasetFitsOnceAndReplicatesSeeds) {
  auto [a, b] = fixtures::view_pair({.ids = 40, .per_id = 3});
  IdentificationConfig cfg;
  cfg.seeds = {0, 1, 2};
  const auto r = evaluate_identification_cross(a, b, a, b, cfg);
  EXPECT_EQ(r.protocol, "cross-dataset");
  EXPECT_EQ(r.aligned.per_seed.size(), 3u);
  EXPECT_DOUBLE_EQ(r.aligned.rank_k.at(1).std, 0.0);
}
