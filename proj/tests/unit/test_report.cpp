#include <gtest/gtest.h>

#include "embalign/report.hpp"

using namespace embalign;

TEST(RoundSig, NineDigits) {
  EXPECT_DOUBLE_EQ(round_sig(0.1234567891234), 0.123456789);
  EXPECT_DOUBLE_EQ(round_sig(123456789012.0), 123456789000.0);
  EXPECT_DOUBLE_EQ(round_sig(0.0), 0.0);
  EXPECT_DOUBLE_EQ(round_sig(1.0 / 3.0, 3), 0.333);
}

TEST(DumpJson, RoundsNestedFloatsAndNullsNonFinite) {
  Json j = {{"a", 1.0 / 3.0}, {"b", {2.0 / 3.0, 5}}, {"c", std::nan("")}};
  EXPECT_EQ(dump_json(j), "{\n  \"a\": 0.333333333,\n  \"b\": [\n    0.666666667,\n    5\n  ],\n  \"c\": null\n}\n");
}

TEST(Csv, CmcLayout) {
  RetrievalReport r;
  r.cmc = {{0.5, 0.1}, {0.75, 0.0}};
  EXPECT_EQ(cmc_csv(r), "rank,accuracy_mean,accuracy_std\n1,0.5,0.1\n2,0.75,0\n");
}

TEST(Csv, RocLayout) {
  VerificationReport r;
  r.mean_roc = {{0.0001, {0.25, 0.1}}, {1.0, {1.0, 0.0}}};
  EXPECT_EQ(roc_csv(r), "fmr,tmr\n0.0001,0.25\n1,1\n");
}

TEST(Csv, MatrixWithMissingEntries) {
  CompatibilityMatrix cm;
  cm.model_names = {"x", "y"};
  cm.rank1 = {{100.0, std::nullopt}, {12.5, 99.0}};
  EXPECT_EQ(matrix_csv(cm), "model,x,y\nx,100,NA\ny,12.5,99\n");
}

TEST(Json, SplitAndPairs) {
  SplitSpec s;
  s.seed = 3;
  s.train_fraction = 0.5;
  s.train_identities = {"b"};
  s.test_identities = {"a"};
  s.train_rows = {1};
  s.test_rows = {0};
  const auto j = to_json(s);
  EXPECT_EQ(j["train_identities"][0], "b");
  PairList p;
  p.pairs = {{0, 1, true}, {0, 2, false}};
  const auto jp = to_json(p);
  EXPECT_EQ(jp["n_genuine"], 1);
  EXPECT_EQ(jp["pairs"][1][2], false);
}
