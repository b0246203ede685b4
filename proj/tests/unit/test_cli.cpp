#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "commands.hpp"
#include "embalign/align.hpp"
#include "embalign/embedstore.hpp"
#include "embalign/errors.hpp"
#include "embalign/fileio.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = embalign::cli::run(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

std::size_t count_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.is_regular_file() ? 1 : 0;
  return n;
}

}  // namespace

TEST(CliSynth, WritesOneFilePairPerView) {
  const auto dir = fixtures::scratch_dir("cli-synth");
  ASSERT_EQ(run({"synth", "--ids", "100", "--per-id", "10", "--dim", "64", "--views", "2", "--noise",
                 "0", "--seed", "7", "--out", (dir / "two").string()}),
            0);
  EXPECT_EQ(count_files(dir / "two"), 4u);  // two matrices, two label files
  ASSERT_EQ(run({"synth", "--ids", "10", "--views", "1", "--out", (dir / "one").string()}), 0);
  EXPECT_EQ(count_files(dir / "one"), 2u);
  ASSERT_EQ(run({"synth", "--ids", "10", "--views", "1", "--format", "csv", "--out", (dir / "csv").string()}), 0);
  EXPECT_EQ(count_files(dir / "csv"), 1u);
}

TEST(CliSynth, MissingOutIsUsageError) {
  EXPECT_EQ(run({"synth", "--ids", "10"}), embalign::cli::kUsage);
  EXPECT_EQ(run({}), embalign::cli::kUsage);
  EXPECT_EQ(run({"bogus"}), embalign::cli::kUsage);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST(CliFit, WritesLoadableMaps) {
  const auto dir = fixtures::scratch_dir("cli-fit");
  ASSERT_EQ(run({"synth", "--ids", "20", "--per-id", "5", "--dim", "32", "--out", dir.string()}), 0);
  const auto a = (dir / "view0.emb").string(), b = (dir / "view1.emb").string();
  ASSERT_EQ(run({"fit", "--source", a, "--target", b, "--method", "procrustes", "--train-frac", "0.7",
                 "--seed", "0", "--out", (dir / "p.amap").string()}),
            0);
  const auto map = embalign::load_map(dir / "p.amap");
  EXPECT_EQ(map.method, embalign::Method::Procrustes);
  EXPECT_EQ(map.stats.n_train, 70u);
  EXPECT_EQ(map.source_model, "view0");

  ASSERT_EQ(run({"fit", "--source", a, "--target", b, "--method", "ridge", "--out", (dir / "r.amap").string()}), 0);
  EXPECT_DOUBLE_EQ(embalign::load_map(dir / "r.amap").alpha, 0.1);

  // n = 50 training rows against D = 64 still fits through the pseudo-inverse.
  const auto small = dir / "small";
  ASSERT_EQ(run({"synth", "--ids", "10", "--per-id", "5", "--dim", "64", "--out", small.string()}), 0);
  ASSERT_EQ(run({"fit", "--source", (small / "view0.emb").string(), "--target",
                 (small / "view1.emb").string(), "--method", "linear", "--all-rows", "--out",
                 (dir / "l.amap").string()}),
            0);
  EXPECT_EQ(embalign::load_map(dir / "l.amap").stats.n_train, 50u);
  EXPECT_NE(run({"fit", "--source", a, "--target", b, "--method", "cca", "--out", "x"}), 0);
}

TEST(CliEval, IdentificationOutputsAndDeterminism) {
  const auto dir = fixtures::scratch_dir("cli-eval-id");
  ASSERT_EQ(run({"synth", "--ids", "30", "--per-id", "4", "--dim", "32", "--out", dir.string()}), 0);
  const auto a = (dir / "view0.emb").string(), b = (dir / "view1.emb").string();
  ASSERT_EQ(run({"eval-id", "--source", a, "--target", b, "--seeds", "0,1", "--dump-splits", "--out-dir",
                 (dir / "r1").string()}),
            0);
  ASSERT_EQ(run({"eval-id", "--source", a, "--target", b, "--seeds", "0,1", "--dump-splits", "--jobs", "3",
                 "--out-dir", (dir / "r2").string()}),
            0);
  for (const char* f : {"identification.json", "cmc_aligned.csv", "cmc_baseline.csv", "splits.json"}) {
    EXPECT_EQ(embalign::read_file(dir / "r1" / f), embalign::read_file(dir / "r2" / f)) << f;
  }
  const auto report = embalign::Json::parse(embalign::read_file(dir / "r1" / "identification.json"));
  for (const char* key : {"config", "protocol", "metrics", "per_seed", "provenance"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_EQ(report["per_seed"].size(), 2u);
  EXPECT_EQ(report["provenance"]["input_hashes"].size(), 4u);
  EXPECT_EQ(report["provenance"]["input_hashes"][a].get<std::string>().size(), 64u);
  const auto splits = embalign::Json::parse(embalign::read_file(dir / "r1" / "splits.json"));
  EXPECT_EQ(splits.size(), 2u);
}

TEST(CliEval, SeedsFromEnvironment) {
  const auto dir = fixtures::scratch_dir("cli-env");
  ASSERT_EQ(run({"synth", "--ids", "20", "--per-id", "3", "--dim", "16", "--out", dir.string()}), 0);
  ::setenv("EMBALIGN_SEEDS", "4,9,2", 1);
  const int rc = run({"eval-id", "--source", (dir / "view0.emb").string(), "--target",
                      (dir / "view1.emb").string(), "--out-dir", (dir / "r").string()});
  ::unsetenv("EMBALIGN_SEEDS");
  ASSERT_EQ(rc, 0);
  const auto report = embalign::Json::parse(embalign::read_file(dir / "r" / "identification.json"));
  EXPECT_EQ(report["config"]["seeds"], embalign::Json::parse("[4,9,2]"));
  EXPECT_EQ(embalign::cli::resolve_seeds({}), (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_THROW(embalign::cli::parse_seed_list("1,x"), embalign::ArgumentError);
}

TEST(CliEval, VerificationOutputsIntraAndCross) {
  const auto dir = fixtures::scratch_dir("cli-eval-verif");
  ASSERT_EQ(run({"synth", "--ids", "30", "--per-id", "4", "--dim", "32", "--out", dir.string()}), 0);
  const auto a = (dir / "view0.emb").string(), b = (dir / "view1.emb").string();
  ASSERT_EQ(run({"eval-verif", "--source", a, "--target", b, "--seeds", "0,1,2", "--out-dir",
                 (dir / "intra").string()}),
            0);
  const auto report = embalign::Json::parse(embalign::read_file(dir / "intra" / "verification.json"));
  EXPECT_TRUE(report["metrics"]["aligned"]["tmr_at_fmr"].contains("0.01"));
  EXPECT_TRUE(report["metrics"]["aligned"]["tmr_at_fmr"].contains("0.001"));
  const auto roc = embalign::read_file(dir / "intra" / "roc_aligned.csv");
  EXPECT_EQ(roc.substr(0, 8), "fmr,tmr\n");
  EXPECT_EQ(std::count(roc.begin(), roc.end(), '\n'), 51);

  ASSERT_EQ(run({"eval-verif", "--source", a, "--target", b, "--eval-source", a, "--eval-target", b,
                 "--genuine-cap", "50", "--impostor-cap", "60", "--symmetric-score", "--out-dir",
                 (dir / "cross").string()}),
            0);
  const auto cross = embalign::Json::parse(embalign::read_file(dir / "cross" / "verification.json"));
  EXPECT_EQ(cross["protocol"]["name"], "cross-dataset");
  EXPECT_EQ(cross["protocol"]["scoring"], "symmetric");
  EXPECT_EQ(cross["per_seed"][0]["aligned"]["n_genuine"], 50);
  EXPECT_EQ(cross["per_seed"][0]["aligned"]["n_impostor"], 60);
  EXPECT_EQ(run({"eval-verif", "--source", a, "--target", b, "--eval-source", a, "--out-dir",
                 (dir / "bad").string()}),
            embalign::cli::kUsage);
}

TEST(CliAnalysis, MatrixClusterSweep) {
  const auto dir = fixtures::scratch_dir("cli-analysis");
  ASSERT_EQ(run({"synth", "--ids", "20", "--per-id", "4", "--dim", "16,24,16", "--views", "3", "--out",
                 dir.string()}),
            0);
  ASSERT_EQ(run({"matrix", (dir / "view0.emb").string(), (dir / "view1.emb").string(),
                 (dir / "view2.emb").string(), "--seeds", "0,1", "--out-dir", (dir / "m").string()}),
            0);
  const auto csv = embalign::read_file(dir / "m" / "matrix.csv");
  EXPECT_EQ(csv.substr(0, 24), "model,view0,view1,view2\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_TRUE(fs::exists(dir / "m" / "symmetric.csv"));
  const auto cm = embalign::cli::read_matrix_csv(csv);
  EXPECT_EQ(cm.size(), 3u);

  ASSERT_EQ(run({"cluster", "--matrix", (dir / "m" / "matrix.csv").string(), "--linkage", "complete",
                 "--out-dir", (dir / "c").string()}),
            0);
  const auto dendro = embalign::Json::parse(embalign::read_file(dir / "c" / "dendrogram.json"));
  EXPECT_EQ(dendro["metrics"]["dendrogram"]["merges"].size(), 2u);
  EXPECT_EQ(embalign::read_file(dir / "c" / "dendrogram.nwk").back(), '\n');

  ASSERT_EQ(run({"sweep", "--source", (dir / "view0.emb").string(), "--target", (dir / "view1.emb").string(),
                 "--fractions", "0.25,1", "--methods", "procrustes,linear", "--seeds", "0,1", "--out-dir",
                 (dir / "s").string()}),
            0);
  const auto sweep = embalign::read_file(dir / "s" / "sweep.csv");
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 5);
}

TEST(CliAnalysis, MatrixCsvParsing) {
  EXPECT_THROW(embalign::cli::read_matrix_csv("a,b\n"), embalign::FormatError);
  EXPECT_THROW(embalign::cli::read_matrix_csv("model,a,b\na,1,2\n"), embalign::FormatError);
  EXPECT_THROW(embalign::cli::read_matrix_csv("model,a\na,zz\n"), embalign::FormatError);
  const auto cm = embalign::cli::read_matrix_csv("model,a,b\na,100,NA\nb,3.5,99\n");
  EXPECT_FALSE(cm.rank1[0][1].has_value());
  EXPECT_DOUBLE_EQ(*cm.rank1[1][0], 3.5);
}
