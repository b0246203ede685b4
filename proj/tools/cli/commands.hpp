#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "embalign/report.hpp"

namespace embalign::cli {

struct SynthArgs {
  std::size_t ids = 100;
  std::size_t per_id = 10;
  std::size_t intrinsic_dim = 16;
  std::vector<std::size_t> dims{64};  // one value for all views, or one per view
  std::size_t views = 2;
  double noise = 0.0;
  double spread = 0.3;
  double center_scale = 1.0;
  std::uint64_t seed = 0;
  std::string map_kind = "orthogonal";
  std::string format = "binary";
  std::string prefix = "view";
  std::string dataset = "synth";
  std::string out;
};

struct InputArgs {
  std::string source;
  std::string target;
  std::string eval_source;  // both set: cross-dataset protocol
  std::string eval_target;
  std::string dataset;
};

struct FitArgs {
  InputArgs in;
  std::string method = "procrustes";
  double alpha = kDefaultRidgeAlpha;
  double train_frac = 0.7;
  std::uint64_t seed = 0;
  bool all_rows = false;
  std::string out;
};

struct EvalIdArgs {
  InputArgs in;
  std::string method = "procrustes";
  double alpha = kDefaultRidgeAlpha;
  double train_frac = 0.7;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> ks{1, 5, 10};
  std::size_t max_rank = 50;
  bool exclude_self = false;
  bool dump_splits = false;
  std::size_t jobs = 1;
  std::string out_dir;
};

struct EvalVerifArgs {
  InputArgs in;
  std::string method = "procrustes";
  double alpha = kDefaultRidgeAlpha;
  double train_frac = 0.7;
  std::vector<std::uint64_t> seeds;
  std::vector<double> fmr{0.01, 0.001};
  bool symmetric_score = false;
  std::size_t genuine_cap = 10000;
  std::size_t impostor_cap = 10000;
  bool dump_splits = false;
  std::size_t jobs = 1;
  std::string out_dir;
};

struct MatrixArgs {
  std::vector<std::string> inputs;
  std::string dataset;
  std::string method = "procrustes";
  double alpha = kDefaultRidgeAlpha;
  double train_frac = 0.7;
  std::vector<std::uint64_t> seeds;
  bool exclude_self = false;
  std::size_t jobs = 1;
  std::string out_dir;
};

struct ClusterArgs {
  std::string matrix;  // directed matrix CSV as written by `matrix`
  std::string linkage = "average";
  std::string out_dir;
};

struct SweepArgs {
  InputArgs in;
  std::vector<double> fractions{0.1, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::string> methods{"procrustes", "linear", "ridge"};
  double alpha = kDefaultRidgeAlpha;
  double train_frac = 0.7;
  std::vector<std::uint64_t> seeds;
  bool exclude_self = false;
  std::size_t jobs = 1;
  std::string out_dir;
};

/// Seeds from the flag, else from EMBALIGN_SEEDS, else 0..4.
std::vector<std::uint64_t> resolve_seeds(const std::vector<std::uint64_t>& from_flag);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

void cmd_synth(const SynthArgs& a, std::ostream& out);
void cmd_fit(const FitArgs& a, std::ostream& out);
void cmd_eval_id(const EvalIdArgs& a, std::ostream& out);
void cmd_eval_verif(const EvalVerifArgs& a, std::ostream& out);
void cmd_matrix(const MatrixArgs& a, std::ostream& out);
void cmd_cluster(const ClusterArgs& a, std::ostream& out);
void cmd_sweep(const SweepArgs& a, std::ostream& out);

/// Reads a directed matrix CSV (header row of model names, NA for missing).
CompatibilityMatrix read_matrix_csv(const std::string& text);

}  // namespace embalign::cli
