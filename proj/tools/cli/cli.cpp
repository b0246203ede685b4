#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ostream>

#include "commands.hpp"
#include "embalign/errors.hpp"

#ifndef EMBALIGN_VERSION
#define EMBALIGN_VERSION "unknown"
#endif

namespace embalign::cli {

namespace {

void add_inputs(CLI::App* cmd, InputArgs& in, bool allow_cross) {
  cmd->add_option("--source", in.source, "Source model embeddings (.emb or .csv)")->required();
  cmd->add_option("--target", in.target, "Target model embeddings")->required();
  if (allow_cross) {
    cmd->add_option("--eval-source", in.eval_source,
                    "Evaluation-set source embeddings (cross-dataset protocol)");
    cmd->add_option("--eval-target", in.eval_target, "Evaluation-set target embeddings");
  }
  cmd->add_option("--dataset", in.dataset, "Dataset name recorded in reports");
}

void add_method(CLI::App* cmd, std::string& method, double& alpha) {
  cmd->add_option("--method", method, "procrustes, linear or ridge")
      ->check(CLI::IsMember({"procrustes", "linear", "ridge"}))
      ->capture_default_str();
  cmd->add_option("--alpha", alpha, "Ridge damping")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_seeds(CLI::App* cmd, std::vector<std::uint64_t>& seeds) {
  cmd->add_option("--seeds", seeds, "Comma-separated split seeds (default: $EMBALIGN_SEEDS or 0-4)")
      ->delimiter(',');
}

void add_jobs(CLI::App* cmd, std::size_t& jobs) {
  cmd->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear alignment of face-embedding spaces and cross-model evaluation", "embalign"};
  app.set_version_flag("--version", EMBALIGN_VERSION);
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate synthetic multi-view embeddings");
  c_synth->add_option("--ids", synth.ids, "Identities")->capture_default_str();
  c_synth->add_option("--per-id", synth.per_id, "Images per identity")->capture_default_str();
  c_synth->add_option("--intrinsic-dim", synth.intrinsic_dim, "Dimension of the identity cloud")
      ->capture_default_str();
  c_synth->add_option("--dim", synth.dims, "Embedding dimension, one value or one per view")
      ->delimiter(',')
      ->capture_default_str();
  c_synth->add_option("--views", synth.views, "Number of views (models)")->capture_default_str();
  c_synth->add_option("--noise", synth.noise, "Gaussian noise added before normalization")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_synth->add_option("--spread", synth.spread, "Within-identity standard deviation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_synth->add_option("--center-scale", synth.center_scale, "Scale of identity centers")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_synth->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  c_synth->add_option("--map-kind", synth.map_kind, "orthogonal or general_linear")
      ->check(CLI::IsMember({"orthogonal", "general_linear"}))
      ->capture_default_str();
  c_synth->add_option("--format", synth.format, "binary or csv")
      ->check(CLI::IsMember({"binary", "csv"}))
      ->capture_default_str();
  c_synth->add_option("--prefix", synth.prefix, "File and model name prefix")->capture_default_str();
  c_synth->add_option("--dataset", synth.dataset, "Dataset name")->capture_default_str();
  c_synth->add_option("--out", synth.out, "Output directory")->required();

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit an alignment map and write it to disk");
  add_inputs(c_fit, fit.in, false);
  add_method(c_fit, fit.method, fit.alpha);
  c_fit->add_option("--train-frac", fit.train_frac, "Fraction of identities used for training")
      ->capture_default_str();
  c_fit->add_option("--seed", fit.seed, "Split seed")->capture_default_str();
  c_fit->add_flag("--all-rows", fit.all_rows, "Fit on every shared image instead of a split");
  c_fit->add_option("--out", fit.out, "Output map file")->required();

  EvalIdArgs id;
  auto* c_id = app.add_subcommand("eval-id", "Cross-model identification (Rank-k, mAP, CMC)");
  add_inputs(c_id, id.in, true);
  add_method(c_id, id.method, id.alpha);
  c_id->add_option("--train-frac", id.train_frac, "Fraction of identities used for training")
      ->capture_default_str();
  add_seeds(c_id, id.seeds);
  c_id->add_option("--ks", id.ks, "Rank cutoffs")->delimiter(',')->capture_default_str();
  c_id->add_option("--max-rank", id.max_rank, "Last CMC rank")->capture_default_str();
  c_id->add_flag("--exclude-self", id.exclude_self, "Drop each query's own image from its gallery");
  c_id->add_flag("--dump-splits", id.dump_splits, "Also write the identity splits");
  add_jobs(c_id, id.jobs);
  c_id->add_option("--out-dir", id.out_dir, "Directory for the report and CMC CSVs")->required();

  EvalVerifArgs vf;
  auto* c_vf = app.add_subcommand("eval-verif", "Cross-model verification (ROC, AUC, EER, TMR@FMR)");
  add_inputs(c_vf, vf.in, true);
  add_method(c_vf, vf.method, vf.alpha);
  c_vf->add_option("--train-frac", vf.train_frac, "Fraction of identities used for training")
      ->capture_default_str();
  add_seeds(c_vf, vf.seeds);
  c_vf->add_option("--fmr", vf.fmr, "FMR targets")->delimiter(',')->capture_default_str();
  c_vf->add_flag("--symmetric-score", vf.symmetric_score,
                 "Score pairs by the mean of both alignment directions");
  c_vf->add_option("--genuine-cap", vf.genuine_cap, "Cross-dataset genuine pairs per seed")
      ->capture_default_str();
  c_vf->add_option("--impostor-cap", vf.impostor_cap, "Cross-dataset impostor pairs per seed")
      ->capture_default_str();
  c_vf->add_flag("--dump-splits", vf.dump_splits, "Also write the identity splits");
  add_jobs(c_vf, vf.jobs);
  c_vf->add_option("--out-dir", vf.out_dir, "Directory for the report and ROC CSVs")->required();

  MatrixArgs mx;
  auto* c_mx = app.add_subcommand("matrix", "Directed cross-model Rank-1 compatibility matrix");
  c_mx->add_option("inputs", mx.inputs, "Embedding files, one per model")->required();
  c_mx->add_option("--dataset", mx.dataset, "Dataset name recorded in reports");
  add_method(c_mx, mx.method, mx.alpha);
  c_mx->add_option("--train-frac", mx.train_frac, "Fraction of identities used for training")
      ->capture_default_str();
  add_seeds(c_mx, mx.seeds);
  c_mx->add_flag("--exclude-self", mx.exclude_self, "Drop each query's own image from its gallery");
  add_jobs(c_mx, mx.jobs);
  c_mx->add_option("--out-dir", mx.out_dir, "Output directory")->required();

  ClusterArgs cl;
  auto* c_cl = app.add_subcommand("cluster", "Hierarchical clustering of a compatibility matrix");
  c_cl->add_option("--matrix", cl.matrix, "matrix.csv written by `embalign matrix`")->required();
  c_cl->add_option("--linkage", cl.linkage, "average, single or complete")
      ->check(CLI::IsMember({"average", "single", "complete"}))
      ->capture_default_str();
  c_cl->add_option("--out-dir", cl.out_dir, "Output directory")->required();

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Rank-1 versus amount of training data");
  add_inputs(c_sw, sw.in, false);
  c_sw->add_option("--fractions", sw.fractions, "Fractions of the training identities")
      ->delimiter(',')
      ->capture_default_str();
  c_sw->add_option("--methods", sw.methods, "Methods to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"procrustes", "linear", "ridge"}))
      ->capture_default_str();
  c_sw->add_option("--alpha", sw.alpha, "Ridge damping")->check(CLI::PositiveNumber)->capture_default_str();
  c_sw->add_option("--train-frac", sw.train_frac, "Fraction of identities in the full training pool")
      ->capture_default_str();
  add_seeds(c_sw, sw.seeds);
  c_sw->add_flag("--exclude-self", sw.exclude_self, "Drop each query's own image from its gallery");
  add_jobs(c_sw, sw.jobs);
  c_sw->add_option("--out-dir", sw.out_dir, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (c_synth->parsed()) cmd_synth(synth, out);
    else if (c_fit->parsed()) cmd_fit(fit, out);
    else if (c_id->parsed()) cmd_eval_id(id, out);
    else if (c_vf->parsed()) cmd_eval_verif(vf, out);
    else if (c_mx->parsed()) cmd_matrix(mx, out);
    else if (c_cl->parsed()) cmd_cluster(cl, out);
    else if (c_sw->parsed()) cmd_sweep(sw, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace embalign::cli
