#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "digest.hpp"
#include "embalign/align.hpp"
#include "embalign/analysis.hpp"
#include "embalign/embedstore.hpp"
#include "embalign/errors.hpp"
#include "embalign/fileio.hpp"
#include "embalign/ident_eval.hpp"
#include "embalign/splits.hpp"
#include "embalign/synth.hpp"
#include "embalign/verif_eval.hpp"

#ifndef EMBALIGN_VERSION
#define EMBALIGN_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace embalign::cli {

namespace {

EmbeddingSet load_input(const std::string& path, const std::string& dataset) {
  return load_embeddings(path, format_from_path(path), {}, dataset);
}

Json provenance(const std::vector<std::string>& paths) {
  Json hashes = Json::object();
  for (const auto& p : paths) {
    if (p.empty() || hashes.contains(p)) continue;
    hashes[p] = sha256_file(p);
    if (format_from_path(p) == FileFormat::Binary) {
      const auto labels = labels_path_for(p).string();
      if (fs::exists(labels)) hashes[labels] = sha256_file(labels);
    }
  }
  return {{"tool_version", EMBALIGN_VERSION}, {"input_hashes", hashes}};
}

std::vector<std::string> input_paths(const InputArgs& in) {
  return {in.source, in.target, in.eval_source, in.eval_target};
}

bool is_cross(const InputArgs& in) {
  if (in.eval_source.empty() != in.eval_target.empty()) {
    throw ArgumentError("--eval-source and --eval-target must be given together");
  }
  return !in.eval_source.empty();
}

Json input_config(const InputArgs& in) {
  Json j = {{"source", in.source}, {"target", in.target}};
  if (!in.eval_source.empty()) {
    j["eval_source"] = in.eval_source;
    j["eval_target"] = in.eval_target;
  }
  j["dataset"] = in.dataset;
  return j;
}

Json seeds_json(const std::vector<std::uint64_t>& seeds) {
  Json j = Json::array();
  for (auto s : seeds) j.push_back(s);
  return j;
}

Json assemble(const Json& config, const Json& sections, const Json& prov) {
  Json report = Json::object();
  report["config"] = config;
  for (const char* key : {"protocol", "metrics", "per_seed"}) {
    if (sections.contains(key)) report[key] = sections[key];
  }
  report["provenance"] = prov;
  return report;
}

std::string pct(const MetricSummary& s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f +/- %.2f", 100.0 * s.mean, 100.0 * s.std);
  return buf;
}

std::string fixed(double v, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(text);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& field : split_commas(text)) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (field.empty() || used != field.size() || field.front() == '-') {
      throw ArgumentError("invalid seed '" + field + "'");
    }
    seeds.push_back(v);
  }
  if (seeds.empty()) throw ArgumentError("seed list is empty");
  return seeds;
}

std::vector<std::uint64_t> resolve_seeds(const std::vector<std::uint64_t>& from_flag) {
  if (!from_flag.empty()) return from_flag;
  if (const char* env = std::getenv("EMBALIGN_SEEDS"); env != nullptr && *env != '\0') {
    return parse_seed_list(env);
  }
  return {0, 1, 2, 3, 4};
}

void cmd_synth(const SynthArgs& a, std::ostream& out) {
  if (a.views < 1) throw ArgumentError("--views must be >= 1");
  if (a.dims.size() != 1 && a.dims.size() != a.views) {
    throw ArgumentError("--dim takes one value or one per view");
  }
  const auto format = a.format == "csv" ? FileFormat::Csv
                      : a.format == "binary"
                          ? FileFormat::Binary
                          : throw ArgumentError("--format must be binary or csv");
  const auto kind = parse_map_kind(a.map_kind);
  const auto cloud =
      generate_identity_cloud(a.ids, a.per_id, a.intrinsic_dim, a.center_scale, a.spread, a.seed);
  for (std::size_t v = 0; v < a.views; ++v) {
    ViewOptions view;
    view.target_dim = a.dims.size() == 1 ? a.dims[0] : a.dims[v];
    view.view_seed = a.seed * 1000 + v + 1;
    view.noise = a.noise;
    view.map_kind = kind;
    view.model_name = a.prefix + std::to_string(v);
    view.dataset_name = a.dataset;
    const auto set = embed_view(cloud, view);
    const fs::path path =
        fs::path(a.out) / (view.model_name + (format == FileFormat::Csv ? ".csv" : ".emb"));
    save_embeddings(set, path, format);
    out << "wrote " << path.string() << " (" << set.size() << " x " << set.dim() << ")\n";
  }
}

void cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto [src, tgt] =
      intersect_on_images(load_input(a.in.source, a.in.dataset), load_input(a.in.target, a.in.dataset));
  std::vector<std::size_t> rows;
  if (a.all_rows) {
    rows.resize(src.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  } else {
    rows = identity_disjoint_split(src.labels(), a.train_frac, a.seed).train_rows;
  }
  FitOptions options;
  options.method = parse_method(a.method);
  options.alpha = a.alpha;
  options.source_model = src.model_name();
  options.target_model = tgt.model_name();
  options.seed = static_cast<std::int64_t>(a.seed);
  const Matrix x = src.to_matrix(rows);
  const Matrix y = tgt.to_matrix(rows);
  const auto map = fit_map(x, y, options);
  save_map(map, a.out);
  out << "fitted " << to_string(map.method) << " " << src.model_name() << " -> "
      << tgt.model_name() << " on " << rows.size() << " rows, D = " << map.stats.D
      << ", residual " << fixed(training_residual(map, x, y), 6) << "\nwrote " << a.out << "\n";
}

void cmd_eval_id(const EvalIdArgs& a, std::ostream& out) {
  IdentificationConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.alpha = a.alpha;
  cfg.seeds = resolve_seeds(a.seeds);
  cfg.train_fraction = a.train_frac;
  cfg.retrieval.ks = a.ks;
  cfg.retrieval.max_rank = a.max_rank;
  cfg.retrieval.exclude_self = a.exclude_self;
  cfg.jobs = a.jobs;

  const bool cross = is_cross(a.in);
  const auto train = intersect_on_images(load_input(a.in.source, a.in.dataset),
                                         load_input(a.in.target, a.in.dataset));
  IdentificationReport report;
  Json splits = Json::array();
  if (cross) {
    const auto eval = intersect_on_images(load_input(a.in.eval_source, a.in.dataset),
                                          load_input(a.in.eval_target, a.in.dataset));
    report = evaluate_identification_cross(train.first, train.second, eval.first, eval.second, cfg);
  } else {
    report = evaluate_identification(train.first, train.second, cfg);
    if (a.dump_splits) {
      for (auto seed : cfg.seeds) {
        splits.push_back(to_json(identity_disjoint_split(train.first.labels(), cfg.train_fraction, seed)));
      }
    }
  }

  Json config = {{"command", "eval-id"}};
  config.update(input_config(a.in));
  config.update({{"method", a.method},
                 {"alpha", a.alpha},
                 {"train_fraction", a.train_frac},
                 {"seeds", seeds_json(cfg.seeds)},
                 {"ks", a.ks},
                 {"max_rank", a.max_rank},
                 {"exclude_self", a.exclude_self}});
  const fs::path dir(a.out_dir);
  write_file_atomic(dir / "identification.json",
                    dump_json(assemble(config, report_sections(report), provenance(input_paths(a.in)))));
  write_file_atomic(dir / "cmc_aligned.csv", cmc_csv(report.aligned));
  write_file_atomic(dir / "cmc_baseline.csv", cmc_csv(report.baseline));
  if (a.dump_splits) {
    if (cross) {
      out << "note: the cross-dataset protocol has no identity split; nothing dumped\n";
    } else {
      write_file_atomic(dir / "splits.json", dump_json(splits));
    }
  }

  out << report.source_model << " -> " << report.target_model << " (" << report.protocol << ", "
      << to_string(cfg.method) << ", " << cfg.seeds.size() << " seeds)\n";
  for (const auto& [k, s] : report.aligned.rank_k) {
    out << "  rank-" << k << "  aligned " << pct(s) << "  baseline " << pct(report.baseline.rank_k.at(k))
        << "\n";
  }
  out << "  mAP     aligned " << pct(report.aligned.map_score) << "  baseline "
      << pct(report.baseline.map_score) << "\nwrote " << (dir / "identification.json").string() << "\n";
}

void cmd_eval_verif(const EvalVerifArgs& a, std::ostream& out) {
  VerificationConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.alpha = a.alpha;
  cfg.seeds = resolve_seeds(a.seeds);
  cfg.train_fraction = a.train_frac;
  cfg.fmr_targets = a.fmr;
  cfg.symmetric_score = a.symmetric_score;
  cfg.genuine_cap = a.genuine_cap;
  cfg.impostor_cap = a.impostor_cap;
  cfg.jobs = a.jobs;

  const bool cross = is_cross(a.in);
  const auto train = intersect_on_images(load_input(a.in.source, a.in.dataset),
                                         load_input(a.in.target, a.in.dataset));
  VerificationResult result;
  Json splits = Json::array();
  if (cross) {
    const auto eval = intersect_on_images(load_input(a.in.eval_source, a.in.dataset),
                                          load_input(a.in.eval_target, a.in.dataset));
    result = evaluate_verification_cross(train.first, train.second, eval.first, eval.second, cfg);
  } else {
    result = evaluate_verification(train.first, train.second, cfg);
    if (a.dump_splits) {
      for (auto seed : cfg.seeds) {
        splits.push_back(to_json(identity_disjoint_split(train.first.labels(), cfg.train_fraction, seed)));
      }
    }
  }

  Json config = {{"command", "eval-verif"}};
  config.update(input_config(a.in));
  config.update({{"method", a.method},
                 {"alpha", a.alpha},
                 {"train_fraction", a.train_frac},
                 {"seeds", seeds_json(cfg.seeds)},
                 {"fmr_targets", a.fmr},
                 {"symmetric_score", a.symmetric_score},
                 {"genuine_cap", a.genuine_cap},
                 {"impostor_cap", a.impostor_cap}});
  const fs::path dir(a.out_dir);
  write_file_atomic(dir / "verification.json",
                    dump_json(assemble(config, report_sections(result), provenance(input_paths(a.in)))));
  write_file_atomic(dir / "roc_aligned.csv", roc_csv(result.aligned));
  write_file_atomic(dir / "roc_baseline.csv", roc_csv(result.baseline));
  if (a.dump_splits) {
    if (cross) {
      out << "note: the cross-dataset protocol has no identity split; nothing dumped\n";
    } else {
      write_file_atomic(dir / "splits.json", dump_json(splits));
    }
  }

  out << result.source_model << " -> " << result.target_model << " (" << result.protocol << ", "
      << to_string(cfg.method) << ", " << cfg.seeds.size() << " seeds)\n"
      << "  AUC  aligned " << fixed(result.aligned.auc.mean) << "  baseline "
      << fixed(result.baseline.auc.mean) << "\n"
      << "  EER  aligned " << fixed(result.aligned.eer.mean) << "  baseline "
      << fixed(result.baseline.eer.mean) << "\n";
  for (const auto& [target, s] : result.aligned.tmr_at_fmr) {
    out << "  TMR@FMR=" << target << "  aligned " << pct(s) << "  baseline "
        << pct(result.baseline.tmr_at_fmr.at(target)) << "\n";
  }
  out << "wrote " << (dir / "verification.json").string() << "\n";
}

void cmd_matrix(const MatrixArgs& a, std::ostream& out) {
  if (a.inputs.empty()) throw ArgumentError("matrix needs at least one input");
  std::vector<EmbeddingSet> sets;
  for (const auto& p : a.inputs) sets.push_back(load_input(p, a.dataset));
  IdentificationConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.alpha = a.alpha;
  cfg.seeds = resolve_seeds(a.seeds);
  cfg.train_fraction = a.train_frac;
  cfg.retrieval.ks = {1};
  cfg.retrieval.exclude_self = a.exclude_self;
  cfg.jobs = a.jobs;
  const auto cm = build_compatibility_matrix(sets, cfg);

  Json config = {{"command", "matrix"},
                 {"inputs", a.inputs},
                 {"dataset", a.dataset},
                 {"method", a.method},
                 {"alpha", a.alpha},
                 {"train_fraction", a.train_frac},
                 {"seeds", seeds_json(cfg.seeds)},
                 {"exclude_self", a.exclude_self}};
  Json metrics = {{"compatibility", to_json(cm)}};
  const fs::path dir(a.out_dir);
  const bool complete = cm.failures.empty();
  if (complete && cm.size() >= 2) {
    const Matrix sym = symmetrize(cm);
    write_file_atomic(dir / "symmetric.csv", matrix_csv(sym, cm.model_names));
    metrics["asymmetry"] = to_json(asymmetry_stats(cm));
  }
  Json sections = {{"protocol", {{"name", "intra-dataset"}, {"task", "compatibility"}}},
                   {"metrics", metrics}};
  write_file_atomic(dir / "matrix.json", dump_json(assemble(config, sections, provenance(a.inputs))));
  write_file_atomic(dir / "matrix.csv", matrix_csv(cm));

  out << "compatibility matrix over " << cm.size() << " models (Rank-1 %)\n" << matrix_csv(cm);
  for (const auto& f : cm.failures) out << "missing: " << f << "\n";
  out << "wrote " << (dir / "matrix.csv").string() << "\n";
}

CompatibilityMatrix read_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("matrix CSV is empty");
  auto header = split_commas(line);
  if (header.size() < 2 || header.front() != "model") {
    throw FormatError("matrix CSV header must start with 'model'");
  }
  CompatibilityMatrix cm;
  cm.model_names.assign(header.begin() + 1, header.end());
  const std::size_t m = cm.model_names.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_commas(line);
    if (fields.size() != m + 1) throw FormatError("matrix CSV row has the wrong number of fields");
    if (cm.rank1.size() >= m || fields.front() != cm.model_names[cm.rank1.size()]) {
      throw FormatError("matrix CSV rows must follow the header's model order");
    }
    std::vector<std::optional<double>> row;
    for (std::size_t i = 1; i <= m; ++i) {
      if (fields[i] == "NA") {
        row.emplace_back();
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(fields[i].c_str(), &end);
      if (fields[i].empty() || end != fields[i].c_str() + fields[i].size()) {
        throw FormatError("matrix CSV value '" + fields[i] + "' is not a number");
      }
      row.emplace_back(v);
    }
    cm.rank1.push_back(std::move(row));
  }
  if (cm.rank1.size() != m) throw FormatError("matrix CSV is not square");
  return cm;
}

void cmd_cluster(const ClusterArgs& a, std::ostream& out) {
  const auto cm = read_matrix_csv(read_file(a.matrix));
  const auto linkage = parse_linkage(a.linkage);
  const auto dendrogram = agglomerative_cluster(symmetrize(cm), linkage);
  Json config = {{"command", "cluster"}, {"matrix", a.matrix}, {"linkage", a.linkage}};
  Json sections = {{"protocol", {{"task", "clustering"}, {"distance", "100 - symmetrized rank-1"}}},
                   {"metrics", {{"dendrogram", to_json(dendrogram, cm.model_names, linkage)}}}};
  const fs::path dir(a.out_dir);
  const auto newick = to_newick(dendrogram, cm.model_names);
  write_file_atomic(dir / "dendrogram.json",
                    dump_json(assemble(config, sections, provenance({a.matrix}))));
  write_file_atomic(dir / "dendrogram.nwk", newick + "\n");
  out << newick << "\nwrote " << (dir / "dendrogram.json").string() << "\n";
}

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const auto [src, tgt] =
      intersect_on_images(load_input(a.in.source, a.in.dataset), load_input(a.in.target, a.in.dataset));
  SweepConfig cfg;
  cfg.fractions = a.fractions;
  cfg.methods.clear();
  for (const auto& m : a.methods) cfg.methods.push_back(parse_method(m));
  cfg.alpha = a.alpha;
  cfg.seeds = resolve_seeds(a.seeds);
  cfg.train_fraction = a.train_frac;
  cfg.retrieval.exclude_self = a.exclude_self;
  cfg.jobs = a.jobs;
  const auto table = training_size_sweep(src, tgt, cfg);

  Json config = {{"command", "sweep"}};
  config.update(input_config(a.in));
  config.update({{"fractions", a.fractions},
                 {"methods", a.methods},
                 {"alpha", a.alpha},
                 {"train_fraction", a.train_frac},
                 {"seeds", seeds_json(cfg.seeds)},
                 {"exclude_self", a.exclude_self}});
  Json sections = {{"protocol", {{"name", "intra-dataset"}, {"task", "training-size sweep"}}},
                   {"metrics", to_json(table)}};
  const fs::path dir(a.out_dir);
  write_file_atomic(dir / "sweep.json", dump_json(assemble(config, sections, provenance(input_paths(a.in)))));
  write_file_atomic(dir / "sweep.csv", sweep_csv(table));
  out << sweep_csv(table) << "wrote " << (dir / "sweep.csv").string() << "\n";
}

}  // namespace embalign::cli
