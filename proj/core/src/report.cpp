#include "embalign/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace embalign {

double round_sig(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

Json rounded(const Json& j) {
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) return nullptr;
      return round_sig(v);
    }
    case Json::value_t::array: {
      Json out = Json::array();
      for (const auto& item : j) out.push_back(rounded(item));
      return out;
    }
    case Json::value_t::object: {
      Json out = Json::object();
      for (const auto& [key, item] : j.items()) out[key] = rounded(item);
      return out;
    }
    default:
      return j;
  }
}

std::string dump_json(const Json& j) { return rounded(j).dump(2) + "\n"; }

Json to_json(const MetricSummary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

namespace {

std::string rank_key(std::size_t k) { return "rank_" + std::to_string(k); }

std::string fmr_key(double target) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", target);
  return buf;
}

Json summary_json(const RetrievalReport& r) {
  Json j = Json::object();
  for (const auto& [k, s] : r.rank_k) j[rank_key(k)] = to_json(s);
  j["map"] = to_json(r.map_score);
  return j;
}

Json summary_json(const VerificationReport& r) {
  Json j = Json::object();
  j["auc"] = to_json(r.auc);
  j["eer"] = to_json(r.eer);
  Json tmr = Json::object();
  for (const auto& [target, s] : r.tmr_at_fmr) tmr[fmr_key(target)] = to_json(s);
  j["tmr_at_fmr"] = tmr;
  return j;
}

Json seeds_json(const std::vector<std::uint64_t>& seeds) {
  Json j = Json::array();
  for (auto s : seeds) j.push_back(s);
  return j;
}

}  // namespace

Json to_json(const RetrievalMetrics& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m.rank_k) j[rank_key(k)] = v;
  j["map"] = m.map_score;
  j["n_queries"] = m.n_queries;
  j["n_gallery"] = m.n_gallery;
  j["n_skipped"] = m.n_skipped;
  return j;
}

Json to_json(const VerificationMetrics& m) {
  Json tmr = Json::object();
  for (const auto& [target, v] : m.tmr_at_fmr) tmr[fmr_key(target)] = v;
  return {{"auc", m.auc},
          {"eer", m.eer},
          {"tmr_at_fmr", tmr},
          {"n_genuine", m.n_genuine},
          {"n_impostor", m.n_impostor},
          {"n_roc_points", m.roc.size()}};
}

Json to_json(const SplitSpec& split) {
  return {{"seed", split.seed},
          {"train_fraction", split.train_fraction},
          {"train_identities", split.train_identities},
          {"test_identities", split.test_identities},
          {"train_rows", split.train_rows},
          {"test_rows", split.test_rows}};
}

Json to_json(const PairList& pairs) {
  Json list = Json::array();
  for (const auto& p : pairs.pairs) list.push_back(Json::array({p.first, p.second, p.genuine}));
  return {{"seed", pairs.seed},
          {"n_genuine", pairs.genuine_count()},
          {"n_impostor", pairs.impostor_count()},
          {"pairs", list}};
}

Json to_json(const Dendrogram& d, const std::vector<std::string>& names, Linkage linkage) {
  Json merges = Json::array();
  for (const auto& m : d.merges) {
    merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  }
  return {{"linkage", to_string(linkage)},
          {"leaves", names},
          {"merges", merges},
          {"leaf_order", d.leaf_order},
          {"newick", to_newick(d, names)}};
}

Json to_json(const AsymmetryReport& r) {
  Json models = Json::array();
  for (std::size_t i = 0; i < r.model_names.size(); ++i) {
    models.push_back(
        {{"model", r.model_names[i]}, {"incoming", r.incoming[i]}, {"outgoing", r.outgoing[i]}});
  }
  return {{"models", models},
          {"mean_deviation", r.mean_deviation},
          {"max_deviation", r.max_deviation}};
}

Json to_json(const SweepTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"method", std::string(to_string(row.method))},
                    {"fraction", row.fraction},
                    {"rank_1", to_json(row.rank1_summary)},
                    {"per_seed_rank_1", row.rank1},
                    {"per_seed_n_train", row.n_train}});
  }
  return {{"seeds", seeds_json(t.seeds)}, {"rows", rows}};
}

Json to_json(const CompatibilityMatrix& cm) {
  Json rows = Json::array();
  for (const auto& r : cm.rank1) {
    Json row = Json::array();
    for (const auto& v : r) row.push_back(v ? Json(*v) : Json(nullptr));
    rows.push_back(row);
  }
  return {{"dataset", cm.dataset_name},
          {"method", cm.method},
          {"models", cm.model_names},
          {"rank_1", rows},
          {"failures", cm.failures}};
}

Json report_sections(const IdentificationReport& r) {
  const auto& c = r.config;
  Json protocol = {{"name", r.protocol},
                   {"task", "identification"},
                   {"source_model", r.source_model},
                   {"target_model", r.target_model},
                   {"method", std::string(to_string(c.method))},
                   {"alpha", c.method == Method::Ridge ? c.alpha : 0.0},
                   {"seeds", seeds_json(c.seeds)},
                   {"train_fraction", c.train_fraction},
                   {"ks", c.retrieval.ks},
                   {"max_rank", c.retrieval.max_rank},
                   {"exclude_self", c.retrieval.exclude_self}};
  Json per_seed = Json::array();
  for (std::size_t i = 0; i < r.aligned.per_seed.size(); ++i) {
    per_seed.push_back({{"seed", r.aligned.seeds[i]},
                        {"aligned", to_json(r.aligned.per_seed[i])},
                        {"baseline", to_json(r.baseline.per_seed[i])}});
  }
  return {{"protocol", protocol},
          {"metrics", {{"aligned", summary_json(r.aligned)}, {"baseline", summary_json(r.baseline)}}},
          {"per_seed", per_seed}};
}

Json report_sections(const VerificationResult& r) {
  const auto& c = r.config;
  Json protocol = {{"name", r.protocol},
                   {"task", "verification"},
                   {"source_model", r.source_model},
                   {"target_model", r.target_model},
                   {"method", std::string(to_string(c.method))},
                   {"alpha", c.method == Method::Ridge ? c.alpha : 0.0},
                   {"seeds", seeds_json(c.seeds)},
                   {"train_fraction", c.train_fraction},
                   {"fmr_targets", c.fmr_targets},
                   {"scoring", c.symmetric_score ? "symmetric" : "directional"}};
  if (r.protocol == "cross-dataset") {
    protocol["genuine_cap"] = c.genuine_cap;
    protocol["impostor_cap"] = c.impostor_cap;
  }
  Json per_seed = Json::array();
  for (std::size_t i = 0; i < r.aligned.per_seed.size(); ++i) {
    per_seed.push_back({{"seed", r.aligned.seeds[i]},
                        {"aligned", to_json(r.aligned.per_seed[i])},
                        {"baseline", to_json(r.baseline.per_seed[i])}});
  }
  return {{"protocol", protocol},
          {"metrics", {{"aligned", summary_json(r.aligned)}, {"baseline", summary_json(r.baseline)}}},
          {"per_seed", per_seed}};
}

std::string cmc_csv(const RetrievalReport& r) {
  std::ostringstream out;
  out << "rank,accuracy_mean,accuracy_std\n";
  for (std::size_t i = 0; i < r.cmc.size(); ++i) {
    out << (i + 1) << ',' << format_number(r.cmc[i].mean) << ',' << format_number(r.cmc[i].std)
        << '\n';
  }
  return out.str();
}

std::string roc_csv(const VerificationReport& r) {
  std::ostringstream out;
  out << "fmr,tmr\n";
  for (const auto& p : r.mean_roc) {
    out << format_number(p.fmr) << ',' << format_number(p.tmr.mean) << '\n';
  }
  return out.str();
}

std::string matrix_csv(const CompatibilityMatrix& cm) {
  std::ostringstream out;
  out << "model";
  for (const auto& name : cm.model_names) out << ',' << name;
  out << '\n';
  for (std::size_t a = 0; a < cm.size(); ++a) {
    out << cm.model_names[a];
    for (const auto& v : cm.rank1[a]) out << ',' << (v ? format_number(round_sig(*v)) : "NA");
    out << '\n';
  }
  return out.str();
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "model";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    out << names[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m.cols(); ++b) out << ',' << format_number(m(a, b));
    out << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream out;
  out << "method,fraction,n_train_mean,rank1_mean,rank1_std\n";
  for (const auto& row : t.rows) {
    double n = 0.0;
    for (auto v : row.n_train) n += static_cast<double>(v);
    n /= static_cast<double>(row.n_train.size());
    out << to_string(row.method) << ',' << format_number(row.fraction) << ',' << format_number(n)
        << ',' << format_number(row.rank1_summary.mean) << ',' << format_number(row.rank1_summary.std)
        << '\n';
  }
  return out.str();
}

}  // namespace embalign
