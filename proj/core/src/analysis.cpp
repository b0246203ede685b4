#include "embalign/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "embalign/errors.hpp"
#include "embalign/parallel.hpp"
#include "embalign/splits.hpp"
#include "protocol.hpp"

namespace embalign {

CompatibilityMatrix build_compatibility_matrix(const std::vector<EmbeddingSet>& sets,
                                               const IdentificationConfig& config) {
  const std::size_t m = sets.size();
  if (m == 0) throw ArgumentError("compatibility matrix needs at least one model");
  CompatibilityMatrix cm;
  cm.dataset_name = sets.front().dataset_name();
  cm.method = std::string(to_string(config.method));
  for (const auto& s : sets) cm.model_names.push_back(s.model_name());
  cm.rank1.assign(m, std::vector<std::optional<double>>(m));

  std::vector<std::string> errors(m * m);
  IdentificationConfig inner = config;
  inner.jobs = 1;
  parallel_for(config.jobs, m * m, [&](std::size_t job) {
    const std::size_t a = job / m, b = job % m;
    try {
      const auto [src, tgt] = intersect_on_images(sets[a], sets[b]);
      const auto report = evaluate_identification(src, tgt, inner);
      cm.rank1[a][b] = 100.0 * report.aligned.rank_k.at(1).mean;
    } catch (const std::exception& e) {
      errors[job] = e.what();
    }
  });
  for (std::size_t job = 0; job < m * m; ++job) {
    if (!errors[job].empty()) {
      cm.failures.push_back(cm.model_names[job / m] + " -> " + cm.model_names[job % m] + ": " +
                            errors[job]);
    }
  }
  return cm;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix symmetrize(const CompatibilityMatrix& cm) {
  const auto m = static_cast<Eigen::Index>(cm.size());
  Matrix dense(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto& v = cm.rank1[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (!v) {
        if (a == b) {
          dense(a, b) = 100.0;
          continue;
        }
        throw ProtocolError("compatibility entry " + cm.model_names[static_cast<std::size_t>(a)] +
                            " -> " + cm.model_names[static_cast<std::size_t>(b)] + " is missing");
      }
      dense(a, b) = *v;
    }
  }
  return symmetrize(dense);
}

Linkage parse_linkage(const std::string& name) {
  if (name == "average") return Linkage::Average;
  if (name == "single") return Linkage::Single;
  if (name == "complete") return Linkage::Complete;
  throw ArgumentError("unknown linkage '" + name + "'");
}

std::string to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
  }
  return "unknown";
}

Dendrogram agglomerative_cluster(const Matrix& similarity, Linkage linkage) {
  const auto m = static_cast<std::size_t>(similarity.rows());
  if (similarity.rows() != similarity.cols()) throw ConsistencyError("similarity is not square");
  if (m < 2) throw ArgumentError("clustering needs at least two models");
  if (!similarity.allFinite()) throw DataError("similarity contains non-finite values");
  if ((similarity - similarity.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ConsistencyError("similarity matrix is not symmetric");
  }
  const Matrix dist = (100.0 - similarity.array()).matrix();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b && dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) < -1e-9)
        throw ArgumentError("similarity above 100 gives a negative distance");

  struct Cluster {
    std::size_t id;
    std::vector<std::size_t> leaves;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < m; ++i) active.push_back({i, {i}});

  auto linkage_distance = [&](const Cluster& x, const Cluster& y) {
    double acc = linkage == Linkage::Single ? std::numeric_limits<double>::infinity()
                 : linkage == Linkage::Complete ? -std::numeric_limits<double>::infinity()
                                                : 0.0;
    for (auto i : x.leaves) {
      for (auto j : y.leaves) {
        const double d = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (linkage == Linkage::Single) acc = std::min(acc, d);
        else if (linkage == Linkage::Complete) acc = std::max(acc, d);
        else acc += d;
      }
    }
    if (linkage == Linkage::Average) acc /= static_cast<double>(x.leaves.size() * y.leaves.size());
    return acc;
  };

  Dendrogram out;
  out.num_leaves = m;
  std::vector<std::pair<std::size_t, std::size_t>> children(m - 1);
  while (active.size() > 1) {
    // `active` stays sorted by id, so the first strict minimum found is the
    // lowest-id pair among ties.
    std::size_t best_i = 0, best_j = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d = linkage_distance(active[i], active[j]);
        if (d < best) {
          best = d;
          best_i = i;
          best_j = j;
        }
      }
    }
    Cluster merged{m + out.merges.size(), active[best_i].leaves};
    merged.leaves.insert(merged.leaves.end(), active[best_j].leaves.begin(),
                         active[best_j].leaves.end());
    out.merges.push_back({active[best_i].id, active[best_j].id, best, merged.leaves.size()});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_i));
    active.push_back(std::move(merged));
  }

  std::function<void(std::size_t)> visit = [&](std::size_t id) {
    if (id < m) {
      out.leaf_order.push_back(id);
      return;
    }
    const auto& merge = out.merges[id - m];
    visit(merge.left);
    visit(merge.right);
  };
  visit(m + out.merges.size() - 1);
  return out;
}

std::string to_newick(const Dendrogram& dendrogram, const std::vector<std::string>& names) {
  const std::size_t m = dendrogram.num_leaves;
  if (names.size() != m) throw ConsistencyError("to_newick: name count does not match leaves");
  auto clean = [](std::string s) {
    for (char& c : s)
      if (c == '(' || c == ')' || c == ':' || c == ',' || c == ';' || c == ' ' || c == '\'') c = '_';
    return s;
  };
  auto height = [&](std::size_t id) { return id < m ? 0.0 : dendrogram.merges[id - m].height; };
  auto length = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", std::max(v, 0.0));
    return std::string(buf);
  };
  std::function<std::string(std::size_t)> render = [&](std::size_t id) -> std::string {
    if (id < m) return clean(names[id]);
    const auto& merge = dendrogram.merges[id - m];
    return "(" + render(merge.left) + ":" + length(merge.height - height(merge.left)) + "," +
           render(merge.right) + ":" + length(merge.height - height(merge.right)) + ")";
  };
  if (m == 1) return clean(names[0]) + ";";
  return render(m + dendrogram.merges.size() - 1) + ";";
}

AsymmetryReport asymmetry_stats(const CompatibilityMatrix& cm) {
  const std::size_t m = cm.size();
  if (m < 2) throw ArgumentError("asymmetry needs at least two models");
  auto at = [&](std::size_t a, std::size_t b) {
    const auto& v = cm.rank1[a][b];
    if (!v) {
      throw ProtocolError("compatibility entry " + cm.model_names[a] + " -> " + cm.model_names[b] +
                          " is missing");
    }
    return *v;
  };
  AsymmetryReport out;
  out.model_names = cm.model_names;
  for (std::size_t k = 0; k < m; ++k) {
    double in = 0.0, outgoing = 0.0;
    for (std::size_t o = 0; o < m; ++o) {
      if (o == k) continue;
      in += at(o, k);
      outgoing += at(k, o);
    }
    out.incoming.push_back(in / static_cast<double>(m - 1));
    out.outgoing.push_back(outgoing / static_cast<double>(m - 1));
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double dev = std::abs(at(a, b) - at(b, a));
      sum += dev;
      out.max_deviation = std::max(out.max_deviation, dev);
      ++pairs;
    }
  }
  out.mean_deviation = sum / static_cast<double>(pairs);
  return out;
}

SweepTable training_size_sweep(const EmbeddingSet& source, const EmbeddingSet& target,
                               const SweepConfig& config) {
  detail::require_paired(source, target);
  if (config.fractions.empty() || config.methods.empty() || config.seeds.empty()) {
    throw ArgumentError("sweep needs fractions, methods and seeds");
  }
  for (std::size_t i = 0; i < config.fractions.size(); ++i) {
    const double f = config.fractions[i];
    if (!(f > 0.0 && f <= 1.0)) throw ArgumentError("sweep fractions must lie in (0, 1]");
    if (i > 0 && !(f > config.fractions[i - 1])) {
      throw ArgumentError("sweep fractions must be strictly ascending");
    }
  }

  const std::size_t n_seeds = config.seeds.size();
  std::vector<SplitSpec> splits(n_seeds);
  for (std::size_t s = 0; s < n_seeds; ++s) {
    splits[s] = identity_disjoint_split(source.labels(), config.train_fraction, config.seeds[s]);
    const auto smallest = static_cast<std::size_t>(std::floor(
        config.fractions.front() * static_cast<double>(splits[s].train_identities.size()) + 1e-9));
    if (smallest < 1) {
      throw ArgumentError("fraction " + std::to_string(config.fractions.front()) +
                          " leaves no training identity");
    }
  }

  const std::size_t n_methods = config.methods.size();
  const std::size_t n_fracs = config.fractions.size();
  SweepTable table;
  table.seeds = config.seeds;
  table.rows.resize(n_methods * n_fracs);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    for (std::size_t fi = 0; fi < n_fracs; ++fi) {
      auto& row = table.rows[mi * n_fracs + fi];
      row.method = config.methods[mi];
      row.fraction = config.fractions[fi];
      row.n_train.assign(n_seeds, 0);
      row.rank1.assign(n_seeds, 0.0);
    }
  }

  RetrievalOptions retrieval = config.retrieval;
  retrieval.ks = {1};
  parallel_for(config.jobs, n_methods * n_fracs * n_seeds, [&](std::size_t job) {
    const std::size_t s = job % n_seeds;
    const std::size_t row_index = job / n_seeds;
    auto& row = table.rows[row_index];
    const SplitSpec& split = splits[s];
    const auto n_ids = static_cast<std::size_t>(
        std::floor(row.fraction * static_cast<double>(split.train_identities.size()) + 1e-9));
    const std::vector<std::string> pool(split.train_identities.begin(),
                                        split.train_identities.begin() +
                                            static_cast<std::ptrdiff_t>(n_ids));
    const auto train_rows = rows_for_identities(source.labels(), pool);

    FitOptions options;
    options.method = row.method;
    options.alpha = config.alpha;
    options.seed = static_cast<std::int64_t>(config.seeds[s]);
    const auto views = detail::prepare_views(
        source.to_matrix(train_rows), target.to_matrix(train_rows),
        source.to_matrix(split.test_rows), target.to_matrix(split.test_rows), options);
    const auto labels = detail::select_labels(source.labels(), split.test_rows);
    const auto metrics =
        retrieval_metrics(views.aligned_queries, views.gallery, labels, labels, retrieval);
    row.n_train[s] = train_rows.size();
    row.rank1[s] = 100.0 * metrics.rank_k.at(1);
  });
  for (auto& row : table.rows) row.rank1_summary = summarize(row.rank1);
  return table;
}

}  // namespace embalign
