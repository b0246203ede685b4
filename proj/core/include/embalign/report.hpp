#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "embalign/analysis.hpp"
#include "embalign/ident_eval.hpp"
#include "embalign/splits.hpp"
#include "embalign/verif_eval.hpp"

namespace embalign {

using Json = nlohmann::ordered_json;

/// Rounds to `digits` significant decimal digits (the value %.{digits}g
/// prints). Non-finite values pass through.
double round_sig(double value, int digits = 9);

/// Text form used in CSV cells: %.9g.
std::string format_number(double value);

/// Copy of `j` with every floating-point number rounded by round_sig.
Json rounded(const Json& j);

/// Pretty-printed, rounded, newline-terminated. Non-finite numbers become null.
std::string dump_json(const Json& j);

Json to_json(const MetricSummary& s);
Json to_json(const RetrievalMetrics& m);
Json to_json(const VerificationMetrics& m);
Json to_json(const SplitSpec& split);
Json to_json(const PairList& pairs);
Json to_json(const Dendrogram& d, const std::vector<std::string>& names, Linkage linkage);
Json to_json(const AsymmetryReport& r);
Json to_json(const SweepTable& t);
Json to_json(const CompatibilityMatrix& cm);

/// {protocol, metrics, per_seed} sections of an identification report.
Json report_sections(const IdentificationReport& r);
Json report_sections(const VerificationResult& r);

/// rank,accuracy_mean,accuracy_std
std::string cmc_csv(const RetrievalReport& r);
/// fmr,tmr on the averaged curve
std::string roc_csv(const VerificationReport& r);
/// Model names as header row and first column; missing entries as NA.
std::string matrix_csv(const CompatibilityMatrix& cm);
std::string matrix_csv(const Matrix& m, const std::vector<std::string>& names);
/// method,fraction,n_train_mean,rank1_mean,rank1_std
std::string sweep_csv(const SweepTable& t);

}  // namespace embalign
