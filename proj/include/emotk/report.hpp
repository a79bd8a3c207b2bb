#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace emotk {

struct LabelPrf {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;    // gold positives
  std::uint64_t predicted = 0;  // predicted positives
  bool in_macro = true;         // false when support == predicted == 0
};

/// Every metric for one (model, dataset, label space, decision rule) tuple.
struct EvaluationReport {
  double subset_accuracy = 0.0;
  double hamming_accuracy = 0.0;
  double jaccard_samples = 0.0;
  double f1_micro = 0.0;
  double f1_macro = 0.0;
  double auc_micro = 0.0;
  double ap_micro = 0.0;
  double lrap = 0.0;

  std::vector<LabelPrf> per_label;
  std::map<std::string, double> per_language;  // lang -> F1-micro

  std::size_t n_rows = 0;
  std::size_t n_labels = 0;
  std::string decision_rule;
  double mean_gold_cardinality = 0.0;
  double mean_predicted_cardinality = 0.0;
  std::size_t lrap_rows_excluded = 0;

  /// Free-form provenance lines (view, dropped rows, flagged rows, ...).
  std::vector<std::string> notes;
};

nlohmann::ordered_json to_json(const EvaluationReport& report);
/// Scalar metrics are required; breakdowns and counts are optional.
EvaluationReport report_from_json(const nlohmann::json& j);

/// Aligned-column Markdown: headline table (F1-mic, F1-mac, Jacc., AUC, AP,
/// LRAP), the two unreported accuracies, per-label and per-language tables,
/// and a footer stating the macro-F1 convention.
std::string to_markdown(const EvaluationReport& report, const std::string& title = "");

}  // namespace emotk
