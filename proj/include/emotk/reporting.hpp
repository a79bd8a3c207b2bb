#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "emotk/metrics.hpp"
#include "emotk/report.hpp"

namespace emotk {

/// Key of one evaluation inside a model run.
struct ReportKey {
  std::string dataset;
  std::string label_space = "projected";
  std::string rule = "threshold@0.5";

  auto operator<=>(const ReportKey&) const = default;
  std::string str() const { return dataset + "/" + label_space + "/" + rule; }
};

struct ModelRunRecord {
  std::string model;
  double params = 0.0;        // parameter count
  double train_minutes = 0.0; // user-supplied, never measured here
  std::map<ReportKey, EvaluationReport> reports;

  const EvaluationReport& report(const ReportKey& key) const;
};

/// {"runs": [{"model", "params", "train_minutes", "reports": [{"dataset",
/// "label_space", "rule", "report": {...}}]}]}
std::vector<ModelRunRecord> load_runs(const std::filesystem::path& path);
std::vector<ModelRunRecord> runs_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const std::vector<ModelRunRecord>& runs);

// ------------------------------------------------------ per-language matrix

struct LanguageMatrix {
  std::vector<std::string> languages;  // hardest (lowest mean F1) first
  std::vector<std::string> models;
  std::vector<std::vector<double>> f1;  // [language][model]
  std::vector<double> mean;
};

/// Ties in mean F1 are broken alphabetically by language code.
LanguageMatrix per_language_matrix(const std::vector<ModelRunRecord>& runs, const ReportKey& key);
std::string to_csv(const LanguageMatrix& m);

// ---------------------------------------------------------------- Pareto

struct ParetoPoint {
  std::string name;
  double cost;
  double quality;
};

struct DominatedPoint {
  ParetoPoint point;
  std::string dominated_by;
  bool by_tie = false;  // identical (cost, quality) to a retained point
};

struct ParetoResult {
  std::vector<ParetoPoint> frontier;  // ascending cost
  std::vector<DominatedPoint> dominated;
};

/// A point is dominated when another has cost <= and quality >= with at
/// least one strict. Of identical points the first by name is retained.
ParetoResult pareto_frontier(const std::vector<ParetoPoint>& points);
nlohmann::ordered_json to_json(const ParetoResult& result);

enum class ParetoQuality { kJaccard, kF1Micro };
std::vector<ParetoPoint> pareto_points(const std::vector<ModelRunRecord>& runs, const ReportKey& key,
                                       ParetoQuality quality);

// ---------------------------------------------------------------- tables

enum class TableLayout { kInDomain, kCross, kHeadToHead };
TableLayout parse_layout(std::string_view text);

struct TableOptions {
  bool leading_zero = false;  // ".868" vs "0.868"
  int decimals = 3;
};

struct RenderedTable {
  std::string markdown;
  std::string csv;  // full precision, lossless
};

/// in-domain: F1-mic, F1-mac, Jacc., AUC, AP, LRAP for keys[0].
/// cross: F1 and AUC per key (one column group per benchmark).
/// head-to-head: F1-mic, AUC-mic, AP-mic, LRAP for keys[0].
/// Best value per column is bolded in the Markdown (all ties bolded).
RenderedTable render_table(const std::vector<ModelRunRecord>& runs, TableLayout layout,
                           const std::vector<ReportKey>& keys, const TableOptions& options = {});

// ---------------------------------------------------------------- curves

/// CSV `threshold,precision,recall`, preceded by a `# ap_micro=<value>`
/// comment line. The (recall 0, precision 1) endpoint has threshold `inf`.
void emit_curves(const RealMatrix& scores, const BinaryMatrix& gold, std::ostream& out);
void emit_curves(const RealMatrix& scores, const BinaryMatrix& gold, const std::filesystem::path& path);

struct CurveFile {
  double ap_micro;
  std::vector<metrics::PrPoint> points;
};
CurveFile read_curves(std::istream& in);

}  // namespace emotk
