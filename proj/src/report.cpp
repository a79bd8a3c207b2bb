#include "emotk/report.hpp"

#include <cstdio>
#include <sstream>

#include "emotk/error.hpp"

namespace emotk {

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// Aligned Markdown table; columns padded to their widest cell.
std::string markdown_table(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = std::max<std::size_t>(3, header[c].size());
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    out << '|';
    for (std::size_t c = 0; c < cells.size(); ++c) out << ' ' << pad(cells[c], width[c]) << " |";
    out << '\n';
  };
  line(header);
  out << '|';
  for (const auto w : width) out << std::string(w + 2, '-') << '|';
  out << '\n';
  for (const auto& r : rows) line(r);
  return out.str();
}

}  // namespace

nlohmann::ordered_json to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["decision_rule"] = r.decision_rule;
  j["n_rows"] = r.n_rows;
  j["n_labels"] = r.n_labels;
  j["f1_micro"] = r.f1_micro;
  j["f1_macro"] = r.f1_macro;
  j["jaccard_samples"] = r.jaccard_samples;
  j["auc_micro"] = r.auc_micro;
  j["ap_micro"] = r.ap_micro;
  j["lrap"] = r.lrap;
  j["subset_accuracy"] = r.subset_accuracy;
  j["hamming_accuracy"] = r.hamming_accuracy;
  j["mean_gold_cardinality"] = r.mean_gold_cardinality;
  j["mean_predicted_cardinality"] = r.mean_predicted_cardinality;
  j["lrap_rows_excluded"] = r.lrap_rows_excluded;
  auto& labels = j["per_label"] = nlohmann::ordered_json::array();
  for (const auto& p : r.per_label) {
    labels.push_back({{"label", p.label},
                      {"precision", p.precision},
                      {"recall", p.recall},
                      {"f1", p.f1},
                      {"support", p.support},
                      {"predicted", p.predicted},
                      {"in_macro", p.in_macro}});
  }
  if (!r.per_language.empty()) {
    auto& langs = j["per_language_f1_micro"] = nlohmann::ordered_json::object();
    for (const auto& [lang, f1] : r.per_language) langs[lang] = f1;
  }
  j["notes"] = r.notes;
  return j;
}

EvaluationReport report_from_json(const nlohmann::json& j) {
  EvaluationReport r;
  try {
    r.f1_micro = j.at("f1_micro").get<double>();
    r.f1_macro = j.at("f1_macro").get<double>();
    r.jaccard_samples = j.at("jaccard_samples").get<double>();
    r.auc_micro = j.at("auc_micro").get<double>();
    r.ap_micro = j.at("ap_micro").get<double>();
    r.lrap = j.at("lrap").get<double>();
    r.subset_accuracy = j.value("subset_accuracy", 0.0);
    r.hamming_accuracy = j.value("hamming_accuracy", 0.0);
    r.decision_rule = j.value("decision_rule", std::string("threshold@0.5"));
    r.n_rows = j.value("n_rows", std::size_t{0});
    r.n_labels = j.value("n_labels", std::size_t{0});
    r.mean_gold_cardinality = j.value("mean_gold_cardinality", 0.0);
    r.mean_predicted_cardinality = j.value("mean_predicted_cardinality", 0.0);
    r.lrap_rows_excluded = j.value("lrap_rows_excluded", std::size_t{0});
    if (j.contains("per_label")) {
      for (const auto& p : j["per_label"]) {
        r.per_label.push_back({p.at("label").get<std::string>(), p.at("precision").get<double>(),
                               p.at("recall").get<double>(), p.at("f1").get<double>(),
                               p.at("support").get<std::uint64_t>(),
                               p.value("predicted", std::uint64_t{0}), p.value("in_macro", true)});
      }
    }
    if (j.contains("per_language_f1_micro")) {
      for (const auto& [lang, v] : j["per_language_f1_micro"].items()) {
        r.per_language[lang] = v.get<double>();
      }
    }
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInvalidInput, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string to_markdown(const EvaluationReport& r, const std::string& title) {
  std::ostringstream out;
  if (!title.empty()) out << "## " << title << "\n\n";
  out << "Rows: " << r.n_rows << ", labels: " << r.n_labels << ", rule: " << r.decision_rule
      << "\n\n";
  out << markdown_table({"F1-mic", "F1-mac", "Jacc.", "AUC", "AP", "LRAP"},
                        {{fixed3(r.f1_micro), fixed3(r.f1_macro), fixed3(r.jaccard_samples),
                          fixed3(r.auc_micro), fixed3(r.ap_micro), fixed3(r.lrap)}});
  out << '\n'
      << markdown_table({"Subset acc.", "Hamming acc.", "Gold card.", "Pred. card."},
                        {{fixed3(r.subset_accuracy), fixed3(r.hamming_accuracy),
                          fixed3(r.mean_gold_cardinality), fixed3(r.mean_predicted_cardinality)}});
  if (!r.per_label.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : r.per_label) {
      rows.push_back({p.label, fixed3(p.precision), fixed3(p.recall),
                      p.in_macro ? fixed3(p.f1) : std::string("n/a"), std::to_string(p.support)});
    }
    out << '\n' << markdown_table({"Label", "P", "R", "F1", "Support"}, rows);
  }
  if (!r.per_language.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [lang, f1] : r.per_language) rows.push_back({lang, fixed3(f1)});
    out << '\n' << markdown_table({"Lang", "F1-mic"}, rows);
  }
  out << '\n';
  for (const auto& n : r.notes) out << "- " << n << '\n';
  out << "- F1-macro averages labels with gold or predicted positives; labels with"
         " neither are excluded, labels predicted without gold support count as 0.\n";
  return out.str();
}

}  // namespace emotk
