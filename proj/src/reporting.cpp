#include "emotk/reporting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

namespace emotk {

namespace {

std::string full_precision(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_number(std::string_view s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::kInvalidInput, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string format_metric(double v, const TableOptions& o) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", o.decimals, v);
  std::string s(buf);
  if (!o.leading_zero && s.starts_with("0.")) s.erase(0, 1);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Column {
  std::string header;
  ReportKey key;
  double (*get)(const EvaluationReport&);
};

double get_f1_micro(const EvaluationReport& r) { return r.f1_micro; }
double get_f1_macro(const EvaluationReport& r) { return r.f1_macro; }
double get_jaccard(const EvaluationReport& r) { return r.jaccard_samples; }
double get_auc(const EvaluationReport& r) { return r.auc_micro; }
double get_ap(const EvaluationReport& r) { return r.ap_micro; }
double get_lrap(const EvaluationReport& r) { return r.lrap; }

}  // namespace

const EvaluationReport& ModelRunRecord::report(const ReportKey& key) const {
  const auto it = reports.find(key);
  if (it == reports.end()) {
    fail(ErrorKind::kInvalidInput, "model '" + model + "' has no report for " + key.str());
  }
  return it->second;
}

std::vector<ModelRunRecord> runs_from_json(const nlohmann::json& j) {
  std::vector<ModelRunRecord> runs;
  try {
    for (const auto& r : j.at("runs")) {
      ModelRunRecord rec;
      rec.model = r.at("model").get<std::string>();
      rec.params = r.value("params", 0.0);
      rec.train_minutes = r.value("train_minutes", 0.0);
      for (const auto& e : r.value("reports", nlohmann::json::array())) {
        ReportKey key{e.at("dataset").get<std::string>(), e.value("label_space", std::string("projected")),
                      e.value("rule", std::string("threshold@0.5"))};
        rec.reports[key] = report_from_json(e.at("report"));
      }
      runs.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInvalidInput, std::string("runs file: ") + e.what());
  }
  return runs;
}

std::vector<ModelRunRecord> load_runs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  try {
    return runs_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kInvalidInput, path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json to_json(const std::vector<ModelRunRecord>& runs) {
  nlohmann::ordered_json j;
  auto& arr = j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    nlohmann::ordered_json rj;
    rj["model"] = r.model;
    rj["params"] = r.params;
    rj["train_minutes"] = r.train_minutes;
    auto& reps = rj["reports"] = nlohmann::ordered_json::array();
    for (const auto& [key, rep] : r.reports) {
      reps.push_back({{"dataset", key.dataset}, {"label_space", key.label_space},
                      {"rule", key.rule}, {"report", to_json(rep)}});
    }
    arr.push_back(std::move(rj));
  }
  return j;
}

LanguageMatrix per_language_matrix(const std::vector<ModelRunRecord>& runs, const ReportKey& key) {
  LanguageMatrix m;
  std::set<std::string> langs;
  for (const auto& r : runs) {
    const auto& rep = r.report(key);
    if (rep.per_language.empty()) {
      fail(ErrorKind::kInvalidInput, "model '" + r.model + "' has no per-language F1 for " + key.str());
    }
    m.models.push_back(r.model);
    for (const auto& [lang, _] : rep.per_language) langs.insert(lang);
  }
  struct Row {
    std::string lang;
    std::vector<double> values;
    double mean;
  };
  std::vector<Row> rows;
  for (const auto& lang : langs) {
    Row row{lang, {}, 0.0};
    for (const auto& r : runs) {
      const auto& per = r.report(key).per_language;
      const auto it = per.find(lang);
      if (it == per.end()) {
        fail(ErrorKind::kInvalidInput, "model '" + r.model + "' lacks F1 for language '" + lang + "'");
      }
      row.values.push_back(it->second);
      row.mean += it->second;
    }
    row.mean /= static_cast<double>(runs.size());
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.mean < b.mean || (a.mean == b.mean && a.lang < b.lang);
  });
  for (auto& r : rows) {
    m.languages.push_back(r.lang);
    m.f1.push_back(std::move(r.values));
    m.mean.push_back(r.mean);
  }
  return m;
}

std::string to_csv(const LanguageMatrix& m) {
  std::ostringstream out;
  out << "lang";
  for (const auto& model : m.models) out << ',' << csv_field(model);
  out << ",mean\n";
  for (std::size_t i = 0; i < m.languages.size(); ++i) {
    out << m.languages[i];
    for (const double v : m.f1[i]) out << ',' << full_precision(v);
    out << ',' << full_precision(m.mean[i]) << '\n';
  }
  return out.str();
}

ParetoResult pareto_frontier(const std::vector<ParetoPoint>& points) {
  for (const auto& p : points) {
    if (!(p.cost > 0.0)) fail(ErrorKind::kInvalidInput, "Pareto cost for '" + p.name + "' must be > 0");
  }
  // Name order decides which of two identical points survives.
  std::vector<ParetoPoint> sorted = points;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ParetoPoint& a, const ParetoPoint& b) { return a.name < b.name; });
  const auto weakly = [](const ParetoPoint& q, const ParetoPoint& p) {
    return q.cost <= p.cost && q.quality >= p.quality;
  };
  const auto strictly = [&](const ParetoPoint& q, const ParetoPoint& p) {
    return weakly(q, p) && (q.cost < p.cost || q.quality > p.quality);
  };
  std::vector<bool> kept(sorted.size(), true);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = 0; j < sorted.size() && kept[i]; ++j) {
      if (i == j) continue;
      // an identical point earlier in name order also knocks this one out
      if (strictly(sorted[j], sorted[i]) || (j < i && weakly(sorted[j], sorted[i]))) kept[i] = false;
    }
  }
  ParetoResult out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (kept[i]) out.frontier.push_back(sorted[i]);
  }
  std::stable_sort(out.frontier.begin(), out.frontier.end(),
                   [](const ParetoPoint& a, const ParetoPoint& b) { return a.cost < b.cost; });
  // Credit each dominated point to the cheapest frontier point covering it.
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (kept[i]) continue;
    const auto& p = sorted[i];
    const ParetoPoint* by = nullptr;
    for (const auto& f : out.frontier) {
      if (strictly(f, p)) {
        by = &f;
        break;
      }
    }
    if (by != nullptr) {
      out.dominated.push_back({p, by->name, false});
      continue;
    }
    for (const auto& f : out.frontier) {
      if (weakly(f, p)) {
        out.dominated.push_back({p, f.name, true});
        break;
      }
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const ParetoResult& r) {
  nlohmann::ordered_json j;
  auto& f = j["frontier"] = nlohmann::ordered_json::array();
  for (const auto& p : r.frontier) f.push_back({{"name", p.name}, {"cost", p.cost}, {"quality", p.quality}});
  auto& d = j["dominated"] = nlohmann::ordered_json::array();
  for (const auto& p : r.dominated) {
    d.push_back({{"name", p.point.name},
                 {"cost", p.point.cost},
                 {"quality", p.point.quality},
                 {"dominated_by", p.dominated_by},
                 {"tie", p.by_tie}});
  }
  return j;
}

std::vector<ParetoPoint> pareto_points(const std::vector<ModelRunRecord>& runs, const ReportKey& key,
                                       ParetoQuality quality) {
  std::vector<ParetoPoint> pts;
  for (const auto& r : runs) {
    const auto& rep = r.report(key);
    pts.push_back({r.model, r.train_minutes,
                   quality == ParetoQuality::kJaccard ? rep.jaccard_samples : rep.f1_micro});
  }
  return pts;
}

TableLayout parse_layout(std::string_view text) {
  if (text == "indomain") return TableLayout::kInDomain;
  if (text == "cross") return TableLayout::kCross;
  if (text == "headtohead") return TableLayout::kHeadToHead;
  fail(ErrorKind::kUsage, "unknown table layout '" + std::string(text) + "'");
}

RenderedTable render_table(const std::vector<ModelRunRecord>& runs, TableLayout layout,
                           const std::vector<ReportKey>& keys, const TableOptions& options) {
  if (keys.empty()) fail(ErrorKind::kUsage, "render_table needs at least one report key");
  std::vector<Column> cols;
  switch (layout) {
    case TableLayout::kInDomain:
      cols = {{"F1-mic", keys[0], get_f1_micro}, {"F1-mac", keys[0], get_f1_macro},
              {"Jacc.", keys[0], get_jaccard},   {"AUC", keys[0], get_auc},
              {"AP", keys[0], get_ap},           {"LRAP", keys[0], get_lrap}};
      break;
    case TableLayout::kCross:
      for (const auto& k : keys) {
        cols.push_back({k.dataset + " F1", k, get_f1_micro});
        cols.push_back({k.dataset + " AUC", k, get_auc});
      }
      break;
    case TableLayout::kHeadToHead:
      cols = {{"F1-mic", keys[0], get_f1_micro}, {"AUC-mic", keys[0], get_auc},
              {"AP-mic", keys[0], get_ap},       {"LRAP", keys[0], get_lrap}};
      break;
  }

  std::vector<std::vector<double>> values(runs.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) values[i][c] = cols[c].get(runs[i].report(cols[c].key));
  }
  std::vector<double> best(cols.size(), -std::numeric_limits<double>::infinity());
  for (const auto& row : values) {
    for (std::size_t c = 0; c < cols.size(); ++c) best[c] = std::max(best[c], row[c]);
  }

  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::vector<std::string> row{runs[i].model};
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto s = format_metric(values[i][c], options);
      // bold compares displayed values so visually tied cells are all bold
      if (s == format_metric(best[c], options)) s = "**" + s + "**";
      row.push_back(std::move(s));
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::string> header{"Model"};
  for (const auto& c : cols) header.push_back(c.header);
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = std::max<std::size_t>(3, header[c].size());
    for (const auto& r : cells) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream md;
  auto line = [&](const std::vector<std::string>& r) {
    md << '|';
    for (std::size_t c = 0; c < r.size(); ++c) {
      md << ' ' << r[c] << std::string(width[c] - r[c].size(), ' ') << " |";
    }
    md << '\n';
  };
  line(header);
  md << '|';
  for (std::size_t c = 0; c < width.size(); ++c) {
    md << (c == 0 ? std::string(width[c] + 2, '-') : std::string(width[c] + 1, '-') + ":") << '|';
  }
  md << '\n';
  for (const auto& r : cells) line(r);

  std::ostringstream csv;
  for (std::size_t c = 0; c < header.size(); ++c) csv << (c ? "," : "") << csv_field(header[c]);
  csv << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    csv << csv_field(runs[i].model);
    for (const double v : values[i]) csv << ',' << full_precision(v);
    csv << '\n';
  }
  return {md.str(), csv.str()};
}

void emit_curves(const RealMatrix& scores, const BinaryMatrix& gold, std::ostream& out) {
  const auto curve = metrics::pr_curve_micro(scores, gold);
  out << "# ap_micro=" << full_precision(metrics::ap_micro(scores, gold)) << '\n';
  out << "threshold,precision,recall\n";
  for (const auto& p : curve) {
    out << full_precision(p.threshold) << ',' << full_precision(p.precision) << ','
        << full_precision(p.recall) << '\n';
  }
}

void emit_curves(const RealMatrix& scores, const BinaryMatrix& gold, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  emit_curves(scores, gold, out);
}

CurveFile read_curves(std::istream& in) {
  CurveFile f{std::numeric_limits<double>::quiet_NaN(), {}};
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.starts_with("# ap_micro=")) {
      f.ap_micro = parse_number(std::string_view(line).substr(11));
      continue;
    }
    if (line.front() == '#') continue;
    if (!header_seen) {
      if (line != "threshold,precision,recall") fail(ErrorKind::kInvalidInput, "unexpected curve header");
      header_seen = true;
      continue;
    }
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos) fail(ErrorKind::kInvalidInput, "bad curve row");
    const std::string_view sv(line);
    f.points.push_back({parse_number(sv.substr(b + 1)), parse_number(sv.substr(a + 1, b - a - 1)),
                        parse_number(sv.substr(0, a))});
  }
  return f;
}

}  // namespace emotk
