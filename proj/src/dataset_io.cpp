#include "emotk/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "emotk/text.hpp"

namespace emotk {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string where(std::string_view source, std::size_t line_no) {
  return std::string(source) + ":" + std::to_string(line_no);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// RFC 4180 subset: quoted fields with doubled quotes, no embedded newlines.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

double parse_score(std::string_view text, std::string_view context) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::kInvalidInput, std::string(context) + ": non-numeric score '" + std::string(text) + "'");
  }
  return value;
}

void check_range(double value, std::string_view context) {
  if (!(value >= 0.0 && value <= 1.0)) {
    fail(ErrorKind::kInvalidInput, std::string(context) + ": score " + std::to_string(value) +
                                       " outside [0,1]");
  }
}

}  // namespace

std::string_view to_string(Script script) {
  return script == Script::kNative ? "native" : "latin";
}

Script parse_script(std::string_view text) {
  if (text == "native") return Script::kNative;
  if (text == "latin") return Script::kLatin;
  fail(ErrorKind::kInvalidInput, "unknown script '" + std::string(text) + "'");
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
    case Split::kUnsplit: return "unsplit";
  }
  return "unsplit";
}

void validate_corpus(Corpus& corpus) {
  std::unordered_set<std::string_view> ids;
  ids.reserve(corpus.samples.size());
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    auto& s = corpus.samples[i];
    const auto ctx = "row " + std::to_string(i + 1) + " (id '" + s.id + "')";
    if (s.id.empty()) fail(ErrorKind::kInvalidInput, "row " + std::to_string(i + 1) + ": empty id");
    if (!ids.insert(s.id).second) fail(ErrorKind::kInvalidInput, ctx + ": duplicate id");
    if (s.lang.empty()) fail(ErrorKind::kInvalidInput, ctx + ": empty lang");
    if (s.labels.empty() && !s.empty_gold) fail(ErrorKind::kInvalidInput, ctx + ": empty label set");
    std::vector<std::size_t> cols;
    cols.reserve(s.labels.size());
    for (const auto& l : s.labels) {
      const auto idx = corpus.taxonomy.index_of(l);
      if (!idx) fail(ErrorKind::kInvalidInput, ctx + ": unknown label '" + l + "'");
      cols.push_back(*idx);
    }
    std::sort(cols.begin(), cols.end());
    if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) {
      fail(ErrorKind::kInvalidInput, ctx + ": repeated label");
    }
    s.labels.clear();
    for (const auto c : cols) s.labels.push_back(corpus.taxonomy.label(c));
  }
}

Corpus read_corpus(std::istream& in, const EmotionTaxonomy& taxonomy, std::string_view source_name) {
  Corpus corpus{taxonomy, {}, Split::kUnsplit};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto ctx = where(source_name, line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorKind::kInvalidInput, ctx + ": malformed JSON: " + e.what());
    }
    Sample s;
    try {
      s.id = obj.at("id").get<std::string>();
      s.lang = obj.at("lang").get<std::string>();
      s.text = text::nfc(obj.at("text").get<std::string>());
      s.labels = obj.at("labels").get<std::vector<std::string>>();
      if (obj.contains("script")) s.script = parse_script(obj["script"].get<std::string>());
      if (obj.contains("empty_gold")) s.empty_gold = obj["empty_gold"].get<bool>();
    } catch (const json::exception& e) {
      fail(ErrorKind::kInvalidInput, ctx + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorKind::kInvalidInput, ctx + ": " + e.what());
    }
    if (s.labels.empty() && !s.empty_gold) {
      fail(ErrorKind::kInvalidInput, ctx + ": empty label set");
    }
    if (s.empty_gold && !s.labels.empty()) {
      fail(ErrorKind::kInvalidInput, ctx + ": empty_gold row carries labels");
    }
    for (const auto& l : s.labels) {
      if (!taxonomy.contains(l)) fail(ErrorKind::kInvalidInput, ctx + ": unknown label '" + l + "'");
    }
    corpus.samples.push_back(std::move(s));
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path, const EmotionTaxonomy& taxonomy) {
  auto in = open_in(path);
  return read_corpus(in, taxonomy, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.samples) {
    ordered_json obj;
    obj["id"] = s.id;
    obj["lang"] = s.lang;
    obj["text"] = s.text;
    obj["labels"] = s.labels;
    obj["script"] = to_string(s.script);
    if (s.empty_gold) obj["empty_gold"] = true;
    out << obj.dump() << '\n';
  }
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  write_corpus(out, corpus);
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

GoldMatrix binarize(const Corpus& corpus) {
  GoldMatrix g{{}, corpus.taxonomy, BinaryMatrix(corpus.size(), corpus.taxonomy.size(), 0)};
  g.ids.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus.samples[i];
    g.ids.push_back(s.id);
    for (const auto& l : s.labels) {
      const auto idx = corpus.taxonomy.index_of(l);
      if (!idx) fail(ErrorKind::kInvalidInput, "id '" + s.id + "': unknown label '" + l + "'");
      g.values(i, *idx) = 1;
    }
  }
  return g;
}

ScoreMatrix read_scores_csv(std::istream& in, const EmotionTaxonomy& taxonomy) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kInvalidInput, "score CSV is empty");
  strip_cr(line);
  const auto header = split_csv(line);
  if (header.empty() || normalize_label(header[0]) != "id") {
    fail(ErrorKind::kInvalidInput, "score CSV header must start with 'id'");
  }
  // file column -> taxonomy column
  std::vector<std::optional<std::size_t>> column_of(header.size());
  std::vector<bool> present(taxonomy.size(), false);
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto idx = taxonomy.index_of(header[c]);
    if (!idx) continue;  // extra columns are ignored
    if (present[*idx]) fail(ErrorKind::kInvalidInput, "score CSV repeats column '" + header[c] + "'");
    present[*idx] = true;
    column_of[c] = idx;
  }
  for (std::size_t j = 0; j < taxonomy.size(); ++j) {
    if (!present[j]) fail(ErrorKind::kInvalidInput, "score CSV lacks column '" + taxonomy.label(j) + "'");
  }

  ScoreMatrix out{{}, taxonomy, {}};
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto ctx = "scores:" + std::to_string(line_no);
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      fail(ErrorKind::kInvalidInput, ctx + ": expected " + std::to_string(header.size()) +
                                         " fields, got " + std::to_string(fields.size()));
    }
    if (!seen.insert(fields[0]).second) {
      fail(ErrorKind::kInvalidInput, ctx + ": duplicate id '" + fields[0] + "'");
    }
    const auto base = values.size();
    values.resize(base + taxonomy.size());
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (!column_of[c]) continue;
      const double v = parse_score(fields[c], ctx);
      check_range(v, ctx);
      values[base + *column_of[c]] = v;
    }
    out.ids.push_back(fields[0]);
  }
  out.values = RealMatrix(out.ids.size(), taxonomy.size(), std::move(values));
  return out;
}

ScoreMatrix read_scores_jsonl(std::istream& in, const EmotionTaxonomy& taxonomy) {
  ScoreMatrix out{{}, taxonomy, {}};
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto ctx = "scores:" + std::to_string(line_no);
    try {
      const auto obj = json::parse(line);
      auto id = obj.at("id").get<std::string>();
      if (!seen.insert(id).second) fail(ErrorKind::kInvalidInput, ctx + ": duplicate id '" + id + "'");
      const auto& map = obj.at("scores");
      std::vector<bool> present(taxonomy.size(), false);
      const auto base = values.size();
      values.resize(base + taxonomy.size());
      for (const auto& [label, value] : map.items()) {
        const auto idx = taxonomy.index_of(label);
        if (!idx) continue;
        const double v = value.get<double>();
        check_range(v, ctx);
        values[base + *idx] = v;
        present[*idx] = true;
      }
      for (std::size_t j = 0; j < taxonomy.size(); ++j) {
        if (!present[j]) {
          fail(ErrorKind::kInvalidInput, ctx + ": missing score for '" + taxonomy.label(j) + "'");
        }
      }
      out.ids.push_back(std::move(id));
    } catch (const json::exception& e) {
      fail(ErrorKind::kInvalidInput, ctx + ": " + e.what());
    }
  }
  out.values = RealMatrix(out.ids.size(), taxonomy.size(), std::move(values));
  return out;
}

ScoreMatrix read_scores(const std::filesystem::path& path, const EmotionTaxonomy& taxonomy) {
  auto in = open_in(path);
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json") return read_scores_jsonl(in, taxonomy);
  return read_scores_csv(in, taxonomy);
}

void write_scores_csv(std::ostream& out, const ScoreMatrix& scores) {
  out << "id";
  for (const auto& l : scores.taxonomy.labels()) out << ',' << l;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < scores.ids.size(); ++i) {
    out << scores.ids[i];
    for (const double v : scores.values.row(i)) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

ScoreMatrix align_scores(const ScoreMatrix& scores, const std::vector<std::string>& ids) {
  std::unordered_map<std::string_view, std::size_t> row_of;
  row_of.reserve(scores.ids.size());
  for (std::size_t i = 0; i < scores.ids.size(); ++i) row_of.emplace(scores.ids[i], i);
  ScoreMatrix out{ids, scores.taxonomy, RealMatrix(ids.size(), scores.taxonomy.size())};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto it = row_of.find(ids[i]);
    if (it == row_of.end()) fail(ErrorKind::kInvalidInput, "no score row for id '" + ids[i] + "'");
    const auto src = scores.values.row(it->second);
    std::copy(src.begin(), src.end(), out.values.row(i).begin());
  }
  return out;
}

Corpus adapt_goemotions(std::istream& in) {
  const auto& tax = taxonomies::goemotions28();
  Corpus corpus{tax, {}, Split::kUnsplit};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto ctx = "goemotions:" + std::to_string(line_no);
    const auto fields = split(line, '\t');
    if (fields.size() < 3) fail(ErrorKind::kInvalidInput, ctx + ": expected text<TAB>labels<TAB>id");
    Sample s;
    s.text = text::nfc(fields[0]);
    s.id = fields[2];
    s.lang = "en";
    for (const auto& tok : split(fields[1], ',')) {
      int id = -1;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || id < 0 ||
          static_cast<std::size_t>(id) >= tax.size()) {
        fail(ErrorKind::kInvalidInput, ctx + ": label id '" + tok + "' out of range");
      }
      s.labels.push_back(tax.label(static_cast<std::size_t>(id)));
    }
    corpus.samples.push_back(std::move(s));
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus adapt_goemotions(const std::filesystem::path& path) {
  auto in = open_in(path);
  return adapt_goemotions(in);
}

Corpus adapt_semeval(std::istream& in, std::string lang) {
  const auto& tax = taxonomies::semeval11();
  Corpus corpus{tax, {}, Split::kUnsplit};
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kInvalidInput, "semeval file is empty");
  strip_cr(line);
  const auto header = split(line, '\t');
  if (header.size() != 2 + tax.size()) {
    fail(ErrorKind::kInvalidInput, "semeval header must have id, tweet and 11 label columns");
  }
  std::vector<std::size_t> column_label(tax.size());
  for (std::size_t c = 0; c < tax.size(); ++c) {
    const auto idx = tax.index_of(header[c + 2]);
    if (!idx) fail(ErrorKind::kInvalidInput, "semeval header has unknown column '" + header[c + 2] + "'");
    column_label[c] = *idx;
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto ctx = "semeval:" + std::to_string(line_no);
    const auto fields = split(line, '\t');
    if (fields.size() != header.size()) {
      fail(ErrorKind::kInvalidInput, ctx + ": expected " + std::to_string(header.size()) + " fields");
    }
    Sample s;
    s.id = fields[0];
    s.text = text::nfc(fields[1]);
    s.lang = lang;
    for (std::size_t c = 0; c < tax.size(); ++c) {
      const auto& v = fields[c + 2];
      if (v == "1") {
        s.labels.push_back(tax.label(column_label[c]));
      } else if (v != "0") {
        fail(ErrorKind::kInvalidInput, ctx + ": non-binary indicator '" + v + "' for " +
                                           tax.label(column_label[c]));
      }
    }
    s.empty_gold = s.labels.empty();
    corpus.samples.push_back(std::move(s));
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus adapt_semeval(const std::filesystem::path& path, std::string lang) {
  auto in = open_in(path);
  return adapt_semeval(in, std::move(lang));
}

std::size_t drop_empty_gold(Corpus& corpus) {
  const auto before = corpus.samples.size();
  std::erase_if(corpus.samples, [](const Sample& s) { return s.empty_gold; });
  return before - corpus.samples.size();
}

}  // namespace emotk
