#include "emotk/label_space.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>

namespace emotk {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

// Resolves each effective label to its column in `taxonomy`.
std::vector<std::size_t> resolve_columns(const std::vector<std::string>& labels,
                                         const EmotionTaxonomy& taxonomy,
                                         std::string_view role) {
  std::vector<std::size_t> columns;
  columns.reserve(labels.size());
  for (const auto& label : labels) {
    const auto idx = taxonomy.index_of(label);
    if (!idx) {
      fail(ErrorKind::kInvalidInput, "view label '" + label + "' missing from " +
                                         std::string(role) + " taxonomy '" +
                                         taxonomy.name() + "'");
    }
    columns.push_back(*idx);
  }
  return columns;
}

}  // namespace

std::string normalize_label(std::string_view label) {
  std::string out(trim(label));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
  });
  return out;
}

EmotionTaxonomy::EmotionTaxonomy(std::string name, const std::vector<std::string>& labels)
    : name_(std::move(name)) {
  if (labels.empty()) fail(ErrorKind::kInvalidInput, "taxonomy '" + name_ + "' is empty");
  std::unordered_set<std::string> seen;
  labels_.reserve(labels.size());
  for (const auto& raw : labels) {
    auto label = normalize_label(raw);
    if (label.empty()) fail(ErrorKind::kInvalidInput, "taxonomy '" + name_ + "' has an empty label");
    if (!seen.insert(label).second) {
      fail(ErrorKind::kInvalidInput, "taxonomy '" + name_ + "' has duplicate label '" + label + "'");
    }
    labels_.push_back(std::move(label));
  }
}

std::optional<std::size_t> EmotionTaxonomy::index_of(std::string_view label) const {
  const auto key = normalize_label(label);
  const auto it = std::find(labels_.begin(), labels_.end(), key);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

namespace taxonomies {

const EmotionTaxonomy& emotion11() {
  static const EmotionTaxonomy t("emotion11",
                                 {"anger", "contempt", "disgust", "fear", "frustration",
                                  "gratitude", "joy", "love", "neutral", "sadness", "surprise"});
  return t;
}

const EmotionTaxonomy& goemotions28() {
  static const EmotionTaxonomy t(
      "goemotions",
      {"admiration", "amusement", "anger", "annoyance", "approval", "caring", "confusion",
       "curiosity", "desire", "disappointment", "disapproval", "disgust", "embarrassment",
       "excitement", "fear", "gratitude", "grief", "joy", "love", "nervousness", "optimism",
       "pride", "realization", "relief", "remorse", "sadness", "surprise", "neutral"});
  return t;
}

const EmotionTaxonomy& semeval11() {
  static const EmotionTaxonomy t("semeval",
                                 {"anger", "anticipation", "disgust", "fear", "joy", "love",
                                  "optimism", "pessimism", "sadness", "surprise", "trust"});
  return t;
}

}  // namespace taxonomies

EmotionTaxonomy load_taxonomy(const std::filesystem::path& path, std::string name) {
  auto in = open_text(path);
  std::vector<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    labels.emplace_back(content);
  }
  if (name.empty()) name = path.stem().string();
  if (labels.empty()) fail(ErrorKind::kInvalidInput, "taxonomy file " + path.string() + " is empty");
  return EmotionTaxonomy(std::move(name), labels);
}

LabelMapping::LabelMapping(EmotionTaxonomy source, EmotionTaxonomy target,
                           const std::vector<Pair>& pairs, const std::set<std::string>& dropped)
    : source_(std::move(source)), target_(std::move(target)),
      column_map_(source_.size()) {
  std::vector<bool> mentioned(source_.size(), false);
  auto mark = [&](std::string_view label) {
    const auto idx = source_.index_of(label);
    if (!idx) {
      fail(ErrorKind::kInvalidInput, "mapping names unknown source label '" + std::string(label) + "'");
    }
    if (mentioned[*idx]) {
      fail(ErrorKind::kInvalidInput, "source label '" + source_.label(*idx) + "' mapped twice");
    }
    mentioned[*idx] = true;
    return *idx;
  };
  for (const auto& p : pairs) {
    const auto s = mark(p.source);
    const auto t = target_.index_of(p.target);
    if (!t) {
      fail(ErrorKind::kInvalidInput, "mapping names unknown target label '" + p.target + "'");
    }
    column_map_[s] = *t;
  }
  for (const auto& d : dropped) {
    const auto s = mark(d);
    dropped_.insert(source_.label(s));
  }
  for (std::size_t i = 0; i < mentioned.size(); ++i) {
    if (!mentioned[i]) {
      fail(ErrorKind::kInvalidInput, "source label '" + source_.label(i) +
                                         "' is neither mapped nor dropped");
    }
  }
}

LabelMapping LabelMapping::identity(const EmotionTaxonomy& taxonomy) {
  std::vector<Pair> pairs;
  for (const auto& l : taxonomy.labels()) pairs.push_back({l, l});
  return LabelMapping(taxonomy, taxonomy, pairs, {});
}

std::optional<std::string> LabelMapping::target_of(std::string_view source_label) const {
  const auto idx = source_.index_of(source_label);
  if (!idx) fail(ErrorKind::kInvalidInput, "unknown source label '" + std::string(source_label) + "'");
  const auto t = column_map_[*idx];
  if (!t) return std::nullopt;
  return target_.label(*t);
}

std::vector<std::string> LabelMapping::sources_of(std::string_view target_label) const {
  std::vector<std::string> out;
  const auto t = target_.index_of(target_label);
  if (!t) return out;
  for (std::size_t i = 0; i < column_map_.size(); ++i) {
    if (column_map_[i] == t) out.push_back(source_.label(i));
  }
  return out;
}

LabelMapping load_mapping(const std::filesystem::path& path, const EmotionTaxonomy& source,
                          const EmotionTaxonomy& target) {
  auto in = open_text(path);
  std::vector<LabelMapping::Pair> pairs;
  std::set<std::string> dropped;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto tab = content.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorKind::kInvalidInput, path.string() + ":" + std::to_string(line_no) +
                                         ": expected source<TAB>target");
    }
    const auto src = normalize_label(content.substr(0, tab));
    const auto dst = std::string(trim(content.substr(tab + 1)));
    // Duplicates are caught here (rather than in LabelMapping) so the error
    // carries a line number.
    if (!seen.insert(src).second) {
      fail(ErrorKind::kInvalidInput, path.string() + ":" + std::to_string(line_no) +
                                         ": source label '" + src + "' mapped twice");
    }
    if (dst == kDropMarker) {
      dropped.insert(src);
    } else {
      pairs.push_back({src, normalize_label(dst)});
    }
  }
  return LabelMapping(source, target, pairs, dropped);
}

ProjectedGold project_gold(const BinaryMatrix& gold, const LabelMapping& mapping) {
  if (gold.cols() != mapping.source().size()) {
    fail(ErrorKind::kInvalidInput, "gold has " + std::to_string(gold.cols()) +
                                       " columns, source taxonomy has " +
                                       std::to_string(mapping.source().size()));
  }
  ProjectedGold out{BinaryMatrix(gold.rows(), mapping.target().size(), 0), {}};
  for (std::size_t r = 0; r < gold.rows(); ++r) {
    const auto src = gold.row(r);
    auto dst = out.values.row(r);
    bool any = false;
    for (std::size_t c = 0; c < src.size(); ++c) {
      if (!src[c]) continue;
      if (const auto t = mapping.target_of(c)) {
        dst[*t] = 1;
        any = true;
      }
    }
    if (!any) out.empty_rows.push_back(r);
  }
  return out;
}

std::vector<std::string> intersect_taxonomies(const EmotionTaxonomy& a, const EmotionTaxonomy& b) {
  std::vector<std::string> out;
  for (const auto& l : a.labels()) {
    if (b.contains(l)) out.push_back(l);
  }
  return out;
}

std::string_view to_string(ViewKind kind) {
  return kind == ViewKind::kProjected ? "projected" : "intersection";
}

ViewKind parse_view_kind(std::string_view text) {
  const auto t = normalize_label(text);
  if (t == "projected") return ViewKind::kProjected;
  if (t == "intersection") return ViewKind::kIntersection;
  fail(ErrorKind::kUsage, "unknown label-space view '" + std::string(text) + "'");
}

LabelSpaceView LabelSpaceView::projected(const EmotionTaxonomy& target) {
  return {ViewKind::kProjected, target.labels()};
}

LabelSpaceView LabelSpaceView::intersection(const EmotionTaxonomy& target,
                                            const EmotionTaxonomy& benchmark) {
  return {ViewKind::kIntersection, intersect_taxonomies(target, benchmark)};
}

ViewResult apply_view(const BinaryMatrix& gold, const EmotionTaxonomy& gold_taxonomy,
                      const RealMatrix& scores, const EmotionTaxonomy& score_taxonomy,
                      const LabelSpaceView& view) {
  if (gold.rows() != scores.rows()) {
    fail(ErrorKind::kInvalidInput, "gold has " + std::to_string(gold.rows()) +
                                       " rows but scores have " + std::to_string(scores.rows()));
  }
  if (gold.cols() != gold_taxonomy.size() || scores.cols() != score_taxonomy.size()) {
    fail(ErrorKind::kInvalidInput, "matrix column count does not match its taxonomy");
  }
  if (view.effective_labels.empty()) {
    fail(ErrorKind::kInvalidInput, "label-space view has no labels");
  }
  const auto gold_cols = resolve_columns(view.effective_labels, gold_taxonomy, "gold");
  const auto score_cols = resolve_columns(view.effective_labels, score_taxonomy, "score");
  const std::size_t width = view.effective_labels.size();

  std::vector<std::size_t> kept;
  kept.reserve(gold.rows());
  for (std::size_t r = 0; r < gold.rows(); ++r) {
    if (view.kind == ViewKind::kIntersection) {
      const auto g = gold.row(r);
      const bool any = std::any_of(gold_cols.begin(), gold_cols.end(),
                                   [&](std::size_t c) { return g[c] != 0; });
      if (!any) continue;
    }
    kept.push_back(r);
  }

  ViewResult out{EmotionTaxonomy(std::string(to_string(view.kind)), view.effective_labels),
                 BinaryMatrix(kept.size(), width), RealMatrix(kept.size(), width),
                 std::move(kept)};
  for (std::size_t i = 0; i < out.kept_rows.size(); ++i) {
    const auto r = out.kept_rows[i];
    for (std::size_t c = 0; c < width; ++c) {
      out.gold(i, c) = gold(r, gold_cols[c]);
      out.scores(i, c) = scores(r, score_cols[c]);
    }
  }
  return out;
}

}  // namespace emotk
