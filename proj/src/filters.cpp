#include "emotk/filters.hpp"

#include <map>
#include <ostream>
#include <unordered_set>

#include "emotk/text.hpp"

namespace emotk {

std::string_view to_string(FilterReason::Kind kind) {
  switch (kind) {
    case FilterReason::Kind::kLowLexicalDiversity: return "low_lexical_diversity";
    case FilterReason::Kind::kNearDuplicate: return "near_duplicate";
    case FilterReason::Kind::kLabelInconsistent: return "label_inconsistent";
    case FilterReason::Kind::kScriptMismatch: return "script_mismatch";
  }
  return "unknown";
}

nlohmann::ordered_json to_json(const FilterVerdict& v) {
  nlohmann::ordered_json j;
  j["id"] = v.id;
  j["passed"] = v.passed;
  auto& reasons = j["reasons"] = nlohmann::ordered_json::array();
  for (const auto& r : v.reasons) {
    nlohmann::ordered_json rj;
    rj["reason"] = to_string(r.kind);
    switch (r.kind) {
      case FilterReason::Kind::kLowLexicalDiversity: rj["ttr"] = r.value; break;
      case FilterReason::Kind::kNearDuplicate:
        rj["of_id"] = r.of_id;
        rj["jaccard"] = r.value;
        break;
      case FilterReason::Kind::kLabelInconsistent:
        rj["label"] = r.label;
        rj["aux_score"] = r.value;
        break;
      case FilterReason::Kind::kScriptMismatch: break;
    }
    reasons.push_back(std::move(rj));
  }
  return j;
}

void write_audit(std::ostream& out, const std::vector<FilterVerdict>& verdicts) {
  for (const auto& v : verdicts) out << to_json(v).dump() << '\n';
}

LexicalDiversity filter_lexical_diversity(std::string_view text, double min_ttr,
                                          std::size_t min_tokens) {
  const auto tokens = text::word_tokens(text);
  const std::unordered_set<std::string> distinct(tokens.begin(), tokens.end());
  const double ttr = tokens.empty() ? 1.0
                                    : static_cast<double>(distinct.size()) /
                                          static_cast<double>(tokens.size());
  const bool fails = tokens.size() >= min_tokens && ttr < min_ttr;
  return {!fails, ttr, tokens.size()};
}

std::vector<FilterVerdict> filter_near_duplicates(const Corpus& corpus, const dedup::Params& params,
                                                  DedupScope scope) {
  std::vector<std::string_view> texts;
  texts.reserve(corpus.size());
  for (const auto& s : corpus.samples) texts.push_back(s.text);
  auto sketches = dedup::sketch_all(texts, params);

  std::vector<FilterVerdict> verdicts(corpus.size());
  // One index per scope group; insertion index -> corpus row.
  std::map<std::string, std::pair<dedup::NearDuplicateIndex, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus.samples[i];
    verdicts[i].id = s.id;
    const auto key = scope == DedupScope::kGlobal ? std::string() : s.lang;
    auto it = groups.find(key);
    if (it == groups.end()) {
      it = groups.emplace(key, std::make_pair(dedup::NearDuplicateIndex(params),
                                              std::vector<std::size_t>{})).first;
    }
    auto& [index, rows] = it->second;
    if (const auto match = index.query(sketches.shingles[i], sketches.signatures[i])) {
      verdicts[i].reject({FilterReason::Kind::kNearDuplicate,
                          corpus.samples[rows[match->doc]].id, {}, match->jaccard});
      continue;
    }
    index.add(std::move(sketches.shingles[i]), sketches.signatures[i]);
    rows.push_back(i);
  }
  return verdicts;
}

LabelConsistency filter_label_consistency(const Sample& sample, const EmotionTaxonomy& taxonomy,
                                          AuxScorer& scorer, double min_score, int retries) {
  LabelConsistency out;
  for (int attempt = 0;; ++attempt) {
    try {
      out.scores = scorer.score(sample, taxonomy);
      break;
    } catch (const std::exception& e) {
      if (attempt >= retries) {
        fail(ErrorKind::kGenerator, "auxiliary scorer failed for '" + sample.id + "': " + e.what());
      }
    }
  }
  if (out.scores.size() != taxonomy.size()) {
    fail(ErrorKind::kGenerator, "auxiliary scorer returned " + std::to_string(out.scores.size()) +
                                    " scores for " + std::to_string(taxonomy.size()) + " labels");
  }
  for (const auto& label : sample.labels) {
    const auto idx = taxonomy.index_of(label);
    if (!idx) fail(ErrorKind::kInvalidInput, "unknown label '" + label + "'");
    if (out.scores[*idx] < min_score) {
      out.passed = false;
      out.failing_labels.push_back(label);
    }
  }
  return out;
}

FilterOutcome run_filters(const Corpus& corpus, const FilterConfig& config, AuxScorer* scorer) {
  FilterOutcome out{Corpus{corpus.taxonomy, {}, corpus.split}, {}};
  out.verdicts.resize(corpus.size());

  Corpus survivors{corpus.taxonomy, {}, corpus.split};
  std::vector<std::size_t> survivor_rows;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus.samples[i];
    auto& v = out.verdicts[i];
    v.id = s.id;
    const auto lex = filter_lexical_diversity(s.text, config.min_ttr, config.min_tokens);
    if (!lex.passed) v.reject({FilterReason::Kind::kLowLexicalDiversity, {}, {}, lex.ttr});
    if (scorer != nullptr) {
      const auto lc = filter_label_consistency(s, corpus.taxonomy, *scorer, config.min_aux_score,
                                               config.scorer_retries);
      for (const auto& label : lc.failing_labels) {
        v.reject({FilterReason::Kind::kLabelInconsistent, {}, label,
                  lc.scores[*corpus.taxonomy.index_of(label)]});
      }
    }
    if (v.passed) {
      survivors.samples.push_back(s);
      survivor_rows.push_back(i);
    }
  }

  const auto dup = filter_near_duplicates(survivors, config.dedup, config.dedup_scope);
  for (std::size_t k = 0; k < dup.size(); ++k) {
    auto& v = out.verdicts[survivor_rows[k]];
    for (const auto& r : dup[k].reasons) v.reject(r);
    if (v.passed) out.kept.samples.push_back(survivors.samples[k]);
  }
  return out;
}

}  // namespace emotk
