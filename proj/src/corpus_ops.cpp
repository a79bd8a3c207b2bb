#include "emotk/corpus_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emotk/rng.hpp"
#include "emotk/text.hpp"

namespace emotk {

SplitResult stratified_split(const Corpus& corpus, const SplitSpec& spec, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> rows_by_lang;
  for (std::size_t i = 0; i < corpus.size(); ++i) rows_by_lang[corpus.samples[i].lang].push_back(i);

  std::vector<Split> assignment(corpus.size(), Split::kUnsplit);
  for (auto& [lang, rows] : rows_by_lang) {
    const auto& counts = spec.counts_for(lang);
    const auto needed = counts.validation + counts.test + counts.train.value_or(0);
    if (rows.size() < needed) {
      fail(ErrorKind::kInvalidInput, "language '" + lang + "' has " + std::to_string(rows.size()) +
                                         " rows, split needs " + std::to_string(needed));
    }
    Rng rng(derive_seed(seed, "split:" + lang));
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
    const auto train_end = counts.train ? needed : rows.size();
    for (std::size_t k = 0; k < train_end; ++k) {
      assignment[rows[k]] = k < counts.validation              ? Split::kValidation
                            : k < counts.validation + counts.test ? Split::kTest
                                                                  : Split::kTrain;
    }
  }

  SplitResult out{Corpus{corpus.taxonomy, {}, Split::kTrain},
                  Corpus{corpus.taxonomy, {}, Split::kValidation},
                  Corpus{corpus.taxonomy, {}, Split::kTest}};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    switch (assignment[i]) {
      case Split::kTrain: out.train.samples.push_back(corpus.samples[i]); break;
      case Split::kValidation: out.validation.samples.push_back(corpus.samples[i]); break;
      case Split::kTest: out.test.samples.push_back(corpus.samples[i]); break;
      case Split::kUnsplit: break;
    }
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus, const std::set<std::string>& eligible) {
  CorpusStats st;
  st.n_samples = corpus.size();
  std::vector<std::uint64_t> counts(corpus.taxonomy.size(), 0);
  std::vector<std::size_t> lengths;
  lengths.reserve(corpus.size());
  std::map<std::string, std::size_t> latin;
  for (const auto& s : corpus.samples) {
    for (const auto& l : s.labels) {
      const auto idx = corpus.taxonomy.index_of(l);
      if (!idx) fail(ErrorKind::kInvalidInput, "id '" + s.id + "': unknown label '" + l + "'");
      ++counts[*idx];
    }
    st.label_instances += s.labels.size();
    ++st.cardinality_histogram[s.labels.size()];
    ++st.per_language[s.lang];
    if (s.script == Script::kLatin) ++latin[s.lang];
    st.empty_gold_rows += s.empty_gold;
    lengths.push_back(text::char_length(s.text));
  }
  const double n = static_cast<double>(std::max<std::size_t>(st.n_samples, 1));
  for (std::size_t j = 0; j < counts.size(); ++j) {
    st.class_counts.emplace_back(corpus.taxonomy.label(j), counts[j]);
    st.class_shares.emplace_back(corpus.taxonomy.label(j), static_cast<double>(counts[j]) / n);
  }
  st.mean_cardinality = static_cast<double>(st.label_instances) / n;
  for (const auto& [lang, total] : st.per_language) {
    if (!eligible.empty() && !eligible.contains(lang)) continue;
    st.romanized_share[lang] = static_cast<double>(latin[lang]) / static_cast<double>(total);
  }
  if (!lengths.empty()) {
    std::sort(lengths.begin(), lengths.end());
    const auto m = lengths.size();
    st.length.median = lengths[(m - 1) / 2];
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(m)));
    st.length.p95 = lengths[std::max<std::size_t>(rank, 1) - 1];
    st.length.min = lengths.front();
    st.length.max = lengths.back();
  }
  return st;
}

nlohmann::ordered_json to_json(const CorpusStats& st) {
  nlohmann::ordered_json j;
  j["n_samples"] = st.n_samples;
  j["label_instances"] = st.label_instances;
  j["mean_cardinality"] = st.mean_cardinality;
  auto order = st.class_counts;
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  auto& table = j["class_distribution"] = nlohmann::ordered_json::array();
  for (const auto& [label, count] : order) {
    const double share = st.n_samples == 0 ? 0.0
                                           : 100.0 * static_cast<double>(count) /
                                                 static_cast<double>(st.n_samples);
    table.push_back({{"label", label}, {"count", count}, {"share_pct", share}});
  }
  auto& hist = j["cardinality_histogram"] = nlohmann::ordered_json::object();
  for (const auto& [k, c] : st.cardinality_histogram) hist[std::to_string(k)] = c;
  j["per_language"] = st.per_language;
  j["romanized_share"] = st.romanized_share;
  j["length_chars"] = {{"median", st.length.median},
                       {"p95", st.length.p95},
                       {"min", st.length.min},
                       {"max", st.length.max}};
  j["empty_gold_rows"] = st.empty_gold_rows;
  return j;
}

}  // namespace emotk
