#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "emotk/dataset_io.hpp"

namespace emotk {

// ------------------------------------------------------------------ split

struct SplitCounts {
  std::size_t validation = 500;
  std::size_t test = 500;
  /// Unset: everything left over goes to train.
  std::optional<std::size_t> train;
};

struct SplitSpec {
  SplitCounts defaults;
  std::map<std::string, SplitCounts> per_language;  // overrides

  const SplitCounts& counts_for(const std::string& lang) const {
    const auto it = per_language.find(lang);
    return it == per_language.end() ? defaults : it->second;
  }
};

struct SplitResult {
  Corpus train;
  Corpus validation;
  Corpus test;
};

/// Per language: seeded shuffle, first `validation` rows to validation, next
/// `test` to test, remainder (or `train` rows) to train. Each output keeps the
/// input's row order. Throws naming the first language that is too small.
SplitResult stratified_split(const Corpus& corpus, const SplitSpec& spec, std::uint64_t seed);

// ------------------------------------------------------------------ stats

struct LengthStats {
  std::size_t median = 0;  // lower median, code points
  std::size_t p95 = 0;     // nearest rank
  std::size_t min = 0;
  std::size_t max = 0;
};

struct CorpusStats {
  std::size_t n_samples = 0;
  std::uint64_t label_instances = 0;
  std::vector<std::pair<std::string, std::uint64_t>> class_counts;  // taxonomy order
  std::vector<std::pair<std::string, double>> class_shares;         // count / n_samples
  std::map<std::size_t, std::size_t> cardinality_histogram;
  double mean_cardinality = 0.0;
  std::map<std::string, std::size_t> per_language;
  std::map<std::string, double> romanized_share;  // eligible languages only
  LengthStats length;
  std::size_t empty_gold_rows = 0;
};

/// `eligible` languages get a romanized share; empty means every language
/// present in the corpus.
CorpusStats corpus_stats(const Corpus& corpus, const std::set<std::string>& eligible = {});

/// Class-distribution JSON: shares sorted by count descending, in percent.
nlohmann::ordered_json to_json(const CorpusStats& stats);

}  // namespace emotk
