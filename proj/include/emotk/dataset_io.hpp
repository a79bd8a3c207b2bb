#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "emotk/label_space.hpp"
#include "emotk/matrix.hpp"

namespace emotk {

enum class Script { kNative, kLatin };
std::string_view to_string(Script script);
Script parse_script(std::string_view text);

enum class Split { kTrain, kValidation, kTest, kUnsplit };
std::string_view to_string(Split split);

struct Sample {
  std::string id;
  std::string lang;
  std::string text;                 // NFC
  std::vector<std::string> labels;  // taxonomy order once inside a Corpus
  Script script = Script::kNative;
  /// Benchmark rows whose indicator columns were all zero. Only the adapters
  /// produce these; everywhere else an empty label set is an error.
  bool empty_gold = false;
};

struct Corpus {
  EmotionTaxonomy taxonomy;
  std::vector<Sample> samples;
  Split split = Split::kUnsplit;

  std::size_t size() const noexcept { return samples.size(); }
};

/// Checks every Corpus invariant and canonicalizes label order.
/// Throws kInvalidInput naming the offending row.
void validate_corpus(Corpus& corpus);

/// One JSON object per line: id, lang, text, labels, optional script.
Corpus read_corpus(const std::filesystem::path& path, const EmotionTaxonomy& taxonomy);
Corpus read_corpus(std::istream& in, const EmotionTaxonomy& taxonomy,
                   std::string_view source_name = "<stream>");

void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

/// Rows aligned by id to a taxonomy's columns.
struct GoldMatrix {
  std::vector<std::string> ids;
  EmotionTaxonomy taxonomy;
  BinaryMatrix values;
};

struct ScoreMatrix {
  std::vector<std::string> ids;
  EmotionTaxonomy taxonomy;
  RealMatrix values;
};

GoldMatrix binarize(const Corpus& corpus);

/// CSV (header `id,<label>,...`, any column order) or JSONL
/// (`{"id": ..., "scores": {"<label>": p, ...}}`), chosen by extension.
ScoreMatrix read_scores(const std::filesystem::path& path, const EmotionTaxonomy& taxonomy);
ScoreMatrix read_scores_csv(std::istream& in, const EmotionTaxonomy& taxonomy);
ScoreMatrix read_scores_jsonl(std::istream& in, const EmotionTaxonomy& taxonomy);

void write_scores_csv(std::ostream& out, const ScoreMatrix& scores);

/// Reorders score rows to follow `ids`. Fails naming the first id without a
/// score row.
ScoreMatrix align_scores(const ScoreMatrix& scores, const std::vector<std::string>& ids);

/// GoEmotions release layout: text<TAB>comma-separated label ids<TAB>id.
Corpus adapt_goemotions(const std::filesystem::path& path);
Corpus adapt_goemotions(std::istream& in);

/// SemEval-2018 E-c layout: header row, then id<TAB>tweet<TAB>11 indicators.
Corpus adapt_semeval(const std::filesystem::path& path, std::string lang);
Corpus adapt_semeval(std::istream& in, std::string lang);

/// Samples flagged empty_gold are removed (the default for metric rows).
/// Returns the number removed.
std::size_t drop_empty_gold(Corpus& corpus);

}  // namespace emotk
