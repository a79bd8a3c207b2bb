#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emotk/dataset_io.hpp"
#include "emotk/dedup.hpp"

namespace emotk {

enum class DedupScope { kPerLanguage, kGlobal };

struct FilterConfig {
  double min_ttr = 0.4;
  std::size_t min_tokens = 20;
  dedup::Params dedup;
  DedupScope dedup_scope = DedupScope::kPerLanguage;
  double min_aux_score = 0.5;
  int scorer_retries = 3;
};

struct FilterReason {
  enum class Kind { kLowLexicalDiversity, kNearDuplicate, kLabelInconsistent, kScriptMismatch };
  Kind kind;
  std::string of_id;       // near duplicate: the kept sample it duplicates
  std::string label;       // label inconsistent: the failing gold label
  double value = 0.0;      // TTR, Jaccard or aux score
};

std::string_view to_string(FilterReason::Kind kind);

struct FilterVerdict {
  std::string id;
  bool passed = true;
  std::vector<FilterReason> reasons;

  void reject(FilterReason reason) {
    passed = false;
    reasons.push_back(std::move(reason));
  }
};

nlohmann::ordered_json to_json(const FilterVerdict& verdict);
void write_audit(std::ostream& out, const std::vector<FilterVerdict>& verdicts);

struct LexicalDiversity {
  bool passed;
  double ttr;
  std::size_t tokens;
};

/// Fails iff the text has at least `min_tokens` tokens and a type-token
/// ratio below `min_ttr`.
LexicalDiversity filter_lexical_diversity(std::string_view text, double min_ttr,
                                          std::size_t min_tokens);

/// One verdict per sample, in corpus order. Samples are compared against
/// earlier samples that survived; the later one of a pair is rejected.
std::vector<FilterVerdict> filter_near_duplicates(const Corpus& corpus, const dedup::Params& params,
                                                  DedupScope scope = DedupScope::kPerLanguage);

/// Auxiliary classifier used for label/text consistency. Returns one score in
/// [0,1] per taxonomy label. May throw; callers retry.
class AuxScorer {
 public:
  virtual ~AuxScorer() = default;
  virtual std::vector<double> score(const Sample& sample, const EmotionTaxonomy& taxonomy) = 0;
};

/// Scores from a callback; handy for tests and fixed-score fixtures.
class CallbackScorer final : public AuxScorer {
 public:
  using Fn = std::function<std::vector<double>(const Sample&, const EmotionTaxonomy&)>;
  explicit CallbackScorer(Fn fn) : fn_(std::move(fn)) {}
  std::vector<double> score(const Sample& s, const EmotionTaxonomy& t) override { return fn_(s, t); }

 private:
  Fn fn_;
};

struct LabelConsistency {
  bool passed = true;
  std::vector<double> scores;              // per taxonomy label
  std::vector<std::string> failing_labels; // gold labels scored below min
};

LabelConsistency filter_label_consistency(const Sample& sample, const EmotionTaxonomy& taxonomy,
                                          AuxScorer& scorer, double min_score, int retries = 3);

struct FilterOutcome {
  Corpus kept;
  std::vector<FilterVerdict> verdicts;  // every input sample, input order
};

/// Lexical diversity, optional label consistency, then near-duplicate removal
/// among the survivors.
FilterOutcome run_filters(const Corpus& corpus, const FilterConfig& config, AuxScorer* scorer = nullptr);

}  // namespace emotk
