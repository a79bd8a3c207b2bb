#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emotk/dataset_io.hpp"
#include "emotk/filters.hpp"
#include "emotk/rng.hpp"

namespace emotk {

struct LanguagePlan {
  std::string lang;
  std::size_t budget = 0;
  bool romanize = false;
  /// Prompt templates rotated across requests; empty means every template
  /// registered for the language.
  std::vector<std::string> template_ids;
};

enum class RomanizationScope { kPerLanguage, kCorpus };
std::string_view to_string(RomanizationScope s);
RomanizationScope parse_romanization_scope(std::string_view text);

struct GenerationSpec {
  std::vector<LanguagePlan> languages;
  EmotionTaxonomy taxonomy;
  std::array<double, 3> cardinality_mix{0.50, 0.35, 0.15};  // P(|labels| = 1, 2, 3)
  std::vector<double> label_marginals;                      // per taxonomy label
  std::uint64_t seed = 0;
  double min_romanized_share = 0.10;
  /// kPerLanguage: every eligible language meets the share on its own.
  /// kCorpus: the pooled eligible languages meet it; Latin slots are
  /// apportioned by budget (largest remainder).
  RomanizationScope romanization_scope = RomanizationScope::kPerLanguage;
  std::size_t max_length = 650;  // characters requested from the generator
  /// Attempt cap per language = budget * attempt_factor + 16.
  double attempt_factor = 4.0;
  int generator_retries = 3;
  FilterConfig filters;

  void validate() const;
  /// Number of Latin-script samples scheduled for each entry of `languages`.
  std::vector<std::size_t> latin_targets() const;

  /// 23 languages, per-language budget, reference class shares as marginals.
  static GenerationSpec reference(const EmotionTaxonomy& taxonomy, std::size_t budget_per_language,
                                  std::uint64_t seed);
};

/// Class shares of the reference training set, emotion11 order.
const std::map<std::string, double>& reference_class_shares();
/// Per-class counts of the reference training set.
const std::map<std::string, std::uint64_t>& reference_class_counts();

/// The reference corpus size two ways: the stated training-set size, and the
/// row count implied by the class table and the stated mean cardinality. The
/// two disagree (about 1.15M vs 585k); both are reported, neither is chosen.
struct ReferenceTotals {
  std::uint64_t label_instances;    // sum of the class counts
  double mean_cardinality;          // stated labels per sample
  std::uint64_t rows_implied;       // label_instances / mean_cardinality, rounded
  std::uint64_t rows_stated;        // 23 languages x 50k
};
ReferenceTotals reference_totals();
nlohmann::ordered_json to_json(const ReferenceTotals& totals);

GenerationSpec spec_from_json(const nlohmann::json& j, const EmotionTaxonomy& taxonomy);
nlohmann::ordered_json to_json(const GenerationSpec& spec);

/// Draws 1-3 labels: cardinality from the mix, then labels without
/// replacement with probability proportional to the (renormalized) marginals.
class LabelSetSampler {
 public:
  explicit LabelSetSampler(const GenerationSpec& spec);
  std::vector<std::size_t> draw_indices(Rng& rng) const;
  std::vector<std::string> draw(Rng& rng) const;

 private:
  const EmotionTaxonomy* taxonomy_;
  std::array<double, 3> mix_;
  std::vector<double> weights_;
};

std::vector<std::string> sample_label_set(const GenerationSpec& spec, Rng& rng);

// ---------------------------------------------------------------- prompts

struct LanguagePrompts {
  std::string lang;
  std::string language_name;
  std::string cultural_context;
  std::string romanization_directive;
  std::map<std::string, std::string> templates;  // id -> template text
};

/// Template directory: `_common.json` holds shared templates and directives,
/// `<lang>.json` holds per-language context and optional extra templates.
class PromptLibrary {
 public:
  static PromptLibrary load(const std::filesystem::path& dir);

  bool has_language(const std::string& lang) const { return languages_.contains(lang); }
  const LanguagePrompts& language(const std::string& lang) const;
  std::vector<std::string> template_ids(const std::string& lang) const;

  std::string render(const std::string& template_id, const std::string& lang,
                     const std::vector<std::string>& labels, Script script,
                     std::size_t max_length = 650) const;

 private:
  std::map<std::string, LanguagePrompts> languages_;
  std::string native_directive_;
  std::string latin_directive_;
};

/// Line embedded in every romanized prompt; generators may key on it.
inline constexpr std::string_view kRomanizedMarker = "[script: latin]";

// ------------------------------------------------------------- generators

/// Wire contract of the text-generation service.
struct GenerationRequest {
  std::string prompt;
  std::string lang;
  std::size_t max_length = 650;
  std::optional<std::uint64_t> seed;
};

nlohmann::ordered_json to_json(const GenerationRequest& request);

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  /// Must be safe to call concurrently.
  virtual std::string generate(const GenerationRequest& request) = 0;
};

/// Deterministic offline generator: pseudo-words in the language's script
/// (Latin when the prompt asks for romanized output), seeded by the request.
class MockGenerator final : public TextGenerator {
 public:
  std::string generate(const GenerationRequest& request) override;
};

/// POSTs the request as JSON to an HTTP endpoint and reads {"text": ...}.
class HttpGenerator final : public TextGenerator {
 public:
  /// `url` like http://host:port/generate. Empty token disables auth.
  HttpGenerator(std::string url, std::string token, int timeout_seconds = 60);
  /// Reads EMOTK_GENERATOR_URL and EMOTK_GENERATOR_TOKEN.
  static HttpGenerator from_env();

  std::string generate(const GenerationRequest& request) override;

 private:
  std::string base_;
  std::string path_;
  std::string token_;
  int timeout_seconds_;
};

struct LanguageRunStats {
  std::string lang;
  std::size_t accepted = 0;
  std::size_t attempts = 0;
  std::size_t latin = 0;
  std::map<std::string, std::size_t> rejections;  // reason -> count
};

struct GenerationOutcome {
  Corpus corpus;  // sorted by (lang, id)
  std::vector<FilterVerdict> audit;
  std::vector<LanguageRunStats> languages;
};

/// Generates until each language's filtered yield reaches its budget.
/// Languages run on `workers` threads with independent seeded substreams, so
/// the output does not depend on the worker count.
GenerationOutcome generate_batch(const GenerationSpec& spec, const PromptLibrary& prompts,
                                 TextGenerator& generator, AuxScorer* scorer = nullptr,
                                 int workers = 1);

}  // namespace emotk
