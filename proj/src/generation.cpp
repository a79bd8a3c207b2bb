#include "emotk/generation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numeric>
#include <set>

#include <omp.h>
#include <unicode/uchar.h>

#include <httplib.h>

#include "emotk/languages.hpp"
#include "emotk/text.hpp"

namespace emotk {

namespace {

using json = nlohmann::json;

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidInput, path.string() + ": " + e.what());
  }
}

std::string padded(std::size_t n, int width) {
  auto s = std::to_string(n);
  return s.size() >= static_cast<std::size_t>(width) ? s
                                                     : std::string(width - s.size(), '0') + s;
}

}  // namespace

// ------------------------------------------------------------------- spec

const std::map<std::string, std::uint64_t>& reference_class_counts() {
  static const std::map<std::string, std::uint64_t> counts{
      {"sadness", 111059}, {"anger", 107058},    {"frustration", 104456}, {"surprise", 99942},
      {"disgust", 92825},  {"love", 84870},      {"fear", 80464},         {"contempt", 80447},
      {"gratitude", 78812}, {"joy", 78481},      {"neutral", 46728}};
  return counts;
}

const std::map<std::string, double>& reference_class_shares() {
  static const std::map<std::string, double> shares{
      {"sadness", 0.190},  {"anger", 0.183},    {"frustration", 0.179}, {"surprise", 0.171},
      {"disgust", 0.159},  {"love", 0.145},     {"fear", 0.138},        {"contempt", 0.138},
      {"gratitude", 0.135}, {"joy", 0.134},     {"neutral", 0.080}};
  return shares;
}

ReferenceTotals reference_totals() {
  std::uint64_t instances = 0;
  for (const auto& [_, c] : reference_class_counts()) instances += c;
  constexpr double kMean = 1.65;
  return {instances, kMean, static_cast<std::uint64_t>(std::llround(static_cast<double>(instances) / kMean)),
          23 * 50000};
}

nlohmann::ordered_json to_json(const ReferenceTotals& t) {
  nlohmann::ordered_json j;
  j["label_instances"] = t.label_instances;
  j["mean_cardinality"] = t.mean_cardinality;
  j["rows_implied"] = t.rows_implied;
  j["rows_stated"] = t.rows_stated;
  return j;
}

std::string_view to_string(RomanizationScope s) {
  return s == RomanizationScope::kCorpus ? "corpus" : "per_language";
}

RomanizationScope parse_romanization_scope(std::string_view text) {
  if (text == "per_language") return RomanizationScope::kPerLanguage;
  if (text == "corpus") return RomanizationScope::kCorpus;
  fail(ErrorKind::kInvalidInput, "unknown romanization scope '" + std::string(text) + "'");
}

std::vector<std::size_t> GenerationSpec::latin_targets() const {
  const auto quota = [&](std::size_t n) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * min_romanized_share - 1e-9));
  };
  std::vector<std::size_t> out(languages.size(), 0);
  if (romanization_scope == RomanizationScope::kPerLanguage) {
    for (std::size_t i = 0; i < languages.size(); ++i) {
      if (languages[i].romanize) out[i] = quota(languages[i].budget);
    }
    return out;
  }
  std::size_t pooled = 0;
  for (const auto& p : languages) pooled += p.romanize ? p.budget : 0;
  if (pooled == 0) return out;
  const auto total = quota(pooled);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < languages.size(); ++i) {
    if (!languages[i].romanize) continue;
    const double exact = static_cast<double>(total) * static_cast<double>(languages[i].budget) /
                         static_cast<double>(pooled);
    out[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[remainders[k].second];
  return out;
}

void GenerationSpec::validate() const {
  if (languages.empty()) fail(ErrorKind::kInvalidInput, "generation spec has no languages");
  std::set<std::string> seen;
  for (const auto& l : languages) {
    if (l.lang.empty()) fail(ErrorKind::kInvalidInput, "language plan without a code");
    if (!seen.insert(l.lang).second) fail(ErrorKind::kInvalidInput, "language '" + l.lang + "' listed twice");
    if (l.budget == 0) fail(ErrorKind::kInvalidInput, "language '" + l.lang + "' has zero budget");
  }
  double total = 0.0;
  for (const double p : cardinality_mix) {
    if (p < 0.0) fail(ErrorKind::kInvalidInput, "negative cardinality probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorKind::kInvalidInput, "cardinality mix must sum to 1");
  for (std::size_t k = 0; k < cardinality_mix.size(); ++k) {
    if (cardinality_mix[k] > 0.0 && k + 1 > taxonomy.size()) {
      fail(ErrorKind::kInvalidInput, "cardinality " + std::to_string(k + 1) + " exceeds taxonomy size");
    }
  }
  if (label_marginals.size() != taxonomy.size()) {
    fail(ErrorKind::kInvalidInput, "label marginals must cover every taxonomy label");
  }
  for (const double m : label_marginals) {
    if (!(m > 0.0 && m < 1.0)) fail(ErrorKind::kInvalidInput, "label marginals must lie in (0,1)");
  }
  if (!(min_romanized_share >= 0.0 && min_romanized_share <= 1.0)) {
    fail(ErrorKind::kInvalidInput, "romanized share must lie in [0,1]");
  }
  if (!(attempt_factor >= 1.0)) fail(ErrorKind::kInvalidInput, "attempt factor must be >= 1");
}

GenerationSpec GenerationSpec::reference(const EmotionTaxonomy& taxonomy,
                                         std::size_t budget_per_language, std::uint64_t seed) {
  GenerationSpec spec;
  spec.taxonomy = taxonomy;
  spec.seed = seed;
  for (const auto& info : corpus_languages()) {
    spec.languages.push_back({std::string(info.code), budget_per_language,
                              info.romanization_eligible, {}});
  }
  const auto& shares = reference_class_shares();
  for (const auto& label : taxonomy.labels()) {
    const auto it = shares.find(label);
    spec.label_marginals.push_back(it == shares.end() ? 1.0 / static_cast<double>(taxonomy.size())
                                                      : it->second);
  }
  return spec;
}

GenerationSpec spec_from_json(const json& j, const EmotionTaxonomy& taxonomy) {
  try {
    const auto seed = j.value("seed", std::uint64_t{0});
    GenerationSpec spec;
    if (j.contains("languages") && j["languages"].is_array()) {
      spec = GenerationSpec::reference(taxonomy, 1, seed);
      spec.languages.clear();
      for (const auto& l : j["languages"]) {
        LanguagePlan plan;
        plan.lang = l.at("lang").get<std::string>();
        plan.budget = l.at("budget").get<std::size_t>();
        const auto info = find_language(plan.lang);
        plan.romanize = l.value("romanize", info ? info->romanization_eligible : false);
        plan.template_ids = l.value("templates", std::vector<std::string>{});
        spec.languages.push_back(std::move(plan));
      }
    } else {
      spec = GenerationSpec::reference(taxonomy, j.value("budget_per_language", std::size_t{50000}), seed);
      if (j.contains("languages")) {
        const auto subset = j["languages"].get<std::string>();
        if (subset != "reference") fail(ErrorKind::kInvalidInput, "languages must be a list or \"reference\"");
      }
    }
    if (j.contains("cardinality_mix")) {
      const auto mix = j["cardinality_mix"].get<std::vector<double>>();
      if (mix.size() != 3) fail(ErrorKind::kInvalidInput, "cardinality_mix needs three entries");
      std::copy(mix.begin(), mix.end(), spec.cardinality_mix.begin());
    }
    if (j.contains("label_marginals")) {
      const auto& m = j["label_marginals"];
      for (std::size_t i = 0; i < taxonomy.size(); ++i) {
        if (!m.contains(taxonomy.label(i))) {
          fail(ErrorKind::kInvalidInput, "label_marginals lacks '" + taxonomy.label(i) + "'");
        }
        spec.label_marginals[i] = m[taxonomy.label(i)].get<double>();
      }
    }
    spec.min_romanized_share = j.value("min_romanized_share", spec.min_romanized_share);
    if (j.contains("romanization_scope")) {
      spec.romanization_scope = parse_romanization_scope(j["romanization_scope"].get<std::string>());
    }
    spec.max_length = j.value("max_length", spec.max_length);
    spec.attempt_factor = j.value("attempt_factor", spec.attempt_factor);
    spec.generator_retries = j.value("generator_retries", spec.generator_retries);
    if (j.contains("filters")) {
      const auto& f = j["filters"];
      auto& c = spec.filters;
      c.min_ttr = f.value("min_ttr", c.min_ttr);
      c.min_tokens = f.value("min_tokens", c.min_tokens);
      c.min_aux_score = f.value("min_aux_score", c.min_aux_score);
      c.dedup.shingle_size = f.value("shingle_size", c.dedup.shingle_size);
      c.dedup.threshold = f.value("dup_threshold", c.dedup.threshold);
      c.dedup.bands = f.value("bands", c.dedup.bands);
      c.dedup.rows = f.value("rows", c.dedup.rows);
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidInput, std::string("generation spec: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const GenerationSpec& spec) {
  nlohmann::ordered_json j;
  j["seed"] = spec.seed;
  j["cardinality_mix"] = spec.cardinality_mix;
  auto& m = j["label_marginals"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < spec.taxonomy.size(); ++i) m[spec.taxonomy.label(i)] = spec.label_marginals[i];
  j["min_romanized_share"] = spec.min_romanized_share;
  j["romanization_scope"] = to_string(spec.romanization_scope);
  j["max_length"] = spec.max_length;
  j["attempt_factor"] = spec.attempt_factor;
  auto& langs = j["languages"] = nlohmann::ordered_json::array();
  for (const auto& l : spec.languages) {
    langs.push_back({{"lang", l.lang}, {"budget", l.budget}, {"romanize", l.romanize},
                     {"templates", l.template_ids}});
  }
  j["filters"] = {{"min_ttr", spec.filters.min_ttr},
                  {"min_tokens", spec.filters.min_tokens},
                  {"min_aux_score", spec.filters.min_aux_score},
                  {"shingle_size", spec.filters.dedup.shingle_size},
                  {"dup_threshold", spec.filters.dedup.threshold},
                  {"bands", spec.filters.dedup.bands},
                  {"rows", spec.filters.dedup.rows}};
  return j;
}

// ---------------------------------------------------------------- sampler

LabelSetSampler::LabelSetSampler(const GenerationSpec& spec)
    : taxonomy_(&spec.taxonomy), mix_(spec.cardinality_mix), weights_(spec.label_marginals) {
  if (weights_.size() != taxonomy_->size()) {
    fail(ErrorKind::kInvalidInput, "label marginals must cover every taxonomy label");
  }
}

std::vector<std::size_t> LabelSetSampler::draw_indices(Rng& rng) const {
  const double u = rng.uniform();
  std::size_t k = 1;
  double acc = mix_[0];
  while (k < mix_.size() && u >= acc) acc += mix_[k++];
  k = std::min(k, weights_.size());

  std::vector<double> w = weights_;
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t draw = 0; draw < k; ++draw) {
    double total = 0.0;
    for (const double x : w) total += x;
    double target = rng.uniform() * total;
    std::size_t choice = w.size();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) continue;
      choice = i;  // last positive weight absorbs rounding at the top end
      if (target < w[i]) break;
      target -= w[i];
    }
    picked.push_back(choice);
    w[choice] = 0.0;
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<std::string> LabelSetSampler::draw(Rng& rng) const {
  std::vector<std::string> out;
  for (const auto i : draw_indices(rng)) out.push_back(taxonomy_->label(i));
  return out;
}

std::vector<std::string> sample_label_set(const GenerationSpec& spec, Rng& rng) {
  return LabelSetSampler(spec).draw(rng);
}

// ---------------------------------------------------------------- prompts

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
  PromptLibrary lib;
  const auto common = read_json_file(dir / "_common.json");
  std::map<std::string, std::string> shared;
  try {
    shared = common.at("templates").get<std::map<std::string, std::string>>();
    lib.native_directive_ = common.at("native_directive").get<std::string>();
    lib.latin_directive_ = common.at("latin_directive").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidInput, "_common.json: " + std::string(e.what()));
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".json" && name != "_common.json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const auto j = read_json_file(path);
    LanguagePrompts p;
    try {
      p.lang = j.at("lang").get<std::string>();
      p.language_name = j.at("language_name").get<std::string>();
      p.cultural_context = j.at("cultural_context").get<std::string>();
      p.romanization_directive = j.value("romanization_directive", std::string());
      p.templates = shared;
      if (j.contains("templates")) {
        for (const auto& [id, t] : j["templates"].items()) p.templates[id] = t.get<std::string>();
      }
    } catch (const json::exception& e) {
      fail(ErrorKind::kInvalidInput, path.string() + ": " + e.what());
    }
    lib.languages_[p.lang] = std::move(p);
  }
  return lib;
}

const LanguagePrompts& PromptLibrary::language(const std::string& lang) const {
  const auto it = languages_.find(lang);
  if (it == languages_.end()) fail(ErrorKind::kInvalidInput, "no prompt templates for language '" + lang + "'");
  return it->second;
}

std::vector<std::string> PromptLibrary::template_ids(const std::string& lang) const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : language(lang).templates) ids.push_back(id);
  return ids;
}

std::string PromptLibrary::render(const std::string& template_id, const std::string& lang,
                                  const std::vector<std::string>& labels, Script script,
                                  std::size_t max_length) const {
  const auto& p = language(lang);
  const auto it = p.templates.find(template_id);
  if (it == p.templates.end()) {
    fail(ErrorKind::kInvalidInput, "unknown prompt template '" + template_id + "' for '" + lang + "'");
  }
  std::string directive;
  if (script == Script::kLatin) {
    directive = std::string(kRomanizedMarker) + " " + latin_directive_;
    if (!p.romanization_directive.empty()) directive += " " + p.romanization_directive;
  } else {
    directive = "[script: native] " + native_directive_;
  }
  std::string out = it->second;
  replace_all(out, "{script_directive}", directive);
  replace_all(out, "{cultural_context}", p.cultural_context);
  replace_all(out, "{language}", p.language_name);
  replace_all(out, "{labels}", join(labels, ", "));
  replace_all(out, "{label_count}", std::to_string(labels.size()));
  replace_all(out, "{max_length}", std::to_string(max_length));
  return out;
}

// ------------------------------------------------------------- generators

nlohmann::ordered_json to_json(const GenerationRequest& r) {
  nlohmann::ordered_json j;
  j["prompt"] = r.prompt;
  j["lang"] = r.lang;
  j["max_length"] = r.max_length;
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

namespace {

struct ScriptInventory {
  std::vector<char32_t> letters;
  bool spaced = true;
};

std::vector<char32_t> letters_in(char32_t first, char32_t last) {
  std::vector<char32_t> out;
  for (char32_t c = first; c <= last; ++c) {
    if (u_isalpha(static_cast<UChar32>(c))) out.push_back(c);
  }
  return out;
}

// nullptr: the language is written in Latin script natively.
const ScriptInventory* native_inventory(const std::string& lang) {
  static const std::map<std::string, ScriptInventory> native = [] {
    std::map<std::string, ScriptInventory> m;
    m["ar"] = {letters_in(0x0628, 0x063A), true};
    m["ur"] = m["ar"];
    m["bn"] = {letters_in(0x0995, 0x09B9), true};
    m["hi"] = {letters_in(0x0915, 0x0939), true};
    m["pa"] = {letters_in(0x0A15, 0x0A39), true};
    m["ta"] = {letters_in(0x0B95, 0x0BB9), true};
    m["ru"] = {letters_in(0x0430, 0x044F), true};
    m["uk"] = m["ru"];
    m["ko"] = {letters_in(0xAC00, 0xD7A3), true};
    m["zh"] = {letters_in(0x4E00, 0x9FA5), false};
    auto ja = letters_in(0x3042, 0x3093);
    const auto kanji = letters_in(0x4E00, 0x4FFF);
    ja.insert(ja.end(), kanji.begin(), kanji.end());
    m["ja"] = {std::move(ja), false};
    return m;
  }();
  const auto it = native.find(lang);
  return it == native.end() ? nullptr : &it->second;
}

}  // namespace

std::string MockGenerator::generate(const GenerationRequest& request) {
  const bool latin = request.prompt.find(kRomanizedMarker) != std::string::npos;
  Rng rng(mix64(request.seed.value_or(0) ^ fnv1a64(request.prompt) ^ fnv1a64(request.lang)));
  const ScriptInventory* inv = latin ? nullptr : native_inventory(request.lang);
  const bool spaced = inv == nullptr || inv->spaced;
  static constexpr std::u32string_view kVowels = U"aeiou";
  static constexpr std::u32string_view kConsonants = U"bcdfghjklmnprstvwyz";

  std::u32string out;
  const std::size_t words = 20 + rng.below(24);
  for (std::size_t w = 0; w < words; ++w) {
    std::u32string word;
    const std::size_t syllables = 2 + rng.below(3);
    for (std::size_t s = 0; s < syllables; ++s) {
      if (inv == nullptr) {
        word.push_back(kConsonants[rng.below(kConsonants.size())]);
        word.push_back(kVowels[rng.below(kVowels.size())]);
      } else {
        word.push_back(inv->letters[rng.below(inv->letters.size())]);
      }
    }
    if (!out.empty() && spaced) out.push_back(U' ');
    if (out.size() + word.size() + 1 > request.max_length) break;
    out += word;
    if (rng.below(9) == 0) out.push_back(spaced ? U',' : U'、');
  }
  out.push_back(spaced ? U'.' : U'。');
  return text::from_code_points(out);
}

HttpGenerator::HttpGenerator(std::string url, std::string token, int timeout_seconds)
    : token_(std::move(token)), timeout_seconds_(timeout_seconds) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) fail(ErrorKind::kUsage, "generator URL needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  base_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

HttpGenerator HttpGenerator::from_env() {
  const char* url = std::getenv("EMOTK_GENERATOR_URL");
  if (url == nullptr || *url == '\0') {
    fail(ErrorKind::kUsage, "EMOTK_GENERATOR_URL is not set");
  }
  const char* token = std::getenv("EMOTK_GENERATOR_TOKEN");
  return HttpGenerator(url, token ? token : "");
}

std::string HttpGenerator::generate(const GenerationRequest& request) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
  const auto res = client.Post(path_, headers, to_json(request).dump(), "application/json");
  if (!res) {
    fail(ErrorKind::kGenerator, "generator request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    fail(ErrorKind::kGenerator, "generator returned HTTP " + std::to_string(res->status));
  }
  try {
    return json::parse(res->body).at("text").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kGenerator, std::string("malformed generator response: ") + e.what());
  }
}

// --------------------------------------------------------------- pipeline

namespace {

struct LanguageResult {
  std::vector<Sample> samples;
  std::vector<FilterVerdict> audit;
  LanguageRunStats stats;
};

LanguageResult generate_language(const GenerationSpec& spec, const LanguagePlan& plan,
                                 const PromptLibrary& prompts, TextGenerator& generator,
                                 AuxScorer* scorer, std::size_t latin_target) {
  LanguageResult out;
  out.stats.lang = plan.lang;
  Rng rng(derive_seed(spec.seed, plan.lang));
  const LabelSetSampler sampler(spec);
  const auto templates = plan.template_ids.empty() ? prompts.template_ids(plan.lang) : plan.template_ids;
  if (templates.empty()) fail(ErrorKind::kInvalidInput, "no prompt templates for '" + plan.lang + "'");
  dedup::NearDuplicateIndex index(spec.filters.dedup);
  const dedup::MinHasher hasher(spec.filters.dedup.num_hashes(), spec.filters.dedup.seed);
  const auto budget = static_cast<double>(plan.budget);
  const auto quota = static_cast<double>(latin_target);
  const auto cap = static_cast<std::size_t>(static_cast<double>(plan.budget) * spec.attempt_factor) + 16;

  while (out.stats.accepted < plan.budget) {
    if (out.stats.attempts >= cap) {
      std::string worst = "none";
      std::size_t worst_count = 0;
      for (const auto& [reason, count] : out.stats.rejections) {
        if (count > worst_count) {
          worst = reason;
          worst_count = count;
        }
      }
      fail(ErrorKind::kBudgetUnreachable,
           "language '" + plan.lang + "': budget " + std::to_string(plan.budget) +
               " unreachable after " + std::to_string(out.stats.attempts) + " attempts (" +
               std::to_string(out.stats.accepted) + " accepted); most frequent rejection: " + worst +
               " (" + std::to_string(worst_count) + ")");
    }
    const auto slot = out.stats.accepted;
    // Spread the Latin quota evenly: slot k is Latin when
    // ceil(k * quota / budget) steps up, exactly `quota` times in total.
    const auto k = static_cast<double>(slot);
    const bool latin = latin_target > 0 &&
                       std::ceil((k + 1) * quota / budget - 1e-9) > std::ceil(k * quota / budget - 1e-9);
    Sample s;
    s.id = plan.lang + "-" + padded(out.stats.attempts, 7);
    s.lang = plan.lang;
    s.script = latin ? Script::kLatin : Script::kNative;
    s.labels = sampler.draw(rng);
    const auto& template_id = templates[rng.below(templates.size())];
    GenerationRequest request{prompts.render(template_id, plan.lang, s.labels, s.script, spec.max_length),
                              plan.lang, spec.max_length, rng.next()};
    ++out.stats.attempts;

    for (int attempt = 0;; ++attempt) {
      try {
        s.text = text::nfc(generator.generate(request));
        break;
      } catch (const std::exception& e) {
        if (attempt >= spec.generator_retries) {
          fail(ErrorKind::kGenerator, "language '" + plan.lang + "': generator failed after " +
                                          std::to_string(attempt + 1) + " tries: " + e.what());
        }
      }
    }

    FilterVerdict verdict{s.id, true, {}};
    const auto& f = spec.filters;
    if (s.text.empty()) {
      verdict.reject({FilterReason::Kind::kLowLexicalDiversity, {}, {}, 0.0});
    } else {
      const auto lex = filter_lexical_diversity(s.text, f.min_ttr, f.min_tokens);
      if (!lex.passed) verdict.reject({FilterReason::Kind::kLowLexicalDiversity, {}, {}, lex.ttr});
    }
    if (latin && !text::is_latin_script(s.text)) {
      verdict.reject({FilterReason::Kind::kScriptMismatch, {}, {}, 0.0});
    }
    if (scorer != nullptr && verdict.passed) {
      const auto lc = filter_label_consistency(s, spec.taxonomy, *scorer, f.min_aux_score, f.scorer_retries);
      for (const auto& label : lc.failing_labels) {
        verdict.reject({FilterReason::Kind::kLabelInconsistent, {}, label,
                        lc.scores[*spec.taxonomy.index_of(label)]});
      }
    }
    dedup::ShingleSet shingles;
    dedup::Signature signature;
    if (verdict.passed) {
      shingles = dedup::shingles(s.text, f.dedup.shingle_size);
      signature = hasher.signature(shingles);
      if (const auto m = index.query(shingles, signature)) {
        verdict.reject({FilterReason::Kind::kNearDuplicate, out.samples[m->doc].id, {}, m->jaccard});
      }
    }
    for (const auto& r : verdict.reasons) ++out.stats.rejections[std::string(to_string(r.kind))];
    out.audit.push_back(verdict);
    if (!verdict.passed) continue;

    index.add(std::move(shingles), signature);
    out.stats.latin += latin;
    ++out.stats.accepted;
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace

GenerationOutcome generate_batch(const GenerationSpec& spec, const PromptLibrary& prompts,
                                 TextGenerator& generator, AuxScorer* scorer, int workers) {
  spec.validate();
  for (const auto& plan : spec.languages) (void)prompts.language(plan.lang);
  const auto latin = spec.latin_targets();

  const auto n = static_cast<std::int64_t>(spec.languages.size());
  std::vector<LanguageResult> results(spec.languages.size());
  std::vector<std::exception_ptr> errors(spec.languages.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, workers))
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      results[i] = generate_language(spec, spec.languages[i], prompts, generator, scorer, latin[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  GenerationOutcome out{Corpus{spec.taxonomy, {}, Split::kUnsplit}, {}, {}};
  for (auto& r : results) {
    std::move(r.samples.begin(), r.samples.end(), std::back_inserter(out.corpus.samples));
    std::move(r.audit.begin(), r.audit.end(), std::back_inserter(out.audit));
    out.languages.push_back(std::move(r.stats));
  }
  const auto by_lang_id = [](const auto& a, const auto& b) {
    return std::tie(a.lang, a.id) < std::tie(b.lang, b.id);
  };
  std::sort(out.corpus.samples.begin(), out.corpus.samples.end(), by_lang_id);
  std::sort(out.audit.begin(), out.audit.end(),
            [](const FilterVerdict& a, const FilterVerdict& b) { return a.id < b.id; });
  std::sort(out.languages.begin(), out.languages.end(),
            [](const LanguageRunStats& a, const LanguageRunStats& b) { return a.lang < b.lang; });
  validate_corpus(out.corpus);
  return out;
}

}  // namespace emotk
