#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace emotk {

struct LanguageInfo {
  std::string_view code;  // ISO 639-1
  std::string_view name;
  /// Latin-script writing is common in informal use; these languages get a
  /// romanized share of generated samples.
  bool romanization_eligible;
};

/// The 23-language registry of the reference corpus.
std::span<const LanguageInfo> corpus_languages();
std::optional<LanguageInfo> find_language(std::string_view code);

}  // namespace emotk
