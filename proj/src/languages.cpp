#include "emotk/languages.hpp"

#include <array>

namespace emotk {

namespace {

constexpr std::array<LanguageInfo, 23> kLanguages{{
    {"ar", "Arabic", true},      {"bn", "Bengali", true},     {"nl", "Dutch", false},
    {"en", "English", false},    {"fr", "French", false},     {"de", "German", false},
    {"hi", "Hindi", true},       {"id", "Indonesian", false}, {"it", "Italian", false},
    {"ja", "Japanese", false},   {"ko", "Korean", false},     {"zh", "Mandarin", false},
    {"pl", "Polish", false},     {"pt", "Portuguese", false}, {"pa", "Punjabi", true},
    {"ru", "Russian", false},    {"es", "Spanish", false},    {"sw", "Swahili", false},
    {"ta", "Tamil", true},       {"tr", "Turkish", false},    {"uk", "Ukrainian", false},
    {"ur", "Urdu", true},        {"vi", "Vietnamese", false},
}};

}  // namespace

std::span<const LanguageInfo> corpus_languages() { return kLanguages; }

std::optional<LanguageInfo> find_language(std::string_view code) {
  for (const auto& l : kLanguages) {
    if (l.code == code) return l;
  }
  return std::nullopt;
}

}  // namespace emotk
