#include "emotk/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "emotk/error.hpp"

namespace emotk::text {

namespace {

icu::UnicodeString decode(std::string_view utf8) {
  // fromUTF8 silently substitutes U+FFFD, so validate first.
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  for (int32_t i = 0; i < n;) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) fail(ErrorKind::kInvalidInput, "ill-formed UTF-8 at byte " + std::to_string(i));
  }
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), n));
}

std::string encode(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const auto* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) fail(ErrorKind::kInvalidInput, "ICU NFC unavailable");
  return *n;
}

}  // namespace

std::string nfc(std::string_view utf8) {
  const auto& norm = nfc_instance();
  const auto u = decode(utf8);
  UErrorCode status = U_ZERO_ERROR;
  if (norm.isNormalized(u, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  const auto out = norm.normalize(u, status);
  if (U_FAILURE(status)) fail(ErrorKind::kInvalidInput, "NFC normalization failed");
  return encode(out);
}

std::string fold_case(std::string_view utf8) {
  auto u = decode(utf8);
  u.foldCase();
  UErrorCode status = U_ZERO_ERROR;
  const auto out = nfc_instance().normalize(u, status);
  if (U_FAILURE(status)) fail(ErrorKind::kInvalidInput, "NFC normalization failed");
  return encode(out);
}

std::size_t char_length(std::string_view utf8) {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  std::size_t count = 0;
  for (int32_t i = 0; i < n; ++count) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
  }
  return count;
}

std::u32string to_code_points(std::string_view utf8) {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  std::u32string out;
  out.reserve(utf8.size());
  for (int32_t i = 0; i < n;) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) fail(ErrorKind::kInvalidInput, "ill-formed UTF-8 at byte " + std::to_string(i));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string from_code_points(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (const char32_t c : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) fail(ErrorKind::kInvalidInput, "invalid code point");
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
  }
  return out;
}

std::vector<std::string> word_tokens(std::string_view utf8) {
  const auto folded = to_code_points(fold_case(utf8));
  std::vector<std::string> tokens;
  std::u32string current;
  for (const char32_t c : folded) {
    const auto cp = static_cast<UChar32>(c);
    if (u_isUWhiteSpace(cp) || u_ispunct(cp)) {
      if (!current.empty()) tokens.push_back(from_code_points(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(from_code_points(current));
  return tokens;
}

bool is_latin_script(std::string_view utf8) {
  for (const char32_t c : to_code_points(utf8)) {
    const auto cp = static_cast<UChar32>(c);
    if (!u_isalpha(cp)) continue;
    UErrorCode status = U_ZERO_ERROR;
    if (uscript_getScript(cp, &status) != USCRIPT_LATIN) return false;
  }
  return true;
}

}  // namespace emotk::text
