#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace emotk::text {

/// Unicode NFC. Throws kInvalidInput on ill-formed UTF-8.
std::string nfc(std::string_view utf8);

/// Full Unicode case folding followed by NFC.
std::string fold_case(std::string_view utf8);

/// Number of code points (the "characters" of all length statistics).
std::size_t char_length(std::string_view utf8);

std::u32string to_code_points(std::string_view utf8);
std::string from_code_points(std::u32string_view cps);

/// Splits on Unicode whitespace and punctuation; tokens are case-folded.
std::vector<std::string> word_tokens(std::string_view utf8);

/// True when every letter in the text is Latin (or the text has no letters).
bool is_latin_script(std::string_view utf8);

}  // namespace emotk::text
