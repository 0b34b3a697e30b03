#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aptlabel {

// Decodes UTF-8 into codepoints; invalid sequences become U+FFFD.
std::u32string decode_utf8(std::string_view bytes);

// Encodes codepoints back to UTF-8.
std::string encode_utf8(const std::u32string& cps);

// Re-encodes arbitrary bytes as valid UTF-8, replacing bad sequences.
std::string sanitize_utf8(std::string_view bytes);

// Canonical name/text form used everywhere names and tokens are compared:
// punctuation and symbols become single spaces, letters are case-folded,
// whitespace runs collapse to one space, and the result is trimmed.
// Digits and non-ASCII letters survive.
std::string standardize_name(std::string_view raw);

// Splits an already-standardized string on spaces. No empty tokens.
std::vector<std::string> split_tokens(std::string_view standardized);

// Token count of a standardized string.
int token_count(std::string_view standardized);

} // namespace aptlabel
