#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace emotikon {

struct TokenizedText {
  std::vector<std::string> tokens;
  std::size_t sentence_count = 0;
};

// Lowercases and splits text into word tokens.
//
// A token is a maximal run of letters/digits; a hyphen or apostrophe
// (ASCII ' or U+2019, normalized to ') is kept only when it sits between two
// word characters, so "Wi-Fi" -> "wi-fi" and "don't" stays whole. Every
// other character separates. Non-ASCII code points count as letters unless
// they fall in the Latin-1 or General Punctuation blocks.
//
// sentence_count is the number of runs of '.', '!' or '?', at least 1 when
// any token is present and 0 otherwise.
TokenizedText tokenize(std::string_view text);

// Lowercases ASCII, Latin-1, Greek and Cyrillic letters; other bytes pass
// through unchanged. Invalid UTF-8 bytes are kept as-is.
std::string to_lower(std::string_view text);

bool contains_whitespace(std::string_view text);

}  // namespace emotikon
