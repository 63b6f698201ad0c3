#include "emotikon/text.hpp"

#include <cstdint>
#include <optional>

namespace emotikon {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

struct Decoded {
  char32_t cp;
  std::size_t length;
};

Decoded decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kInvalid, 1};
  }
  if (pos + len > s.size()) return {kInvalid, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {kInvalid, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

bool is_word_char(char32_t cp) {
  if (cp == kInvalid) return false;
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9');
  }
  if (cp <= 0xBF || cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp == 0xFEFF) return false;
  return true;
}

std::optional<char> joiner(char32_t cp) {
  if (cp == U'-') return '-';
  if (cp == U'\'' || cp == 0x2019) return '\'';
  return std::nullopt;
}

bool is_terminator(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto [cp, len] = decode(text, pos);
    if (cp == kInvalid) {
      out.push_back(text[pos]);
    } else {
      encode(lower(cp), out);
    }
    pos += len;
  }
  return out;
}

bool contains_whitespace(std::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return true;
  }
  return false;
}

TokenizedText tokenize(std::string_view text) {
  TokenizedText result;
  std::string current;
  std::size_t terminator_runs = 0;
  bool in_terminator_run = false;

  auto flush = [&] {
    if (!current.empty()) result.tokens.push_back(std::move(current));
    current.clear();
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto [cp, len] = decode(text, pos);
    const bool terminator = is_terminator(cp);
    if (terminator && !in_terminator_run) ++terminator_runs;
    in_terminator_run = terminator;

    if (is_word_char(cp)) {
      encode(lower(cp), current);
    } else if (auto j = joiner(cp); j && !current.empty()) {
      const std::size_t next = pos + len;
      if (next < text.size() && is_word_char(decode(text, next).cp)) {
        current.push_back(*j);
      } else {
        flush();
      }
    } else {
      flush();
    }
    pos += len;
  }
  flush();

  if (!result.tokens.empty()) result.sentence_count = terminator_runs == 0 ? 1 : terminator_runs;
  return result;
}

}  // namespace emotikon
