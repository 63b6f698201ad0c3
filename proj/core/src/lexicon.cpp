#include "emotikon/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "emotikon/common.hpp"
#include "emotikon/text.hpp"

namespace emotikon {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::optional<double> parse_number(std::string_view s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
}

}  // namespace

EmotionLexicon::EmotionLexicon(EntryMap entries, std::string source_name, std::size_t dropped_count)
    : entries_(std::move(entries)), source_name_(std::move(source_name)), dropped_(dropped_count) {
  for (const auto& [word, entry] : entries_) emotions_.insert(entry.emotion);
}

const LexiconEntry* EmotionLexicon::find(std::string_view word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

double EmotionLexicon::max_intensity() const {
  double m = 0.0;
  for (const auto& [word, entry] : entries_) m = std::max(m, entry.intensity);
  return m;
}

std::vector<RawLexiconEntry> parse_lexicon(std::string_view content) {
  std::vector<RawLexiconEntry> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool first_content_line = true;
  while (start < content.size()) {
    auto newline = content.find('\n', start);
    if (newline == std::string_view::npos) newline = content.size();
    std::string_view line = content.substr(start, newline - start);
    start = newline + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, found " + std::to_string(fields.size()));
    }
    const auto score = parse_number(fields[2]);
    if (!score) {
      if (first_content_line) {
        first_content_line = false;
        continue;
      }
      throw ParseError(line_no, "score '" + std::string(fields[2]) + "' is not a number");
    }
    first_content_line = false;
    if (!(*score >= 0.0 && *score <= 1.0)) {
      throw ParseError(line_no, "score " + std::string(fields[2]) + " outside [0, 1]");
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty word or emotion field");
    if (contains_whitespace(fields[0])) {
      throw ParseError(line_no, "multi-word term '" + std::string(fields[0]) + "' is not supported");
    }
    if (contains_whitespace(fields[1])) throw ParseError(line_no, "emotion label contains whitespace");
    entries.push_back({to_lower(fields[0]), std::string(fields[1]), *score});
  }
  return entries;
}

std::vector<RawLexiconEntry> read_lexicon_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_lexicon(buffer.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string serialize_lexicon(const std::vector<RawLexiconEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += e.word;
    out += '\t';
    out += e.emotion;
    out += '\t';
    out += format_double(e.intensity);
    out += '\n';
  }
  return out;
}

EmotionLexicon collapse_best_sense(const std::vector<RawLexiconEntry>& entries, std::string source_name) {
  EmotionLexicon::EntryMap best;
  for (const auto& raw : entries) {
    auto [it, inserted] = best.try_emplace(raw.word, LexiconEntry{raw.emotion, raw.intensity});
    if (inserted) continue;
    auto& current = it->second;
    if (raw.intensity > current.intensity ||
        (raw.intensity == current.intensity && raw.emotion < current.emotion)) {
      current = {raw.emotion, raw.intensity};
    }
  }
  const std::size_t dropped = entries.size() - best.size();
  return EmotionLexicon(std::move(best), std::move(source_name), dropped);
}

std::optional<std::string_view> lookup(const EmotionLexicon& lexicon, std::string_view word, double tau) {
  check_tau(tau);
  const auto* entry = lexicon.find(word);
  if (entry == nullptr || entry->intensity < tau) return std::nullopt;
  return std::string_view(entry->emotion);
}

LexiconSummary summarize_lexicon(const std::vector<RawLexiconEntry>& raw, double tau) {
  check_tau(tau);
  LexiconSummary s;
  s.tau = tau;
  s.raw_entries = raw.size();
  for (const auto& e : raw) {
    ++s.raw_per_emotion[e.emotion];
    if (e.intensity >= tau) ++s.raw_at_tau;
  }
  const auto lexicon = collapse_best_sense(raw);
  s.distinct_words = lexicon.size();
  s.dropped = lexicon.dropped_count();
  for (const auto& [word, entry] : lexicon.entries()) {
    ++s.collapsed_per_emotion[entry.emotion];
    if (entry.intensity >= tau) {
      ++s.collapsed_at_tau;
      ++s.collapsed_per_emotion_at_tau[entry.emotion];
    }
  }
  s.dropped_at_tau = s.raw_at_tau - s.collapsed_at_tau;
  return s;
}

}  // namespace emotikon
