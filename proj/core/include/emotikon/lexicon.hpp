#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace emotikon {

// One (word, emotion, intensity) record as it appears in a lexicon file.
struct RawLexiconEntry {
  std::string word;
  std::string emotion;
  double intensity = 0.0;

  friend bool operator==(const RawLexiconEntry&, const RawLexiconEntry&) = default;
};

struct LexiconEntry {
  std::string emotion;
  double intensity = 0.0;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Word -> best-sense (emotion, intensity). Immutable once built; share freely.
class EmotionLexicon {
 public:
  using EntryMap = std::map<std::string, LexiconEntry, std::less<>>;

  EmotionLexicon() = default;
  EmotionLexicon(EntryMap entries, std::string source_name, std::size_t dropped_count);

  const EntryMap& entries() const { return entries_; }
  const std::set<std::string>& emotion_set() const { return emotions_; }
  const std::string& source_name() const { return source_name_; }
  // Raw entries discarded by the best-sense collapse.
  std::size_t dropped_count() const { return dropped_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const LexiconEntry* find(std::string_view word) const;

  // Highest stored intensity, 0 for an empty lexicon.
  double max_intensity() const;

 private:
  EntryMap entries_;
  std::string source_name_;
  std::set<std::string> emotions_;
  std::size_t dropped_ = 0;
};

// Parses tab-separated "word<TAB>emotion<TAB>score" lines. Blank lines are
// ignored; a first line whose score field is not numeric is treated as a
// header. Words are lowercased. Throws ParseError with the 1-based line
// number on a wrong field count, an out-of-range score, or a multi-word term.
std::vector<RawLexiconEntry> parse_lexicon(std::string_view content);

std::vector<RawLexiconEntry> read_lexicon_file(const std::string& path);

// Inverse of parse_lexicon (no header line).
std::string serialize_lexicon(const std::vector<RawLexiconEntry>& entries);

// Keeps the maximum-intensity entry per word; equal intensities resolve to
// the lexicographically smallest emotion label.
EmotionLexicon collapse_best_sense(const std::vector<RawLexiconEntry>& entries,
                                   std::string source_name = {});

// The stored emotion for `word` iff its intensity >= tau. tau must lie in [0, 1].
std::optional<std::string_view> lookup(const EmotionLexicon& lexicon, std::string_view word, double tau);

// Counts reported by `lexicon inspect`.
struct LexiconSummary {
  std::size_t raw_entries = 0;
  std::size_t distinct_words = 0;
  std::size_t dropped = 0;
  std::map<std::string, std::size_t> raw_per_emotion;
  std::map<std::string, std::size_t> collapsed_per_emotion;

  double tau = 0.0;
  std::size_t raw_at_tau = 0;        // raw entries with intensity >= tau
  std::size_t collapsed_at_tau = 0;  // collapsed entries with intensity >= tau
  std::size_t dropped_at_tau = 0;    // raw_at_tau - collapsed_at_tau
  std::map<std::string, std::size_t> collapsed_per_emotion_at_tau;

  double dropped_fraction_at_tau() const {
    return raw_at_tau == 0 ? 0.0 : static_cast<double>(dropped_at_tau) / static_cast<double>(raw_at_tau);
  }
};

LexiconSummary summarize_lexicon(const std::vector<RawLexiconEntry>& raw, double tau);

// Shortest decimal text that round-trips the value.
std::string format_double(double value);

}  // namespace emotikon
