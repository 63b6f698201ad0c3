#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "emotikon/common.hpp"
#include "emotikon/lexicon.hpp"

namespace emotikon {

struct Document {
  std::string id;
  std::vector<std::string> tokens;
  std::size_t sentence_count = 0;
  Label label = Label::Fake;

  friend bool operator==(const Document&, const Document&) = default;
};

// Ordered documents with unique ids.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string name) : name_(std::move(name)) {}

  // Throws DataError on a duplicate id.
  void add(Document doc);

  const std::vector<Document>& documents() const { return documents_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  std::vector<Label> labels() const;
  bool has_both_labels() const;

  // Set on corpora produced by emotionization; persisted by write_corpus.
  bool emotionized() const { return emotionized_; }
  void set_emotionized(bool value) { emotionized_ = value; }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.documents_ == b.documents_; }

 private:
  std::string name_;
  std::vector<Document> documents_;
  std::unordered_set<std::string> ids_;
  bool emotionized_ = false;
};

// Reads line-delimited JSON records {"id", "text", "label"}. Blank lines are
// skipped. A record carrying "emotionized": true marks the corpus as
// emotionized. Throws ParseError naming the line for malformed JSON, missing
// fields, unknown labels, or duplicate ids.
Corpus load_corpus(std::istream& in, std::string name = {});
Corpus load_corpus_file(const std::string& path);

// Writes one JSON record per document. The text field is rebuilt from the
// tokens with sentence terminators placed so that tokenizing it gives back
// the same tokens and sentence count.
void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus_file(const Corpus& corpus, const std::string& path);

// Text whose tokenization reproduces (tokens, sentence_count).
std::string render_text(const std::vector<std::string>& tokens, std::size_t sentence_count);

struct ClassStats {
  std::size_t documents = 0;
  std::size_t total_words = 0;
  std::size_t total_sentences = 0;
  double avg_words = 0.0;
  double avg_sentences = 0.0;
};

struct DatasetStats {
  std::array<ClassStats, kNumLabels> per_class{};
  const ClassStats& operator[](Label label) const { return per_class[label_index(label)]; }
};

DatasetStats corpus_stats(const Corpus& corpus);

struct SyntheticCorpusConfig {
  std::size_t docs_per_class = 500;
  std::size_t min_tokens = 600;
  std::size_t max_tokens = 600;
  double emotion_rate_fake = 0.05;
  double emotion_rate_real = 0.01;
  std::size_t neutral_vocabulary = 2000;
  std::size_t emotional_vocabulary = 300;
  // Zipf exponent for word frequencies inside each pool (0 = uniform).
  double zipf_exponent = 1.0;
  // Share of neutral words that receive a weak (< 0.6) lexicon entry.
  double neutral_lexicon_fraction = 0.1;
  // Share of emotional words that receive an extra weaker sense.
  double secondary_sense_fraction = 0.3;
  std::size_t words_per_sentence = 20;
  std::vector<std::string> emotions{"anger", "fear", "joy", "sadness"};
  std::uint64_t seed = 1;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// A generated corpus together with the lexicon that covers its pools.
struct SyntheticDataset {
  Corpus corpus;
  std::vector<RawLexiconEntry> lexicon;
  std::vector<std::string> neutral_words;
  std::vector<std::string> emotional_words;
};

// Lexicon intensities of emotional-pool words lie in [0.6, 1); neutral-pool
// entries, when present, lie in [0, 0.6). Deterministic in config.seed.
SyntheticDataset generate_synthetic_corpus(const SyntheticCorpusConfig& config);

// Pronounceable word for an index; distinct indices give distinct words.
std::string synthetic_word(std::size_t index);

}  // namespace emotikon
