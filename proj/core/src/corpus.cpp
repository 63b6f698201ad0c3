#include "emotikon/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "emotikon/rng.hpp"
#include "emotikon/text.hpp"

namespace emotikon {

void Corpus::add(Document doc) {
  if (!ids_.insert(doc.id).second) throw DataError("duplicate document id '" + doc.id + "'");
  documents_.push_back(std::move(doc));
}

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(documents_.size());
  for (const auto& d : documents_) out.push_back(d.label);
  return out;
}

bool Corpus::has_both_labels() const {
  bool fake = false, real = false;
  for (const auto& d : documents_) (d.label == Label::Fake ? fake : real) = true;
  return fake && real;
}

Corpus load_corpus(std::istream& in, std::string name) {
  Corpus corpus(std::move(name));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "record is not a JSON object");
    for (const char* field : {"id", "text", "label"}) {
      if (!record.contains(field) || !record[field].is_string()) {
        throw ParseError(line_no, std::string("missing string field '") + field + "'");
      }
    }
    if (const auto it = record.find("emotionized"); it != record.end() && it->is_boolean() && it->get<bool>()) {
      corpus.set_emotionized(true);
    }
    Document doc;
    doc.id = record["id"].get<std::string>();
    try {
      doc.label = parse_label(record["label"].get<std::string>());
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
    auto tokenized = tokenize(record["text"].get<std::string>());
    doc.tokens = std::move(tokenized.tokens);
    doc.sentence_count = tokenized.sentence_count;
    try {
      corpus.add(std::move(doc));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return corpus;
}

Corpus load_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  return load_corpus(in, path);
}

std::string render_text(const std::vector<std::string>& tokens, std::size_t sentence_count) {
  const std::size_t n = tokens.size();
  if (n == 0 || sentence_count == 0) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    return out;
  }
  std::string out;
  for (std::size_t s = 0; s < sentence_count; ++s) {
    const std::size_t begin = s * n / sentence_count;
    const std::size_t end = (s + 1) * n / sentence_count;
    if (s) out += ' ';
    for (std::size_t i = begin; i < end; ++i) {
      if (i > begin) out += ' ';
      out += tokens[i];
    }
    out += '.';
  }
  return out;
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents()) {
    nlohmann::ordered_json record;
    record["id"] = doc.id;
    record["text"] = render_text(doc.tokens, doc.sentence_count);
    record["label"] = std::string(to_string(doc.label));
    if (corpus.emotionized()) record["emotionized"] = true;
    out << record.dump() << '\n';
  }
}

void write_corpus_file(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_corpus(corpus, out);
}

DatasetStats corpus_stats(const Corpus& corpus) {
  DatasetStats stats;
  for (const auto& doc : corpus.documents()) {
    auto& c = stats.per_class[label_index(doc.label)];
    ++c.documents;
    c.total_words += doc.tokens.size();
    c.total_sentences += doc.sentence_count;
  }
  for (auto& c : stats.per_class) {
    if (c.documents == 0) continue;
    c.avg_words = static_cast<double>(c.total_words) / static_cast<double>(c.documents);
    c.avg_sentences = static_cast<double>(c.total_sentences) / static_cast<double>(c.documents);
  }
  return stats;
}

void SyntheticCorpusConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("synthetic corpus config: ") + what);
  };
  require(min_tokens >= 1 && min_tokens <= max_tokens, "need 1 <= min_tokens <= max_tokens");
  require(emotion_rate_fake >= 0.0 && emotion_rate_fake <= 1.0, "emotion_rate_fake outside [0, 1]");
  require(emotion_rate_real >= 0.0 && emotion_rate_real <= 1.0, "emotion_rate_real outside [0, 1]");
  require(neutral_vocabulary >= 1 && emotional_vocabulary >= 1, "vocabulary sizes must be >= 1");
  require(zipf_exponent >= 0.0, "zipf_exponent must be >= 0");
  require(neutral_lexicon_fraction >= 0.0 && neutral_lexicon_fraction <= 1.0,
          "neutral_lexicon_fraction outside [0, 1]");
  require(secondary_sense_fraction >= 0.0 && secondary_sense_fraction <= 1.0,
          "secondary_sense_fraction outside [0, 1]");
  require(words_per_sentence >= 1, "words_per_sentence must be >= 1");
  require(!emotions.empty(), "emotions must be non-empty");
  for (const auto& e : emotions) {
    const auto t = tokenize(e);
    require(t.tokens.size() == 1 && t.tokens[0] == e, "emotion labels must be single lowercase tokens");
  }
}

std::string synthetic_word(std::size_t index) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  constexpr std::size_t kSyllables = kConsonants.size() * kVowels.size();
  // Two-syllable minimum keeps words clear of short English words and labels.
  std::string word;
  std::size_t x = index;
  std::size_t syllables = 0;
  do {
    const std::size_t s = x % kSyllables;
    word += kConsonants[s / kVowels.size()];
    word += kVowels[s % kVowels.size()];
    x /= kSyllables;
    ++syllables;
  } while (x > 0 || syllables < 2);
  return word;
}

namespace {

// Cumulative Zipf weights over ranks 1..n.
std::vector<double> zipf_cdf(std::size_t n, double exponent) {
  std::vector<double> cdf(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
    cdf[r] = total;
  }
  for (auto& c : cdf) c /= total;
  return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

double three_decimals(double x) { return std::floor(x * 1000.0) / 1000.0; }

}  // namespace

SyntheticDataset generate_synthetic_corpus(const SyntheticCorpusConfig& config) {
  config.validate();
  SyntheticDataset out;
  out.corpus = Corpus("synthetic");

  for (std::size_t i = 0; i < config.neutral_vocabulary; ++i) out.neutral_words.push_back(synthetic_word(i));
  for (std::size_t i = 0; i < config.emotional_vocabulary; ++i)
    out.emotional_words.push_back(synthetic_word(config.neutral_vocabulary + i));
  for (const auto& e : config.emotions) {
    if (std::find(out.neutral_words.begin(), out.neutral_words.end(), e) != out.neutral_words.end() ||
        std::find(out.emotional_words.begin(), out.emotional_words.end(), e) != out.emotional_words.end()) {
      throw std::invalid_argument("emotion label '" + e + "' collides with a generated pool word");
    }
  }

  Rng lex_rng(derive_seed(config.seed, "synthetic-lexicon"));
  const std::size_t n_emotions = config.emotions.size();
  for (const auto& word : out.emotional_words) {
    const std::size_t primary = lex_rng.below(n_emotions);
    const double intensity = three_decimals(lex_rng.uniform(0.6, 1.0));
    out.lexicon.push_back({word, config.emotions[primary], intensity});
    if (n_emotions > 1 && lex_rng.uniform() < config.secondary_sense_fraction) {
      const std::size_t other = (primary + 1 + lex_rng.below(n_emotions - 1)) % n_emotions;
      // Strictly weaker so the primary sense always survives the collapse.
      const double weaker = std::max(0.0, three_decimals(lex_rng.uniform(0.0, intensity)) - 0.001);
      out.lexicon.push_back({word, config.emotions[other], weaker});
    }
  }
  for (const auto& word : out.neutral_words) {
    if (lex_rng.uniform() < config.neutral_lexicon_fraction) {
      out.lexicon.push_back({word, config.emotions[lex_rng.below(n_emotions)], three_decimals(lex_rng.uniform(0.0, 0.6))});
    }
  }

  const auto neutral_cdf = zipf_cdf(config.neutral_vocabulary, config.zipf_exponent);
  const auto emotional_cdf = zipf_cdf(config.emotional_vocabulary, config.zipf_exponent);
  Rng rng(derive_seed(config.seed, "synthetic-corpus"));
  for (const Label label : {Label::Fake, Label::Real}) {
    const double rate = label == Label::Fake ? config.emotion_rate_fake : config.emotion_rate_real;
    for (std::size_t d = 0; d < config.docs_per_class; ++d) {
      Document doc;
      char id[32];
      std::snprintf(id, sizeof id, "%s-%04zu", label == Label::Fake ? "fake" : "real", d);
      doc.id = id;
      doc.label = label;
      const std::size_t length = config.min_tokens + rng.below(config.max_tokens - config.min_tokens + 1);
      doc.tokens.reserve(length);
      for (std::size_t t = 0; t < length; ++t) {
        if (rng.uniform() < rate) {
          doc.tokens.push_back(out.emotional_words[sample_cdf(emotional_cdf, rng)]);
        } else {
          doc.tokens.push_back(out.neutral_words[sample_cdf(neutral_cdf, rng)]);
        }
      }
      doc.sentence_count = (length + config.words_per_sentence - 1) / config.words_per_sentence;
      out.corpus.add(std::move(doc));
    }
  }
  return out;
}

}  // namespace emotikon
