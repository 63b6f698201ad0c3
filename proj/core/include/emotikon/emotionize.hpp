#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "emotikon/corpus.hpp"
#include "emotikon/lexicon.hpp"

namespace emotikon {

struct EmotionizeOptions {
  double tau = 0.6;
  // Prepended to every inserted label. Empty keeps plain emotion words; a
  // non-empty prefix must consist of letters/digits so the label survives
  // re-tokenization as one token.
  std::string label_prefix;
};

struct Trigger {
  std::size_t input_index = 0;
  std::string emotion;

  friend bool operator==(const Trigger&, const Trigger&) = default;
};

struct EmotionizedDocument {
  Document document;
  std::size_t inserted_count = 0;
  std::vector<Trigger> triggers;

  // Output positions of the inserted label tokens, ascending.
  std::vector<std::size_t> inserted_positions() const;
};

// Single left-to-right pass: every input token is copied, and a token whose
// lexicon intensity is >= tau is followed by its emotion label. Inserted
// labels are never looked up themselves.
EmotionizedDocument emotionize_document(const Document& doc, const EmotionLexicon& lexicon,
                                        const EmotionizeOptions& options);

inline EmotionizedDocument emotionize_document(const Document& doc, const EmotionLexicon& lexicon, double tau) {
  return emotionize_document(doc, lexicon, EmotionizeOptions{tau, {}});
}

struct EnrichmentStats {
  std::size_t original_tokens = 0;
  std::size_t inserted_tokens = 0;
  // inserted / original, token weighted.
  double lengthening_ratio = 0.0;
  std::array<std::size_t, kNumLabels> class_original_tokens{};
  std::array<std::size_t, kNumLabels> class_inserted_tokens{};
  std::array<double, kNumLabels> class_lengthening_ratio{};
  // Share of input tokens that triggered an insertion.
  double triggered_fraction = 0.0;
  // Unweighted mean of per-document ratios (documents with tokens only).
  double mean_document_ratio = 0.0;
  std::array<double, kNumLabels> class_mean_document_ratio{};
};

struct EmotionizedCorpus {
  std::vector<EmotionizedDocument> documents;
  EnrichmentStats stats;

  Corpus to_corpus(std::string name = {}) const;
};

// Documents are transformed independently (across `workers` threads when > 1)
// and assembled in input order.
EmotionizedCorpus emotionize_corpus(const Corpus& corpus, const EmotionLexicon& lexicon,
                                    const EmotionizeOptions& options, unsigned workers = 1);

EnrichmentStats enrichment_stats(const std::vector<EmotionizedDocument>& documents);

}  // namespace emotikon
