#include "emotikon/emotionize.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "emotikon/text.hpp"

namespace emotikon {
namespace {

void validate(const EmotionizeOptions& options) {
  if (!(options.tau >= 0.0 && options.tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
  if (!options.label_prefix.empty()) {
    const auto t = tokenize(options.label_prefix + "x");
    if (t.tokens.size() != 1 || t.tokens[0] != options.label_prefix + "x") {
      throw std::invalid_argument("label prefix must be lowercase letters/digits");
    }
  }
}

double ratio(std::size_t inserted, std::size_t original) {
  return original == 0 ? 0.0 : static_cast<double>(inserted) / static_cast<double>(original);
}

}  // namespace

std::vector<std::size_t> EmotionizedDocument::inserted_positions() const {
  std::vector<std::size_t> positions;
  positions.reserve(triggers.size());
  for (std::size_t k = 0; k < triggers.size(); ++k) positions.push_back(triggers[k].input_index + k + 1);
  return positions;
}

EmotionizedDocument emotionize_document(const Document& doc, const EmotionLexicon& lexicon,
                                        const EmotionizeOptions& options) {
  validate(options);
  EmotionizedDocument out;
  out.document.id = doc.id;
  out.document.label = doc.label;
  out.document.sentence_count = doc.sentence_count;
  out.document.tokens.reserve(doc.tokens.size() + doc.tokens.size() / 16);
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    out.document.tokens.push_back(doc.tokens[i]);
    if (const auto emotion = lookup(lexicon, doc.tokens[i], options.tau)) {
      std::string label = options.label_prefix;
      label += *emotion;
      out.triggers.push_back({i, std::string(*emotion)});
      out.document.tokens.push_back(std::move(label));
    }
  }
  out.inserted_count = out.triggers.size();
  return out;
}

Corpus EmotionizedCorpus::to_corpus(std::string name) const {
  Corpus corpus(std::move(name));
  for (const auto& d : documents) corpus.add(d.document);
  corpus.set_emotionized(true);
  return corpus;
}

EnrichmentStats enrichment_stats(const std::vector<EmotionizedDocument>& documents) {
  EnrichmentStats s;
  std::array<std::size_t, kNumLabels> docs_with_tokens{};
  double ratio_sum = 0.0;
  std::array<double, kNumLabels> class_ratio_sum{};
  for (const auto& d : documents) {
    const std::size_t original = d.document.tokens.size() - d.inserted_count;
    const auto c = label_index(d.document.label);
    s.original_tokens += original;
    s.inserted_tokens += d.inserted_count;
    s.class_original_tokens[c] += original;
    s.class_inserted_tokens[c] += d.inserted_count;
    if (original > 0) {
      const double r = ratio(d.inserted_count, original);
      ratio_sum += r;
      class_ratio_sum[c] += r;
      ++docs_with_tokens[c];
    }
  }
  s.lengthening_ratio = ratio(s.inserted_tokens, s.original_tokens);
  s.triggered_fraction = s.lengthening_ratio;
  const std::size_t total_docs = docs_with_tokens[0] + docs_with_tokens[1];
  s.mean_document_ratio = total_docs == 0 ? 0.0 : ratio_sum / static_cast<double>(total_docs);
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    s.class_lengthening_ratio[c] = ratio(s.class_inserted_tokens[c], s.class_original_tokens[c]);
    s.class_mean_document_ratio[c] =
        docs_with_tokens[c] == 0 ? 0.0 : class_ratio_sum[c] / static_cast<double>(docs_with_tokens[c]);
  }
  return s;
}

EmotionizedCorpus emotionize_corpus(const Corpus& corpus, const EmotionLexicon& lexicon,
                                    const EmotionizeOptions& options, unsigned workers) {
  validate(options);
  EmotionizedCorpus out;
  const auto& docs = corpus.documents();
  out.documents.resize(docs.size());
  const std::size_t n_workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(docs.size(), 1));

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out.documents[i] = emotionize_document(docs[i], lexicon, options);
  };
  if (n_workers == 1) {
    run(0, docs.size());
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < n_workers; ++w) {
      threads.emplace_back(run, w * docs.size() / n_workers, (w + 1) * docs.size() / n_workers);
    }
  }
  out.stats = enrichment_stats(out.documents);
  return out;
}

}  // namespace emotikon
