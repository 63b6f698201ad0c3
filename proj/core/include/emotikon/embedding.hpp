#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "emotikon/common.hpp"
#include "emotikon/corpus.hpp"

namespace emotikon {

struct EmbeddingConfig {
  std::size_t dimension = 100;
  std::size_t epochs = 50;
  std::size_t negatives = 5;
  double initial_learning_rate = 0.025;
  double final_learning_rate = 0.0001;
  std::size_t min_count = 2;
  double noise_exponent = 0.75;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

// One row per document, aligned with the corpus order.
struct DocVectors {
  Matrix matrix;
  std::vector<std::string> ids;
  EmbeddingConfig config;

  std::size_t size() const { return matrix.rows(); }
  std::size_t dimension() const { return matrix.cols(); }
};

// Training vocabulary: words with count >= min_count, ordered by descending
// count and then lexicographically.
class Vocabulary {
 public:
  Vocabulary(const Corpus& corpus, std::size_t min_count);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  // -1 for out-of-vocabulary words.
  std::ptrdiff_t index(const std::string& word) const;

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct EventGradient {
  double objective = 0.0;
  std::vector<double> doc;
  std::vector<double> word;
  std::vector<std::vector<double>> negatives;
};

// Negative-sampling objective for one (document, target word) event:
//   log sigma(v.u_w) + sum_n log sigma(-v.u_n)
// and its analytic gradient with respect to every input vector.
// Throws std::invalid_argument when vector lengths disagree.
EventGradient objective_and_gradient(std::span<const double> doc_vector, std::span<const double> word_vector,
                                     std::span<const std::span<const double>> negative_vectors);

double log_sigmoid(double x);
double sigmoid(double x);

// Walker/Vose alias table for O(1) sampling from a discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  template <typename Gen>
  std::size_t sample(Gen& rng) const {
    const auto i = static_cast<std::size_t>(rng.below(probability_.size()));
    return rng.uniform() < probability_[i] ? i : alias_[i];
  }
  std::size_t size() const { return probability_.size(); }

 private:
  std::vector<double> probability_;
  std::vector<std::size_t> alias_;
};

// PV-DBOW trainer. Each document vector is trained to predict the document's
// in-vocabulary tokens against negatives drawn from the unigram distribution
// raised to noise_exponent. The learning rate decays linearly per processed
// token over the configured number of epochs. With workers == 1 the result is
// bit-reproducible for a fixed seed; with more workers, threads share the
// parameter matrices without locking.
class PvDbowTrainer {
 public:
  // Throws DataError when the corpus or the filtered vocabulary is empty.
  PvDbowTrainer(const Corpus& corpus, EmbeddingConfig config);

  void train_epoch();
  void train();

  std::size_t epochs_done() const { return epochs_done_; }
  const EmbeddingConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  // Per-document token indices after dropping out-of-vocabulary words.
  const std::vector<std::vector<std::uint32_t>>& encoded_documents() const { return docs_; }
  const Matrix& doc_matrix() const { return doc_vectors_; }
  const Matrix& output_matrix() const { return output_vectors_; }
  // Negative-sampling probability of each vocabulary index.
  const std::vector<double>& noise_distribution() const { return noise_probabilities_; }

  // Mean per-event objective over every (document, token) pair, with
  // negatives drawn from a generator seeded by `eval_seed`.
  double mean_objective(std::uint64_t eval_seed) const;

  DocVectors result(const std::vector<std::string>& ids) const;

 private:
  void train_range(std::size_t begin, std::size_t end, std::uint64_t seed, bool shared);

  EmbeddingConfig config_;
  Vocabulary vocab_;
  std::vector<std::vector<std::uint32_t>> docs_;
  Matrix doc_vectors_;
  Matrix output_vectors_;
  std::vector<double> noise_probabilities_;
  AliasTable noise_;
  std::size_t epochs_done_ = 0;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t processed_ = 0;
};

// Builds the trainer, runs all epochs and returns the document vectors.
DocVectors train_pvdbow(const Corpus& corpus, const EmbeddingConfig& config);

// "N d" header then "id v1 ... vd" per row; values use the shortest
// round-trip decimal form. Throws DataError for ids containing whitespace.
void write_doc_vectors(const DocVectors& vectors, std::ostream& out);
void write_doc_vectors_file(const DocVectors& vectors, const std::string& path);
DocVectors read_doc_vectors(std::istream& in);
DocVectors read_doc_vectors_file(const std::string& path);

// Mean cosine similarity within and across the two label classes.
struct CosineSeparation {
  double within = 0.0;
  double between = 0.0;
};
CosineSeparation cosine_separation(const Matrix& vectors, std::span<const Label> labels);

}  // namespace emotikon
