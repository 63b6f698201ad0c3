#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emotikon/classify.hpp"
#include "emotikon/common.hpp"
#include "emotikon/corpus.hpp"
#include "emotikon/embedding.hpp"
#include "emotikon/emotionize.hpp"
#include "emotikon/lexicon.hpp"

namespace emotikon {

struct FoldPlan {
  std::size_t k = 0;
  // Ascending indices per fold.
  std::vector<std::vector<std::size_t>> folds;
  std::uint64_t seed = 0;

  std::size_t n() const;
  // Indices outside fold f, ascending.
  std::vector<std::size_t> complement(std::size_t f) const;
};

// Seeded uniform shuffle of 0..n-1 cut into k contiguous chunks whose sizes
// differ by at most one. Throws std::invalid_argument unless 2 <= k <= n.
FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for fewer than 2 samples
  std::size_t samples = 0;
};
MetricSummary summarize(std::span<const double> values);

struct CrossValidation {
  MetricSummary summary;
  std::vector<double> fold_accuracies;
};

// Fits on the complement of each fold and scores the fold; the result is the
// unweighted mean of the k fold accuracies. Fold f is fitted with seed
// derive_seed(seed, "fold", f).
CrossValidation crossval_accuracy(const Matrix& vectors, std::span<const Label> labels, const ModelSpec& spec,
                                  const FoldPlan& plan, std::uint64_t seed);

struct ExperimentGrid {
  std::vector<double> taus{0.0, 0.2, 0.4, 0.6, 0.8};
  std::vector<std::size_t> dims{100, 300};
  std::vector<ModelKind> models{std::begin(kAllModelKinds), std::end(kAllModelKinds)};
  ModelParams model_params;
  std::vector<std::size_t> kmeans_k{2, 4, 7, 10, 15, 20};
  std::vector<double> dbscan_eps{1.0};
  std::vector<std::size_t> dbscan_min_samples{20, 40, 60, 80, 100};
  std::size_t n_inits = 1000;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  // dimension and seed are overridden per cell.
  EmbeddingConfig embedding;
  std::string label_prefix;
  unsigned workers = 1;

  // Throws std::invalid_argument on an invalid axis.
  void validate_classification() const;
  void validate_clustering() const;
};

struct ResultCell {
  std::optional<double> mean;
  double stddev = 0.0;
  std::size_t samples = 0;

  friend bool operator==(const ResultCell&, const ResultCell&) = default;
};

struct ResultRow {
  std::string method;
  std::size_t dim = 0;
  std::optional<std::size_t> k;
  std::optional<std::size_t> min_samples;
  std::optional<double> eps;
  // Aligned with ResultTable::columns.
  std::vector<ResultCell> cells;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Baseline (raw corpus) column followed by one column per tau.
struct ResultTable {
  std::string metric;  // "accuracy" or "purity"
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;

  static std::string tau_column(double tau);
  static constexpr std::string_view kBaselineColumn = "baseline";

  // Column index by name, or nullopt.
  std::optional<std::size_t> column_index(std::string_view name) const;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

// Externally produced predictions (e.g. from a neural model) scored against
// the corpus labels and placed into the classification table.
struct ExternalPredictions {
  std::string method;
  std::size_t dim = 0;
  std::string column = std::string(ResultTable::kBaselineColumn);
  std::string path;
};

// Reads "doc_id,predicted_label" rows; a first line "doc_id,predicted_label"
// is treated as a header. Throws ParseError on malformed rows.
std::vector<std::pair<std::string, Label>> read_predictions_csv(std::istream& in);

// Accuracy of the predictions against the corpus labels. Throws DataError for
// ids missing from the corpus, duplicates, or an empty file.
MetricSummary score_external_predictions(const Corpus& corpus,
                                         std::span<const std::pair<std::string, Label>> predictions);

using ProgressCallback = std::function<void(std::string_view)>;

struct ExperimentResult {
  std::optional<ResultTable> classification;
  std::optional<ResultTable> clustering;
  // Enrichment statistics per tau column name.
  std::map<std::string, EnrichmentStats> enrichment;
};

struct ExperimentOptions {
  bool classification = true;
  bool clustering = true;
  std::vector<ExternalPredictions> external;
  ProgressCallback progress;
};

// Embeds the raw corpus and each emotionized variant once per dimension and
// runs the requested tables over the shared vectors. Embedding seeds depend
// only on (master seed, d), and fold plans only on the master seed, so every
// representation sees identical randomness.
// Throws DataError for an empty or single-class corpus.
ExperimentResult run_experiment(const Corpus& corpus, const EmotionLexicon& lexicon, const ExperimentGrid& grid,
                                const ExperimentOptions& options = {});

// Rows: one per (model, d); cells: k-fold mean accuracy.
ResultTable run_classification_experiment(const Corpus& corpus, const EmotionLexicon& lexicon,
                                          const ExperimentGrid& grid);

// Rows: K-Means per (d, k) with mean purity over n_inits restarts, then
// DBSCAN per (d, eps, min_samples) from a single run.
ResultTable run_clustering_experiment(const Corpus& corpus, const EmotionLexicon& lexicon,
                                      const ExperimentGrid& grid);

}  // namespace emotikon
