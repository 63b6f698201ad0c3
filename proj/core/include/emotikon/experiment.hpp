#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emotikon/corpus.hpp"
#include "emotikon/evaluate.hpp"
#include "emotikon/report.hpp"

namespace emotikon {

// Parsed experiment configuration file.
//
//   {
//     "corpus": "news.jsonl" | { synthetic corpus fields },
//     "lexicon": "lexicon.tsv",           // optional with a synthetic corpus
//     "taus": [0.0, 0.2, 0.4, 0.6, 0.8],
//     "dims": [100, 300],
//     "models": ["naive_bayes", "knn", ...],
//     "model_params": { "knn_k": 5, ... },
//     "kmeans_k": [2, 4, 7, 10, 15, 20],
//     "dbscan": { "eps": 1.0 | [..], "min_samples": [20, 40, 60, 80, 100] },
//     "n_inits": 1000,
//     "folds": 10,
//     "seed": 0,
//     "embedding": { "epochs": 50, "negatives": 5, ... },
//     "label_prefix": "",
//     "workers": 1,
//     "reports": ["csv", "json", "markdown"],
//     "external_predictions": "preds.csv" | [{ "method", "d", "column", "path" }]
//   }
//
// Omitted fields keep the ExperimentGrid defaults. An empty "models" list
// skips classification; empty "kmeans_k" and "dbscan.min_samples" skip
// clustering. Relative paths resolve against the config file's directory.
struct ExperimentConfig {
  std::optional<std::string> corpus_path;
  std::optional<SyntheticCorpusConfig> synthetic;
  std::optional<std::string> lexicon_path;
  ExperimentGrid grid;
  std::vector<ExternalPredictions> external;
  std::vector<ReportFormat> formats{ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown};

  bool run_classification() const { return !grid.models.empty(); }
  bool run_clustering() const { return !grid.kmeans_k.empty() || !grid.dbscan_min_samples.empty(); }
};

// Throws DataError for malformed JSON, unknown keys, or wrongly typed values.
ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

SyntheticCorpusConfig parse_synthetic_config(std::string_view json_text);

// Files written by run_configured_experiment.
struct ExperimentOutputs {
  std::vector<std::filesystem::path> files;
  ExperimentResult result;
};

// Loads or generates the corpus and lexicon, runs the grid, and writes
// classification.<ext>, clustering.<ext> and enrichment.json into out_dir.
ExperimentOutputs run_configured_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                            const ProgressCallback& progress = {});

// JSON rendering of enrichment statistics keyed by column name.
std::string enrichment_json(const std::map<std::string, EnrichmentStats>& stats);

}  // namespace emotikon
