#include "emotikon/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "emotikon/cluster.hpp"
#include "emotikon/rng.hpp"

namespace emotikon {

std::size_t FoldPlan::n() const {
  std::size_t total = 0;
  for (const auto& f : folds) total += f.size();
  return total;
}

std::vector<std::size_t> FoldPlan::complement(std::size_t f) const {
  std::vector<std::size_t> out;
  out.reserve(n() - folds[f].size());
  for (std::size_t g = 0; g < folds.size(); ++g)
    if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
  std::sort(out.begin(), out.end());
  return out;
}

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) throw std::invalid_argument("k-fold split needs 2 <= k <= n");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  FoldPlan plan{k, {}, seed};
  plan.folds.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    plan.folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(f * n / k),
                         order.begin() + static_cast<std::ptrdiff_t>((f + 1) * n / k));
    std::sort(plan.folds[f].begin(), plan.folds[f].end());
  }
  return plan;
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  s.samples = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

CrossValidation crossval_accuracy(const Matrix& vectors, std::span<const Label> labels, const ModelSpec& spec,
                                  const FoldPlan& plan, std::uint64_t seed) {
  if (labels.size() != vectors.rows()) throw std::invalid_argument("vectors and labels are not aligned");
  if (plan.n() != vectors.rows()) throw std::invalid_argument("fold plan does not cover the vectors");
  CrossValidation cv;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto train_idx = plan.complement(f);
    const auto& test_idx = plan.folds[f];
    std::vector<Label> train_labels, test_labels;
    for (auto i : train_idx) train_labels.push_back(labels[i]);
    for (auto i : test_idx) test_labels.push_back(labels[i]);
    const auto model = TrainedModel::fit(spec, vectors.select_rows(train_idx), train_labels,
                                         derive_seed(seed, "fold", std::to_string(f)));
    const auto predicted = model.predict(vectors.select_rows(test_idx));
    cv.fold_accuracies.push_back(accuracy(predicted, test_labels));
  }
  cv.summary = summarize(cv.fold_accuracies);
  return cv;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("experiment grid: " + what);
}

void validate_common(const ExperimentGrid& g) {
  for (double t : g.taus) require(t >= 0.0 && t <= 1.0, "tau values must lie in [0, 1]");
  std::set<std::string> cols;
  for (double t : g.taus) require(cols.insert(ResultTable::tau_column(t)).second, "duplicate tau value");
  require(!g.dims.empty(), "dims must be non-empty");
  for (auto d : g.dims) require(d >= 1, "dims must be >= 1");
  require(std::set<std::size_t>(g.dims.begin(), g.dims.end()).size() == g.dims.size(), "duplicate dims");
  require(g.workers >= 1, "workers must be >= 1");
  auto e = g.embedding;
  e.dimension = 1;
  e.validate();
}

// Runs tasks 0..count-1 over up to `workers` threads. The first exception
// thrown by any task is rethrown after all threads finish.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string dim_key(std::size_t d) { return "d=" + std::to_string(d); }

}  // namespace

void ExperimentGrid::validate_classification() const {
  validate_common(*this);
  require(!models.empty(), "models must be non-empty");
  require(folds >= 2, "folds must be >= 2");
  ModelSpec{ModelKind::NaiveBayes, model_params}.validate();
}

void ExperimentGrid::validate_clustering() const {
  validate_common(*this);
  require(!kmeans_k.empty() || !dbscan_min_samples.empty(), "no clustering settings");
  for (auto k : kmeans_k) require(k >= 1, "k-means k must be >= 1");
  require(kmeans_k.empty() || n_inits >= 1, "n_inits must be >= 1");
  require(dbscan_min_samples.empty() || !dbscan_eps.empty(), "DBSCAN needs at least one eps");
  for (double e : dbscan_eps) require(e > 0.0, "DBSCAN eps must be > 0");
  for (auto m : dbscan_min_samples) require(m >= 1, "DBSCAN min_samples must be >= 1");
}

std::string ResultTable::tau_column(double tau) {
  std::string s = format_double(tau);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
  return "tau=" + s;
}

std::optional<std::size_t> ResultTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  return std::nullopt;
}

std::vector<std::pair<std::string, Label>> read_predictions_csv(std::istream& in) {
  std::vector<std::pair<std::string, Label>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "doc_id,predicted_label") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(line_no, "expected 'doc_id,predicted_label'");
    }
    try {
      out.emplace_back(line.substr(0, comma), parse_label(std::string_view(line).substr(comma + 1)));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

MetricSummary score_external_predictions(const Corpus& corpus,
                                         std::span<const std::pair<std::string, Label>> predictions) {
  if (predictions.empty()) throw DataError("external predictions file is empty");
  std::unordered_map<std::string, Label> gold;
  for (const auto& d : corpus.documents()) gold.emplace(d.id, d.label);
  std::set<std::string> seen;
  std::size_t agree = 0;
  for (const auto& [id, label] : predictions) {
    const auto it = gold.find(id);
    if (it == gold.end()) throw DataError("prediction for unknown document '" + id + "'");
    if (!seen.insert(id).second) throw DataError("duplicate prediction for document '" + id + "'");
    agree += it->second == label;
  }
  return {static_cast<double>(agree) / static_cast<double>(predictions.size()), 0.0, predictions.size()};
}

ExperimentResult run_experiment(const Corpus& corpus, const EmotionLexicon& lexicon, const ExperimentGrid& grid,
                                const ExperimentOptions& options) {
  if (corpus.empty()) throw DataError("experiment needs a non-empty corpus");
  if (!corpus.has_both_labels()) throw DataError("experiment needs documents of both labels");
  if (options.classification) grid.validate_classification();
  if (options.clustering) grid.validate_clustering();

  std::mutex progress_mutex;
  auto report = [&](const std::string& msg) {
    if (!options.progress) return;
    std::lock_guard lock(progress_mutex);
    options.progress(msg);
  };

  ExperimentResult result;
  const auto labels = corpus.labels();
  const std::uint64_t master = grid.seed;

  std::vector<std::string> columns{std::string(ResultTable::kBaselineColumn)};
  std::vector<Corpus> representations{corpus};
  for (double tau : grid.taus) {
    const auto column = ResultTable::tau_column(tau);
    auto emotionized = emotionize_corpus(corpus, lexicon, EmotionizeOptions{tau, grid.label_prefix}, grid.workers);
    result.enrichment.emplace(column, emotionized.stats);
    representations.push_back(emotionized.to_corpus(column));
    columns.push_back(column);
  }
  const std::size_t n_reps = representations.size();
  const std::size_t n_dims = grid.dims.size();

  // vectors[r * n_dims + di]
  std::vector<Matrix> vectors(n_reps * n_dims);
  parallel_for(vectors.size(), grid.workers, [&](std::size_t task) {
    const std::size_t r = task / n_dims;
    const std::size_t di = task % n_dims;
    EmbeddingConfig cfg = grid.embedding;
    cfg.dimension = grid.dims[di];
    cfg.seed = derive_seed(master, "embedding", dim_key(grid.dims[di]));
    cfg.workers = 1;
    report("embedding " + columns[r] + " " + dim_key(cfg.dimension));
    vectors[task] = train_pvdbow(representations[r], cfg).matrix;
  });
  auto vectors_for = [&](std::size_t r, std::size_t di) -> const Matrix& { return vectors[r * n_dims + di]; };

  if (options.classification) {
    ResultTable table;
    table.metric = "accuracy";
    table.columns = columns;
    const auto plan = kfold_split(corpus.size(), grid.folds, derive_seed(master, "folds"));
    for (std::size_t di = 0; di < n_dims; ++di) {
      for (const ModelKind kind : grid.models) {
        ResultRow row;
        row.method = std::string(short_name(kind));
        row.dim = grid.dims[di];
        row.cells.resize(n_reps);
        table.rows.push_back(std::move(row));
      }
    }
    const std::size_t n_models = grid.models.size();
    parallel_for(table.rows.size() * n_reps, grid.workers, [&](std::size_t task) {
      const std::size_t row_index = task / n_reps;
      const std::size_t r = task % n_reps;
      const std::size_t di = row_index / n_models;
      const ModelKind kind = grid.models[row_index % n_models];
      const auto seed = derive_seed(master, "classifier", std::string(to_string(kind)) + "/" + dim_key(grid.dims[di]));
      report("classify " + std::string(short_name(kind)) + " " + dim_key(grid.dims[di]) + " " + columns[r]);
      const auto cv = crossval_accuracy(vectors_for(r, di), labels, ModelSpec{kind, grid.model_params}, plan, seed);
      auto& cell = table.rows[row_index].cells[r];
      cell.mean = cv.summary.mean;
      cell.stddev = cv.summary.stddev;
      cell.samples = cv.summary.samples;
    });

    for (const auto& ext : options.external) {
      std::optional<std::size_t> col = table.column_index(ext.column);
      if (!col) throw DataError("external predictions target unknown column '" + ext.column + "'");
      auto it = std::find_if(table.rows.begin(), table.rows.end(),
                             [&](const ResultRow& r) { return r.method == ext.method && r.dim == ext.dim; });
      if (it == table.rows.end()) {
        ResultRow row;
        row.method = ext.method;
        row.dim = ext.dim;
        row.cells.resize(n_reps);
        table.rows.push_back(std::move(row));
        it = std::prev(table.rows.end());
      }
      auto& cell = it->cells[*col];
      if (cell.mean) throw DataError("duplicate external predictions for " + ext.method + " " + ext.column);
      std::ifstream in(ext.path, std::ios::binary);
      if (!in) throw DataError("cannot open external predictions '" + ext.path + "'");
      const auto preds = read_predictions_csv(in);
      const auto s = score_external_predictions(corpus, preds);
      cell.mean = s.mean;
      cell.stddev = s.stddev;
      cell.samples = s.samples;
    }
    result.classification = std::move(table);
  }

  if (options.clustering) {
    ResultTable table;
    table.metric = "purity";
    table.columns = columns;
    struct Setting {
      std::size_t di;
      bool kmeans;
      std::size_t k_or_ms;
      double eps;
    };
    std::vector<Setting> settings;
    for (std::size_t di = 0; di < n_dims; ++di) {
      for (auto k : grid.kmeans_k) {
        if (k > corpus.size()) throw std::invalid_argument("k-means k exceeds the number of documents");
        settings.push_back({di, true, k, 0.0});
        ResultRow row;
        row.method = "KMeans";
        row.dim = grid.dims[di];
        row.k = k;
        row.cells.resize(n_reps);
        table.rows.push_back(std::move(row));
      }
    }
    for (std::size_t di = 0; di < n_dims; ++di) {
      for (double eps : grid.dbscan_eps) {
        for (auto ms : grid.dbscan_min_samples) {
          settings.push_back({di, false, ms, eps});
          ResultRow row;
          row.method = "DBSCAN";
          row.dim = grid.dims[di];
          row.min_samples = ms;
          row.eps = eps;
          row.cells.resize(n_reps);
          table.rows.push_back(std::move(row));
        }
      }
    }
    parallel_for(settings.size() * n_reps, grid.workers, [&](std::size_t task) {
      const std::size_t row_index = task / n_reps;
      const std::size_t r = task % n_reps;
      const auto& s = settings[row_index];
      const Matrix& x = vectors_for(r, s.di);
      auto& cell = table.rows[row_index].cells[r];
      if (s.kmeans) {
        report("kmeans k=" + std::to_string(s.k_or_ms) + " " + dim_key(grid.dims[s.di]) + " " + columns[r]);
        const auto seed = derive_seed(master, "kmeans", dim_key(grid.dims[s.di]) + "/k=" + std::to_string(s.k_or_ms));
        std::vector<double> purities;
        purities.reserve(grid.n_inits);
        kmeans_restarts(x, s.k_or_ms, grid.n_inits, seed,
                        [&](std::size_t, const Clustering& c) { purities.push_back(purity(c, labels)); });
        const auto summary = summarize(purities);
        cell.mean = summary.mean;
        cell.stddev = summary.stddev;
        cell.samples = summary.samples;
      } else {
        report("dbscan ms=" + std::to_string(s.k_or_ms) + " " + dim_key(grid.dims[s.di]) + " " + columns[r]);
        cell.mean = purity(dbscan(x, s.eps, s.k_or_ms), labels);
        cell.samples = 1;
      }
    });
    result.clustering = std::move(table);
  }
  return result;
}

ResultTable run_classification_experiment(const Corpus& corpus, const EmotionLexicon& lexicon,
                                          const ExperimentGrid& grid) {
  ExperimentOptions options;
  options.clustering = false;
  return *run_experiment(corpus, lexicon, grid, options).classification;
}

ResultTable run_clustering_experiment(const Corpus& corpus, const EmotionLexicon& lexicon,
                                      const ExperimentGrid& grid) {
  ExperimentOptions options;
  options.classification = false;
  return *run_experiment(corpus, lexicon, grid, options).clustering;
}

}  // namespace emotikon
