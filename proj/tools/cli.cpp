#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "emotikon/classify.hpp"
#include "emotikon/cluster.hpp"
#include "emotikon/corpus.hpp"
#include "emotikon/embedding.hpp"
#include "emotikon/emotionize.hpp"
#include "emotikon/evaluate.hpp"
#include "emotikon/experiment.hpp"
#include "emotikon/lexicon.hpp"
#include "emotikon/report.hpp"
#include "emotikon/rng.hpp"

namespace emotikon::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Text, Json };

void add_format_flag(CLI::App* app, OutputFormat& format) {
  app->add_option("--format", format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"text", OutputFormat::Text},
                                                                              {"json", OutputFormat::Json}}));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Labels for each vector row, looked up by document id.
std::vector<Label> labels_for(const DocVectors& vectors, const Corpus& corpus) {
  std::unordered_map<std::string_view, Label> by_id;
  for (const auto& d : corpus.documents()) by_id.emplace(d.id, d.label);
  std::vector<Label> labels;
  labels.reserve(vectors.ids.size());
  for (const auto& id : vectors.ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("vector id '" + id + "' is not in the corpus");
    labels.push_back(it->second);
  }
  return labels;
}

ordered_json class_stats_json(const ClassStats& s) {
  return {{"documents", s.documents},          {"total_words", s.total_words},
          {"total_sentences", s.total_sentences}, {"avg_words", s.avg_words},
          {"avg_sentences", s.avg_sentences}};
}

ordered_json enrichment_stats_json(const EnrichmentStats& s) {
  ordered_json j{{"original_tokens", s.original_tokens},
                 {"inserted_tokens", s.inserted_tokens},
                 {"lengthening_ratio", s.lengthening_ratio},
                 {"triggered_fraction", s.triggered_fraction},
                 {"mean_document_ratio", s.mean_document_ratio}};
  for (Label label : {Label::Fake, Label::Real}) {
    const auto i = label_index(label);
    j[std::string(to_string(label))] = {{"original_tokens", s.class_original_tokens[i]},
                                        {"inserted_tokens", s.class_inserted_tokens[i]},
                                        {"lengthening_ratio", s.class_lengthening_ratio[i]},
                                        {"mean_document_ratio", s.class_mean_document_ratio[i]}};
  }
  return j;
}

ordered_json counts_json(const std::map<std::string, std::size_t>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::string fixed(double v, int precision = 4) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(precision);
  ss << v;
  return ss.str();
}

// ---- lexicon inspect ----

struct LexiconInspectArgs {
  std::string path;
  double tau = 0.6;
  OutputFormat format = OutputFormat::Text;
};

void run_lexicon_inspect(const LexiconInspectArgs& a, std::ostream& out) {
  const auto raw = read_lexicon_file(a.path);
  const auto s = summarize_lexicon(raw, a.tau);
  if (a.format == OutputFormat::Json) {
    ordered_json j{{"path", a.path},
                   {"raw_entries", s.raw_entries},
                   {"distinct_words", s.distinct_words},
                   {"dropped", s.dropped},
                   {"tau", s.tau},
                   {"raw_at_tau", s.raw_at_tau},
                   {"collapsed_at_tau", s.collapsed_at_tau},
                   {"dropped_at_tau", s.dropped_at_tau},
                   {"dropped_fraction_at_tau", s.dropped_fraction_at_tau()},
                   {"raw_per_emotion", counts_json(s.raw_per_emotion)},
                   {"collapsed_per_emotion", counts_json(s.collapsed_per_emotion)},
                   {"collapsed_per_emotion_at_tau", counts_json(s.collapsed_per_emotion_at_tau)}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "raw entries:        " << s.raw_entries << '\n'
      << "distinct words:     " << s.distinct_words << '\n'
      << "dropped senses:     " << s.dropped << '\n'
      << "entries at tau " << format_double(s.tau) << ": " << s.raw_at_tau << " raw, " << s.collapsed_at_tau
      << " after best-sense collapse (" << s.dropped_at_tau << " dropped, " << fixed(100 * s.dropped_fraction_at_tau(), 1)
      << "%)\n";
  out << "per emotion (collapsed / at tau):\n";
  for (const auto& [emotion, n] : s.collapsed_per_emotion) {
    const auto it = s.collapsed_per_emotion_at_tau.find(emotion);
    out << "  " << emotion << ": " << n << " / " << (it == s.collapsed_per_emotion_at_tau.end() ? 0 : it->second)
        << '\n';
  }
}

// ---- corpus stats / synth ----

struct CorpusStatsArgs {
  std::string path;
  OutputFormat format = OutputFormat::Text;
};

void run_corpus_stats(const CorpusStatsArgs& a, std::ostream& out) {
  const auto corpus = load_corpus_file(a.path);
  const auto stats = corpus_stats(corpus);
  if (a.format == OutputFormat::Json) {
    ordered_json j{{"path", a.path}, {"documents", corpus.size()}};
    for (Label label : {Label::Fake, Label::Real}) j[std::string(to_string(label))] = class_stats_json(stats[label]);
    out << j.dump(2) << '\n';
    return;
  }
  out << "documents: " << corpus.size() << '\n';
  out << "class  docs  words  sentences  avg_words  avg_sentences\n";
  for (Label label : {Label::Fake, Label::Real}) {
    const auto& s = stats[label];
    out << to_string(label) << "  " << s.documents << "  " << s.total_words << "  " << s.total_sentences << "  "
        << fixed(s.avg_words, 2) << "  " << fixed(s.avg_sentences, 2) << '\n';
  }
}

struct CorpusSynthArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string lexicon_out;
};

void run_corpus_synth(const CorpusSynthArgs& a, std::ostream& out) {
  SyntheticCorpusConfig config;
  if (!a.config.empty()) config = parse_synthetic_config(read_text_file(a.config));
  if (a.seed) config.seed = *a.seed;
  const auto data = generate_synthetic_corpus(config);
  write_corpus_file(data.corpus, a.out);
  if (!a.lexicon_out.empty()) {
    std::ofstream lex(a.lexicon_out, std::ios::binary);
    if (!lex) throw std::runtime_error("cannot write '" + a.lexicon_out + "'");
    lex << serialize_lexicon(data.lexicon);
  }
  out << "wrote " << data.corpus.size() << " documents to " << a.out << '\n';
  if (!a.lexicon_out.empty()) out << "wrote " << data.lexicon.size() << " lexicon entries to " << a.lexicon_out << '\n';
}

// ---- emotionize ----

struct EmotionizeArgs {
  std::string corpus;
  std::string lexicon;
  double tau = 0.6;
  std::string out;
  std::string label_prefix;
  std::string stats;
  OutputFormat format = OutputFormat::Text;
  unsigned workers = 1;
};

void run_emotionize(const EmotionizeArgs& a, std::ostream& out) {
  for (char c : a.label_prefix)
    if (!std::isalnum(static_cast<unsigned char>(c))) throw UsageError("--label-prefix must be alphanumeric");
  const auto corpus = load_corpus_file(a.corpus);
  if (corpus.emotionized()) throw DataError("'" + a.corpus + "' is already emotionized");
  const auto lexicon = collapse_best_sense(read_lexicon_file(a.lexicon), a.lexicon);
  const auto result = emotionize_corpus(corpus, lexicon, EmotionizeOptions{a.tau, a.label_prefix}, a.workers);
  write_corpus_file(result.to_corpus(corpus.name()), a.out);
  auto stats_json = enrichment_stats_json(result.stats);
  stats_json["tau"] = a.tau;
  if (!a.stats.empty()) {
    std::ofstream f(a.stats, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + a.stats + "'");
    f << stats_json.dump(2) << '\n';
  }
  if (a.format == OutputFormat::Json) {
    out << stats_json.dump(2) << '\n';
    return;
  }
  const auto& s = result.stats;
  out << "original tokens:   " << s.original_tokens << '\n'
      << "inserted labels:   " << s.inserted_tokens << '\n'
      << "lengthening ratio: " << fixed(s.lengthening_ratio) << '\n';
  for (Label label : {Label::Fake, Label::Real})
    out << "  " << to_string(label) << ": " << fixed(s.class_lengthening_ratio[label_index(label)]) << '\n';
}

// ---- embed ----

struct EmbedArgs {
  std::string corpus;
  std::string out;
  EmbeddingConfig config;
};

void run_embed(const EmbedArgs& a, std::ostream& out) {
  const auto corpus = load_corpus_file(a.corpus);
  const auto vectors = train_pvdbow(corpus, a.config);
  write_doc_vectors_file(vectors, a.out);
  out << "wrote " << vectors.size() << " vectors of dimension " << vectors.dimension() << " to " << a.out << '\n';
}

// ---- classify ----

struct ClassifyArgs {
  std::string vectors;
  std::string corpus;
  std::vector<std::string> models{"all"};
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::string external;
  ModelParams params;
  OutputFormat format = OutputFormat::Text;
};

std::vector<ModelKind> parse_models(const std::vector<std::string>& names) {
  std::vector<ModelKind> kinds;
  for (const auto& name : names) {
    if (name == "all") {
      kinds.insert(kinds.end(), std::begin(kAllModelKinds), std::end(kAllModelKinds));
      continue;
    }
    const auto kind = parse_model_kind(name);
    if (!kind) throw UsageError("unknown model '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

void run_classify(const ClassifyArgs& a, std::ostream& out) {
  const auto kinds = parse_models(a.models);
  for (auto kind : kinds) ModelSpec{kind, a.params}.validate();
  if (a.folds < 2) throw UsageError("--folds must be >= 2");
  if (a.vectors.empty() && a.external.empty()) throw UsageError("classify needs --vectors or --external");

  const auto corpus = load_corpus_file(a.corpus);
  ordered_json results = ordered_json::array();

  if (!a.vectors.empty()) {
    const auto vectors = read_doc_vectors_file(a.vectors);
    const auto labels = labels_for(vectors, corpus);
    if (a.folds > labels.size()) throw UsageError("--folds exceeds the number of documents");
    const auto plan = kfold_split(labels.size(), a.folds, derive_seed(a.seed, "folds"));
    for (auto kind : kinds) {
      const auto seed = derive_seed(a.seed, "classifier", std::string(to_string(kind)) + "/d=" +
                                                              std::to_string(vectors.dimension()));
      const auto cv = crossval_accuracy(vectors.matrix, labels, ModelSpec{kind, a.params}, plan, seed);
      results.push_back({{"model", std::string(short_name(kind))},
                         {"accuracy", cv.summary.mean},
                         {"stddev", cv.summary.stddev},
                         {"folds", cv.summary.samples},
                         {"fold_accuracies", cv.fold_accuracies}});
    }
  }
  if (!a.external.empty()) {
    std::ifstream in(a.external, std::ios::binary);
    if (!in) throw DataError("cannot open '" + a.external + "'");
    const auto preds = read_predictions_csv(in);
    const auto s = score_external_predictions(corpus, preds);
    results.push_back({{"model", "external"}, {"accuracy", s.mean}, {"stddev", s.stddev}, {"predictions", s.samples}});
  }

  if (a.format == OutputFormat::Json) {
    out << results.dump(2) << '\n';
    return;
  }
  for (const auto& r : results) {
    out << r["model"].get<std::string>() << "  accuracy " << fixed(r["accuracy"].get<double>()) << "  std "
        << fixed(r["stddev"].get<double>()) << '\n';
  }
}

// ---- cluster ----

struct ClusterArgs {
  std::string vectors;
  std::string corpus;
  std::string out;
  std::size_t k = 2;
  std::size_t n_inits = 1;
  std::uint64_t seed = 0;
  double eps = 1.0;
  std::size_t min_samples = 5;
  OutputFormat format = OutputFormat::Text;
};

void write_assignment(const std::string& path, const std::vector<std::string>& ids, const std::vector<int>& assignment) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << "doc_id,cluster_id\n";
  for (std::size_t i = 0; i < ids.size(); ++i) f << ids[i] << ',' << assignment[i] << '\n';
}

void check_ids_for_csv(const std::vector<std::string>& ids) {
  for (const auto& id : ids)
    if (id.find(',') != std::string::npos) throw DataError("document id '" + id + "' contains a comma");
}

void run_kmeans(const ClusterArgs& a, std::ostream& out) {
  if (a.k == 0) throw UsageError("--k must be >= 1");
  if (a.n_inits == 0) throw UsageError("--n-inits must be >= 1");
  const auto vectors = read_doc_vectors_file(a.vectors);
  if (a.k > vectors.size()) throw UsageError("--k exceeds the number of vectors");
  std::optional<std::vector<Label>> labels;
  if (!a.corpus.empty()) labels = labels_for(vectors, load_corpus_file(a.corpus));

  const auto seed = derive_seed(a.seed, "kmeans", "d=" + std::to_string(vectors.dimension()) + "/k=" +
                                                       std::to_string(a.k));
  std::optional<Clustering> best;
  std::vector<double> purities;
  kmeans_restarts(vectors.matrix, a.k, a.n_inits, seed, [&](std::size_t, Clustering c) {
    if (labels) purities.push_back(purity(c, *labels));
    if (!best || c.inertia() < best->inertia()) best = std::move(c);
  });
  if (!a.out.empty()) {
    check_ids_for_csv(vectors.ids);
    write_assignment(a.out, vectors.ids, best->assignment);
  }
  ordered_json j{{"algorithm", "kmeans"},
                 {"k", a.k},
                 {"n_inits", a.n_inits},
                 {"seed", a.seed},
                 {"clusters", best->cluster_count},
                 {"best_inertia", best->inertia()}};
  if (labels) {
    const auto s = summarize(purities);
    j["purity"] = s.mean;
    j["purity_std"] = s.stddev;
    j["best_run_purity"] = purity(*best, *labels);
  }
  if (a.format == OutputFormat::Json) {
    out << j.dump(2) << '\n';
    return;
  }
  out << "k-means k=" << a.k << " over " << a.n_inits << " runs, best inertia " << fixed(best->inertia()) << '\n';
  if (labels) out << "mean purity " << fixed(j["purity"].get<double>()) << " (std " << fixed(j["purity_std"].get<double>())
                  << ")\n";
}

void run_dbscan(const ClusterArgs& a, std::ostream& out) {
  if (!(a.eps > 0.0)) throw UsageError("--eps must be > 0");
  if (a.min_samples == 0) throw UsageError("--min-samples must be >= 1");
  const auto vectors = read_doc_vectors_file(a.vectors);
  std::optional<std::vector<Label>> labels;
  if (!a.corpus.empty()) labels = labels_for(vectors, load_corpus_file(a.corpus));
  const auto c = dbscan(vectors.matrix, a.eps, a.min_samples);
  if (!a.out.empty()) {
    check_ids_for_csv(vectors.ids);
    write_assignment(a.out, vectors.ids, c.assignment);
  }
  ordered_json j{{"algorithm", "dbscan"},
                 {"eps", a.eps},
                 {"min_samples", a.min_samples},
                 {"clusters", c.cluster_count},
                 {"noise", c.noise_count()}};
  if (labels) j["purity"] = purity(c, *labels);
  if (a.format == OutputFormat::Json) {
    out << j.dump(2) << '\n';
    return;
  }
  out << "dbscan eps=" << format_double(a.eps) << " min_samples=" << a.min_samples << ": " << c.cluster_count
      << " clusters, " << c.noise_count() << " noise points\n";
  if (labels) out << "purity " << fixed(j["purity"].get<double>()) << '\n';
}

void run_kdist(const ClusterArgs& a, std::ostream& out) {
  if (a.k == 0) throw UsageError("--k must be >= 1");
  const auto vectors = read_doc_vectors_file(a.vectors);
  if (a.k >= vectors.size()) throw UsageError("--k must be smaller than the number of vectors");
  const auto q = quantiles(k_distances(vectors.matrix, a.k));
  ordered_json j{{"k", a.k},         {"min", q.min},       {"q10", q.q10}, {"q25", q.q25},
                 {"median", q.median}, {"q75", q.q75},     {"q90", q.q90}, {"max", q.max}};
  if (a.format == OutputFormat::Json) {
    out << j.dump(2) << '\n';
    return;
  }
  out << a.k << "-distance quantiles:";
  for (const char* key : {"min", "q10", "q25", "median", "q75", "q90", "max"})
    out << ' ' << key << '=' << fixed(j[key].get<double>());
  out << '\n';
}

// ---- experiment run ----

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::optional<unsigned> workers;
  bool quiet = false;
};

void run_experiment_command(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  auto config = load_experiment_config(a.config);
  if (a.workers) config.grid.workers = *a.workers;
  ProgressCallback progress;
  if (!a.quiet) progress = [&err](std::string_view msg) { err << msg << '\n'; };
  const auto outputs = run_configured_experiment(config, a.out, progress);
  for (const auto& f : outputs.files) out << "wrote " << f.string() << '\n';
}

}  // namespace

unsigned default_workers() {
  const char* env = std::getenv("EMOTIKON_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  unsigned value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value == 0)
    throw UsageError("EMOTIKON_WORKERS must be a positive integer");
  return value;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Emotion-enriched text representations for fake news detection", "emotikon"};
  app.require_subcommand(1);

  unsigned env_workers = 1;
  try {
    env_workers = default_workers();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  // lexicon
  auto* lexicon = app.add_subcommand("lexicon", "Emotion lexicon tools")->require_subcommand(1);
  LexiconInspectArgs lex_args;
  auto* lex_inspect = lexicon->add_subcommand("inspect", "Summarize a lexicon file");
  lex_inspect->add_option("path", lex_args.path, "Tab-separated lexicon")->required();
  lex_inspect->add_option("--tau", lex_args.tau, "Intensity threshold")->check(CLI::Range(0.0, 1.0));
  add_format_flag(lex_inspect, lex_args.format);

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Corpus tools")->require_subcommand(1);
  CorpusStatsArgs stats_args;
  auto* corpus_stats_cmd = corpus->add_subcommand("stats", "Per-class document statistics");
  corpus_stats_cmd->add_option("path", stats_args.path, "JSONL corpus")->required();
  add_format_flag(corpus_stats_cmd, stats_args.format);

  CorpusSynthArgs synth_args;
  auto* synth = corpus->add_subcommand("synth", "Generate a synthetic labelled corpus and lexicon");
  synth->add_option("--config", synth_args.config, "JSON generator settings");
  synth->add_option("--seed", synth_args.seed, "Generator seed (overrides the config)");
  synth->add_option("--out", synth_args.out, "Output JSONL corpus")->required();
  synth->add_option("--lexicon-out", synth_args.lexicon_out, "Output lexicon TSV");

  // emotionize
  EmotionizeArgs emo_args;
  emo_args.workers = env_workers;
  auto* emo = app.add_subcommand("emotionize", "Insert emotion labels after emotion-bearing words");
  emo->add_option("--corpus", emo_args.corpus, "Input JSONL corpus")->required();
  emo->add_option("--lexicon", emo_args.lexicon, "Lexicon TSV")->required();
  emo->add_option("--tau", emo_args.tau, "Intensity threshold")->check(CLI::Range(0.0, 1.0));
  emo->add_option("--out", emo_args.out, "Output JSONL corpus")->required();
  emo->add_option("--label-prefix", emo_args.label_prefix, "Prefix for inserted labels");
  emo->add_option("--stats", emo_args.stats, "Write enrichment statistics as JSON");
  emo->add_option("--workers", emo_args.workers, "Worker threads")->check(CLI::PositiveNumber);
  add_format_flag(emo, emo_args.format);

  // embed
  EmbedArgs embed_args;
  embed_args.config.workers = env_workers;
  auto* embed = app.add_subcommand("embed", "Train PV-DBOW document vectors");
  embed->add_option("--corpus", embed_args.corpus, "Input JSONL corpus")->required();
  embed->add_option("--dim", embed_args.config.dimension, "Vector dimension")->check(CLI::PositiveNumber);
  embed->add_option("--seed", embed_args.config.seed, "Random seed");
  embed->add_option("--out", embed_args.out, "Output vector file")->required();
  embed->add_option("--epochs", embed_args.config.epochs, "Training epochs")->check(CLI::PositiveNumber);
  embed->add_option("--negatives", embed_args.config.negatives, "Negative samples per event");
  embed->add_option("--min-count", embed_args.config.min_count, "Minimum word count");
  embed->add_option("--learning-rate", embed_args.config.initial_learning_rate, "Initial learning rate");
  embed->add_option("--workers", embed_args.config.workers, "Worker threads")->check(CLI::PositiveNumber);

  // classify
  ClassifyArgs cls_args;
  auto* cls = app.add_subcommand("classify", "k-fold cross-validated classification accuracy");
  cls->add_option("--vectors", cls_args.vectors, "Document vector file");
  cls->add_option("--corpus", cls_args.corpus, "Corpus providing the labels")->required();
  cls->add_option("--model", cls_args.models, "Model name(s) or 'all'");
  cls->add_option("--folds", cls_args.folds, "Number of folds");
  cls->add_option("--seed", cls_args.seed, "Random seed");
  cls->add_option("--external", cls_args.external, "Score a doc_id,predicted_label CSV");
  cls->add_option("--knn-k", cls_args.params.knn_k, "Neighbours for kNN");
  cls->add_option("--svm-c", cls_args.params.svm_c, "SVM regularization C");
  cls->add_option("--trees", cls_args.params.forest_trees, "Random forest size");
  cls->add_option("--max-depth", cls_args.params.tree_max_depth, "Tree depth limit (0 = none)");
  cls->add_option("--boost-rounds", cls_args.params.boost_rounds, "AdaBoost rounds");
  add_format_flag(cls, cls_args.format);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Unsupervised clustering of document vectors")->require_subcommand(1);
  ClusterArgs km_args, db_args, kd_args;
  auto* km = cluster->add_subcommand("kmeans", "K-Means with random restarts");
  km->add_option("--vectors", km_args.vectors, "Document vector file")->required();
  km->add_option("--k", km_args.k, "Number of clusters")->required();
  km->add_option("--inits,--n-inits", km_args.n_inits, "Random initializations");
  km->add_option("--seed", km_args.seed, "Random seed");
  km->add_option("--corpus", km_args.corpus, "Corpus for purity");
  km->add_option("--out", km_args.out, "Assignment CSV of the lowest-inertia run");
  add_format_flag(km, km_args.format);

  auto* db = cluster->add_subcommand("dbscan", "Density-based clustering");
  db->add_option("--vectors", db_args.vectors, "Document vector file")->required();
  db->add_option("--eps", db_args.eps, "Neighbourhood radius")->required();
  db->add_option("--min-samples", db_args.min_samples, "Core point threshold")->required();
  db->add_option("--corpus", db_args.corpus, "Corpus for purity");
  db->add_option("--out", db_args.out, "Assignment CSV (-1 marks noise)");
  add_format_flag(db, db_args.format);

  auto* kd = cluster->add_subcommand("kdist", "Quantiles of k-nearest-neighbour distances");
  kd->add_option("--vectors", kd_args.vectors, "Document vector file")->required();
  kd->add_option("--k", kd_args.k, "Neighbour rank")->required();
  add_format_flag(kd, kd_args.format);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Experiment grids")->require_subcommand(1);
  ExperimentArgs exp_args;
  auto* exp_run = experiment->add_subcommand("run", "Run a configured grid and write reports");
  exp_run->add_option("--config", exp_args.config, "Experiment JSON")->required();
  exp_run->add_option("--out", exp_args.out, "Report directory")->required();
  exp_run->add_option("--workers", exp_args.workers, "Worker threads")->check(CLI::PositiveNumber);
  exp_run->add_flag("--quiet", exp_args.quiet, "Suppress progress messages");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (lex_inspect->parsed()) run_lexicon_inspect(lex_args, out);
    else if (corpus_stats_cmd->parsed()) run_corpus_stats(stats_args, out);
    else if (synth->parsed()) run_corpus_synth(synth_args, out);
    else if (emo->parsed()) run_emotionize(emo_args, out);
    else if (embed->parsed()) run_embed(embed_args, out);
    else if (cls->parsed()) run_classify(cls_args, out);
    else if (km->parsed()) run_kmeans(km_args, out);
    else if (db->parsed()) run_dbscan(db_args, out);
    else if (kd->parsed()) run_kdist(kd_args, out);
    else if (exp_run->parsed()) run_experiment_command(exp_args, out, err);
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace emotikon::cli
