#include "emotikon/experiment.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace emotikon {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw DataError("config field '" + key + "': " + what);
}

template <typename T>
T get_as(const json& value, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t> || std::is_same_v<T, unsigned>) {
      if (!value.is_number_unsigned()) bad(key, "expected a non-negative integer");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!value.is_number()) bad(key, "expected a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) bad(key, "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) bad(key, "expected a string");
    }
    return value.get<T>();
  } catch (const json::exception& e) {
    bad(key, e.what());
  }
}

template <typename T>
std::vector<T> get_list(const json& value, const std::string& key) {
  if (!value.is_array()) bad(key, "expected a list");
  std::vector<T> out;
  for (const auto& item : value) out.push_back(get_as<T>(item, key));
  return out;
}

std::string resolve(const std::string& path, const std::filesystem::path& base) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base.empty()) return path;
  return (base / p).string();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

SyntheticCorpusConfig synthetic_from_json(const json& obj) {
  if (!obj.is_object()) throw DataError("synthetic corpus config must be a JSON object");
  SyntheticCorpusConfig c;
  for (const auto& [key, value] : obj.items()) {
    if (key == "docs_per_class") c.docs_per_class = get_as<std::size_t>(value, key);
    else if (key == "min_tokens") c.min_tokens = get_as<std::size_t>(value, key);
    else if (key == "max_tokens") c.max_tokens = get_as<std::size_t>(value, key);
    else if (key == "tokens_per_doc") c.min_tokens = c.max_tokens = get_as<std::size_t>(value, key);
    else if (key == "emotion_rate_fake") c.emotion_rate_fake = get_as<double>(value, key);
    else if (key == "emotion_rate_real") c.emotion_rate_real = get_as<double>(value, key);
    else if (key == "neutral_vocabulary") c.neutral_vocabulary = get_as<std::size_t>(value, key);
    else if (key == "emotional_vocabulary") c.emotional_vocabulary = get_as<std::size_t>(value, key);
    else if (key == "zipf_exponent") c.zipf_exponent = get_as<double>(value, key);
    else if (key == "neutral_lexicon_fraction") c.neutral_lexicon_fraction = get_as<double>(value, key);
    else if (key == "secondary_sense_fraction") c.secondary_sense_fraction = get_as<double>(value, key);
    else if (key == "words_per_sentence") c.words_per_sentence = get_as<std::size_t>(value, key);
    else if (key == "emotions") c.emotions = get_list<std::string>(value, key);
    else if (key == "seed") c.seed = get_as<std::uint64_t>(value, key);
    else bad(key, "unknown synthetic corpus field");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("synthetic corpus config: ") + e.what());
  }
  return c;
}

void embedding_from_json(const json& obj, EmbeddingConfig& e) {
  if (!obj.is_object()) bad("embedding", "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (key == "epochs") e.epochs = get_as<std::size_t>(value, key);
    else if (key == "negatives") e.negatives = get_as<std::size_t>(value, key);
    else if (key == "initial_learning_rate") e.initial_learning_rate = get_as<double>(value, key);
    else if (key == "final_learning_rate") e.final_learning_rate = get_as<double>(value, key);
    else if (key == "min_count") e.min_count = get_as<std::size_t>(value, key);
    else if (key == "noise_exponent") e.noise_exponent = get_as<double>(value, key);
    else bad("embedding." + key, "unknown embedding field");
  }
}

void model_params_from_json(const json& obj, ModelParams& p) {
  if (!obj.is_object()) bad("model_params", "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (key == "knn_k") p.knn_k = get_as<std::size_t>(value, key);
    else if (key == "svm_c") p.svm_c = get_as<double>(value, key);
    else if (key == "svm_epochs") p.svm_epochs = get_as<std::size_t>(value, key);
    else if (key == "tree_max_depth") p.tree_max_depth = get_as<std::size_t>(value, key);
    else if (key == "tree_min_samples_split") p.tree_min_samples_split = get_as<std::size_t>(value, key);
    else if (key == "forest_trees") p.forest_trees = get_as<std::size_t>(value, key);
    else if (key == "forest_max_features") p.forest_max_features = get_as<std::size_t>(value, key);
    else if (key == "forest_bootstrap") p.forest_bootstrap = get_as<bool>(value, key);
    else if (key == "boost_rounds") p.boost_rounds = get_as<std::size_t>(value, key);
    else if (key == "nb_variance_floor") p.nb_variance_floor = get_as<double>(value, key);
    else bad("model_params." + key, "unknown model parameter");
  }
}

void dbscan_from_json(const json& obj, ExperimentGrid& g) {
  if (!obj.is_object()) bad("dbscan", "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (key == "eps") {
      g.dbscan_eps = value.is_array() ? get_list<double>(value, "dbscan.eps")
                                      : std::vector<double>{get_as<double>(value, "dbscan.eps")};
    } else if (key == "min_samples") {
      g.dbscan_min_samples = get_list<std::size_t>(value, "dbscan.min_samples");
    } else {
      bad("dbscan." + key, "unknown field");
    }
  }
}

std::vector<ExternalPredictions> external_from_json(const json& value, const std::filesystem::path& base) {
  std::vector<ExternalPredictions> out;
  if (value.is_string()) {
    out.push_back({"external", 0, std::string(ResultTable::kBaselineColumn), resolve(value.get<std::string>(), base)});
    return out;
  }
  if (!value.is_array()) bad("external_predictions", "expected a path or a list");
  for (const auto& item : value) {
    if (!item.is_object()) bad("external_predictions", "list items must be objects");
    ExternalPredictions p{"external", 0, std::string(ResultTable::kBaselineColumn), {}};
    for (const auto& [key, v] : item.items()) {
      if (key == "method") p.method = get_as<std::string>(v, key);
      else if (key == "d") p.dim = get_as<std::size_t>(v, key);
      else if (key == "column") p.column = get_as<std::string>(v, key);
      else if (key == "tau") p.column = ResultTable::tau_column(get_as<double>(v, key));
      else if (key == "path") p.path = resolve(get_as<std::string>(v, key), base);
      else bad("external_predictions." + key, "unknown field");
    }
    if (p.path.empty()) bad("external_predictions", "missing path");
    out.push_back(std::move(p));
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

SyntheticCorpusConfig parse_synthetic_config(std::string_view json_text) {
  return synthetic_from_json(parse_json(json_text));
}

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw DataError("experiment config must be a JSON object");
  ExperimentConfig c;
  auto& g = c.grid;
  for (const auto& [key, value] : doc.items()) {
    if (key == "corpus") {
      if (value.is_string()) c.corpus_path = resolve(value.get<std::string>(), base_dir);
      else c.synthetic = synthetic_from_json(value);
    } else if (key == "lexicon") {
      c.lexicon_path = resolve(get_as<std::string>(value, key), base_dir);
    } else if (key == "taus") {
      g.taus = get_list<double>(value, key);
    } else if (key == "dims") {
      g.dims = get_list<std::size_t>(value, key);
    } else if (key == "models") {
      g.models.clear();
      for (const auto& name : get_list<std::string>(value, key)) {
        const auto kind = parse_model_kind(name);
        if (!kind) bad(key, "unknown model '" + name + "'");
        g.models.push_back(*kind);
      }
    } else if (key == "model_params") {
      model_params_from_json(value, g.model_params);
    } else if (key == "kmeans_k") {
      g.kmeans_k = get_list<std::size_t>(value, key);
    } else if (key == "dbscan") {
      dbscan_from_json(value, g);
    } else if (key == "n_inits") {
      g.n_inits = get_as<std::size_t>(value, key);
    } else if (key == "folds") {
      g.folds = get_as<std::size_t>(value, key);
    } else if (key == "seed") {
      g.seed = get_as<std::uint64_t>(value, key);
    } else if (key == "embedding") {
      embedding_from_json(value, g.embedding);
    } else if (key == "label_prefix") {
      g.label_prefix = get_as<std::string>(value, key);
    } else if (key == "workers") {
      g.workers = get_as<unsigned>(value, key);
    } else if (key == "reports") {
      c.formats.clear();
      for (const auto& name : get_list<std::string>(value, key)) {
        const auto f = parse_report_format(name);
        if (!f) bad(key, "unknown report format '" + name + "'");
        c.formats.push_back(*f);
      }
    } else if (key == "external_predictions") {
      if (!value.is_null()) c.external = external_from_json(value, base_dir);
    } else {
      bad(key, "unknown field");
    }
  }
  if (!c.corpus_path && !c.synthetic) throw DataError("config is missing 'corpus'");
  if (c.corpus_path && !c.lexicon_path) throw DataError("config is missing 'lexicon'");
  try {
    if (c.run_classification()) g.validate_classification();
    if (c.run_clustering()) g.validate_clustering();
    g.embedding.validate();
    ModelSpec{ModelKind::NaiveBayes, g.model_params}.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid experiment config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text(path), path.parent_path());
}

std::string enrichment_json(const std::map<std::string, EnrichmentStats>& stats) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [column, s] : stats) {
    nlohmann::ordered_json e;
    e["original_tokens"] = s.original_tokens;
    e["inserted_tokens"] = s.inserted_tokens;
    e["lengthening_ratio"] = s.lengthening_ratio;
    e["triggered_fraction"] = s.triggered_fraction;
    e["mean_document_ratio"] = s.mean_document_ratio;
    for (Label label : {Label::Fake, Label::Real}) {
      const auto i = label_index(label);
      nlohmann::ordered_json c;
      c["original_tokens"] = s.class_original_tokens[i];
      c["inserted_tokens"] = s.class_inserted_tokens[i];
      c["lengthening_ratio"] = s.class_lengthening_ratio[i];
      c["mean_document_ratio"] = s.class_mean_document_ratio[i];
      e[std::string(to_string(label))] = std::move(c);
    }
    doc[column] = std::move(e);
  }
  return doc.dump(2) + "\n";
}

ExperimentOutputs run_configured_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                            const ProgressCallback& progress) {
  Corpus corpus;
  std::vector<RawLexiconEntry> raw;
  std::string lexicon_name;
  if (config.synthetic) {
    auto data = generate_synthetic_corpus(*config.synthetic);
    corpus = std::move(data.corpus);
    raw = std::move(data.lexicon);
    lexicon_name = "synthetic";
  } else {
    corpus = load_corpus_file(*config.corpus_path);
  }
  if (config.lexicon_path) {
    raw = read_lexicon_file(*config.lexicon_path);
    lexicon_name = *config.lexicon_path;
  }
  const auto lexicon = collapse_best_sense(raw, lexicon_name);

  ExperimentOptions options;
  options.classification = config.run_classification();
  options.clustering = config.run_clustering();
  options.external = config.external;
  options.progress = progress;

  ExperimentOutputs outputs;
  outputs.result = run_experiment(corpus, lexicon, config.grid, options);

  std::filesystem::create_directories(out_dir);
  const auto emit_all = [&](const ResultTable& table, const std::string& stem) {
    for (const auto format : config.formats) {
      const auto path = out_dir / (stem + "." + std::string(file_extension(format)));
      write_text(path, emit_report(table, format));
      outputs.files.push_back(path);
    }
  };
  if (outputs.result.classification) emit_all(*outputs.result.classification, "classification");
  if (outputs.result.clustering) emit_all(*outputs.result.clustering, "clustering");
  const auto enrichment_path = out_dir / "enrichment.json";
  write_text(enrichment_path, enrichment_json(outputs.result.enrichment));
  outputs.files.push_back(enrichment_path);
  return outputs;
}

}  // namespace emotikon
