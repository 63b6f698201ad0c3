#include "emotikon/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "emotikon/lexicon.hpp"
#include "emotikon/rng.hpp"
#include "emotikon/text.hpp"

namespace emotikon {

void EmbeddingConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("embedding config: ") + what);
  };
  require(dimension >= 1, "dimension must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(negatives >= 1, "negatives must be >= 1");
  require(final_learning_rate > 0.0 && final_learning_rate <= initial_learning_rate,
          "need 0 < final_learning_rate <= initial_learning_rate");
  require(min_count >= 1, "min_count must be >= 1");
  require(noise_exponent >= 0.0, "noise_exponent must be >= 0");
  require(workers >= 1, "workers must be >= 1");
}

Vocabulary::Vocabulary(const Corpus& corpus, std::size_t min_count) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& doc : corpus.documents())
    for (const auto& t : doc.tokens) ++counts[t];
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, count] : counts)
    if (count >= min_count) kept.emplace_back(word, count);
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (auto& [word, count] : kept) {
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    counts_.push_back(count);
  }
}

std::ptrdiff_t Vocabulary::index(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

EventGradient objective_and_gradient(std::span<const double> doc_vector, std::span<const double> word_vector,
                                     std::span<const std::span<const double>> negative_vectors) {
  const std::size_t d = doc_vector.size();
  if (word_vector.size() != d) throw std::invalid_argument("word vector length differs from document vector");
  for (const auto& n : negative_vectors)
    if (n.size() != d) throw std::invalid_argument("negative vector length differs from document vector");

  EventGradient g;
  g.doc.assign(d, 0.0);
  g.word.assign(d, 0.0);

  const double pos = dot(doc_vector, word_vector);
  g.objective = log_sigmoid(pos);
  // d/dx log sigma(x) = 1 - sigma(x)
  const double pos_coeff = 1.0 - sigmoid(pos);
  for (std::size_t j = 0; j < d; ++j) {
    g.doc[j] += pos_coeff * word_vector[j];
    g.word[j] = pos_coeff * doc_vector[j];
  }
  for (const auto& n : negative_vectors) {
    const double neg = dot(doc_vector, n);
    g.objective += log_sigmoid(-neg);
    // d/dx log sigma(-x) = -sigma(x)
    const double neg_coeff = -sigmoid(neg);
    std::vector<double> grad(d);
    for (std::size_t j = 0; j < d; ++j) {
      g.doc[j] += neg_coeff * n[j];
      grad[j] = neg_coeff * doc_vector[j];
    }
    g.negatives.push_back(std::move(grad));
  }
  return g;
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one weight");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("alias table weights must have a positive sum");

  probability_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    probability_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) probability_[i] = 1.0;
  for (std::size_t i : small) probability_[i] = 1.0;
}

PvDbowTrainer::PvDbowTrainer(const Corpus& corpus, EmbeddingConfig config)
    : config_(std::move(config)), vocab_(corpus, config_.min_count) {
  config_.validate();
  if (corpus.empty()) throw DataError("cannot train embeddings on an empty corpus");
  if (vocab_.empty()) throw DataError("vocabulary is empty after min-count filtering");

  docs_.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    std::vector<std::uint32_t> encoded;
    encoded.reserve(doc.tokens.size());
    for (const auto& t : doc.tokens) {
      const auto idx = vocab_.index(t);
      if (idx >= 0) encoded.push_back(static_cast<std::uint32_t>(idx));
    }
    total_tokens_ += encoded.size();
    docs_.push_back(std::move(encoded));
  }
  total_tokens_ *= config_.epochs;

  const std::size_t d = config_.dimension;
  doc_vectors_ = Matrix(corpus.size(), d);
  output_vectors_ = Matrix(vocab_.size(), d);
  Rng init(derive_seed(config_.seed, "pvdbow-init"));
  const double half_width = 0.5 / static_cast<double>(d);
  for (double& v : doc_vectors_.data()) v = init.uniform(-half_width, half_width);

  noise_probabilities_.resize(vocab_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    noise_probabilities_[i] = std::pow(static_cast<double>(vocab_.count(i)), config_.noise_exponent);
    total += noise_probabilities_[i];
  }
  for (auto& p : noise_probabilities_) p /= total;
  noise_ = AliasTable(noise_probabilities_);
}

namespace {

// Relaxed atomic accessors for threads sharing the parameter matrices.
inline double load(double& x) { return std::atomic_ref<double>(x).load(std::memory_order_relaxed); }

inline void add(double& x, double delta) {
  std::atomic_ref<double> ref(x);
  ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
}

struct TrainState {
  double* doc_base;
  double* out_base;
  std::size_t d;
  std::size_t negatives;
  const AliasTable* noise;
  double lr0;
  double lr1;
  std::uint64_t total;
};

[[gnu::target_clones("avx2", "default")]] double dot_unrolled(const double* __restrict a,
                                                              const double* __restrict b, std::size_t d) {
  double acc[8] = {};
  std::size_t j = 0;
  for (; j + 8 <= d; j += 8)
    for (std::size_t l = 0; l < 8; ++l) acc[l] += a[j + l] * b[j + l];
  for (; j < d; ++j) acc[0] += a[j] * b[j];
  return ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
}

[[gnu::target_clones("avx2", "default")]] void event_update(const double* __restrict v, double* __restrict u, double* __restrict doc_update, double g,
                         std::size_t d) {
  for (std::size_t j = 0; j < d; ++j) {
    doc_update[j] += g * u[j];
    u[j] += g * v[j];
  }
}

void train_document_single(const TrainState& s, std::size_t doc_index, const std::vector<std::uint32_t>& words,
                           std::uint64_t processed_before, Rng& rng, std::vector<double>& doc_update) {
  const std::size_t d = s.d;
  double* v = s.doc_base + doc_index * d;
  const double span = s.lr0 - s.lr1;
  const double total = static_cast<double>(s.total);
  std::uint64_t processed = processed_before;
  for (const std::uint32_t word : words) {
    const double lr = std::max(s.lr1, s.lr0 - span * static_cast<double>(processed) / total);
    ++processed;
    std::fill(doc_update.begin(), doc_update.end(), 0.0);
    for (std::size_t k = 0; k <= s.negatives; ++k) {
      const std::size_t target = k == 0 ? word : s.noise->sample(rng);
      if (k > 0 && target == word) continue;
      const double label = k == 0 ? 1.0 : 0.0;
      double* u = s.out_base + target * d;
      const double g = (label - sigmoid(dot_unrolled(v, u, d))) * lr;
      event_update(v, u, doc_update.data(), g, d);
    }
    for (std::size_t j = 0; j < d; ++j) v[j] += doc_update[j];
  }
}

void train_document_shared(const TrainState& s, std::size_t doc_index, const std::vector<std::uint32_t>& words,
                           std::uint64_t processed_before, Rng& rng, std::vector<double>& doc_update) {
  const std::size_t d = s.d;
  double* v = s.doc_base + doc_index * d;
  const double span = s.lr0 - s.lr1;
  const double total = static_cast<double>(s.total);
  std::uint64_t processed = processed_before;
  for (const std::uint32_t word : words) {
    const double lr = std::max(s.lr1, s.lr0 - span * static_cast<double>(processed) / total);
    ++processed;
    std::fill(doc_update.begin(), doc_update.end(), 0.0);
    for (std::size_t k = 0; k <= s.negatives; ++k) {
      std::size_t target;
      double label;
      if (k == 0) {
        target = word;
        label = 1.0;
      } else {
        target = s.noise->sample(rng);
        if (target == word) continue;
        label = 0.0;
      }
      double* u = s.out_base + target * d;
      double f = 0.0;
      for (std::size_t j = 0; j < d; ++j) f += load(v[j]) * load(u[j]);
      const double g = (label - sigmoid(f)) * lr;
      for (std::size_t j = 0; j < d; ++j) {
        const double uj = load(u[j]);
        doc_update[j] += g * uj;
        add(u[j], g * load(v[j]));
      }
    }
    for (std::size_t j = 0; j < d; ++j) add(v[j], doc_update[j]);
  }
}

}  // namespace

void PvDbowTrainer::train_range(std::size_t begin, std::size_t end, std::uint64_t seed, bool shared) {
  const TrainState state{doc_vectors_.data().data(),
                         output_vectors_.data().data(),
                         config_.dimension,
                         config_.negatives,
                         &noise_,
                         config_.initial_learning_rate,
                         config_.final_learning_rate,
                         std::max<std::uint64_t>(total_tokens_, 1)};
  Rng rng(seed);
  std::vector<double> doc_update(config_.dimension);
  for (std::size_t i = begin; i < end; ++i) {
    if (shared) {
      std::atomic_ref<std::uint64_t> progress(processed_);
      const auto before = progress.fetch_add(docs_[i].size(), std::memory_order_relaxed);
      train_document_shared(state, i, docs_[i], before, rng, doc_update);
    } else {
      train_document_single(state, i, docs_[i], processed_, rng, doc_update);
      processed_ += docs_[i].size();
    }
  }
}

void PvDbowTrainer::train_epoch() {
  const std::string epoch_key = std::to_string(epochs_done_);
  const std::size_t n = docs_.size();
  const std::size_t workers = std::min<std::size_t>(config_.workers, n);
  if (workers <= 1) {
    train_range(0, n, derive_seed(config_.seed, "pvdbow-epoch", epoch_key), false);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([this, w, n, workers, &epoch_key] {
        train_range(w * n / workers, (w + 1) * n / workers,
                    derive_seed(config_.seed, "pvdbow-epoch", epoch_key + "/" + std::to_string(w)), true);
      });
    }
  }
  ++epochs_done_;
}

void PvDbowTrainer::train() {
  while (epochs_done_ < config_.epochs) train_epoch();
}

double PvDbowTrainer::mean_objective(std::uint64_t eval_seed) const {
  Rng rng(eval_seed);
  double sum = 0.0;
  std::uint64_t events = 0;
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const auto v = doc_vectors_.row(i);
    for (const std::uint32_t word : docs_[i]) {
      double obj = log_sigmoid(dot(v, output_vectors_.row(word)));
      for (std::size_t k = 0; k < config_.negatives; ++k) {
        obj += log_sigmoid(-dot(v, output_vectors_.row(noise_.sample(rng))));
      }
      sum += obj;
      ++events;
    }
  }
  return events == 0 ? 0.0 : sum / static_cast<double>(events);
}

DocVectors PvDbowTrainer::result(const std::vector<std::string>& ids) const {
  if (!doc_vectors_.all_finite()) throw std::runtime_error("training diverged: non-finite document vectors");
  return DocVectors{doc_vectors_, ids, config_};
}

DocVectors train_pvdbow(const Corpus& corpus, const EmbeddingConfig& config) {
  PvDbowTrainer trainer(corpus, config);
  trainer.train();
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& d : corpus.documents()) ids.push_back(d.id);
  return trainer.result(ids);
}

void write_doc_vectors(const DocVectors& vectors, std::ostream& out) {
  if (vectors.ids.size() != vectors.matrix.rows()) throw DataError("vector ids do not match matrix rows");
  out << vectors.matrix.rows() << ' ' << vectors.matrix.cols() << '\n';
  for (std::size_t i = 0; i < vectors.matrix.rows(); ++i) {
    if (vectors.ids[i].empty() || contains_whitespace(vectors.ids[i])) {
      throw DataError("document id '" + vectors.ids[i] + "' cannot be written to a vector file");
    }
    out << vectors.ids[i];
    for (double v : vectors.matrix.row(i)) out << ' ' << format_double(v);
    out << '\n';
  }
}

void write_doc_vectors_file(const DocVectors& vectors, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_doc_vectors(vectors, out);
}

DocVectors read_doc_vectors(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing 'N d' header");
  std::size_t n = 0, d = 0;
  {
    std::istringstream header(line);
    if (!(header >> n >> d) || d == 0) throw ParseError(1, "malformed 'N d' header");
  }
  DocVectors out;
  out.matrix = Matrix(n, d);
  out.ids.reserve(n);
  out.config.dimension = d;
  for (std::size_t i = 0; i < n; ++i) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "expected " + std::to_string(n) + " rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view rest(line);
    auto next_field = [&rest]() -> std::string_view {
      const auto start = rest.find_first_not_of(' ');
      if (start == std::string_view::npos) return {};
      rest.remove_prefix(start);
      const auto end = std::min(rest.find(' '), rest.size());
      auto field = rest.substr(0, end);
      rest.remove_prefix(end);
      return field;
    };
    const auto id = next_field();
    if (id.empty()) throw ParseError(line_no, "missing document id");
    out.ids.emplace_back(id);
    auto row = out.matrix.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const auto field = next_field();
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw ParseError(line_no, "expected " + std::to_string(d) + " finite values");
      }
      row[j] = value;
    }
    if (!next_field().empty()) throw ParseError(line_no, "more than " + std::to_string(d) + " values");
  }
  return out;
}

DocVectors read_doc_vectors_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vector file '" + path + "'");
  return read_doc_vectors(in);
}

CosineSeparation cosine_separation(const Matrix& vectors, std::span<const Label> labels) {
  const std::size_t n = vectors.rows();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = std::sqrt(dot(vectors.row(i), vectors.row(i)));
  double within = 0.0, between = 0.0;
  std::size_t n_within = 0, n_between = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double denom = norms[i] * norms[j];
      const double c = denom > 0.0 ? dot(vectors.row(i), vectors.row(j)) / denom : 0.0;
      if (labels[i] == labels[j]) {
        within += c;
        ++n_within;
      } else {
        between += c;
        ++n_between;
      }
    }
  }
  return {n_within ? within / static_cast<double>(n_within) : 0.0,
          n_between ? between / static_cast<double>(n_between) : 0.0};
}

}  // namespace emotikon
