#include "emotikon/classify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <variant>

#include "emotikon/rng.hpp"

namespace emotikon {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::NaiveBayes: return "naive_bayes";
    case ModelKind::Knn: return "knn";
    case ModelKind::SvmLinear: return "svm_linear";
    case ModelKind::DecisionTree: return "decision_tree";
    case ModelKind::RandomForest: return "random_forest";
    case ModelKind::AdaBoost: return "adaboost";
  }
  return "unknown";
}

std::string_view short_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::NaiveBayes: return "NB";
    case ModelKind::Knn: return "KNN";
    case ModelKind::SvmLinear: return "SVM";
    case ModelKind::DecisionTree: return "DT";
    case ModelKind::RandomForest: return "RF";
    case ModelKind::AdaBoost: return "AB";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const ModelKind kind : kAllModelKinds) {
    std::string abbreviation(short_name(kind));
    std::transform(abbreviation.begin(), abbreviation.end(), abbreviation.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == to_string(kind) || lower == abbreviation) return kind;
  }
  if (lower == "svm") return ModelKind::SvmLinear;
  return std::nullopt;
}

void ModelSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("model hyperparameters: ") + what);
  };
  require(params.knn_k >= 1, "knn k must be >= 1");
  require(params.svm_c > 0.0, "svm C must be > 0");
  require(params.svm_epochs >= 1, "svm epochs must be >= 1");
  require(params.tree_min_samples_split >= 2, "min samples to split must be >= 2");
  require(params.forest_trees >= 1, "forest trees must be >= 1");
  require(params.boost_rounds >= 1, "boosting rounds must be >= 1");
  require(params.nb_variance_floor > 0.0, "variance floor must be > 0");
}

namespace {

// Fake wins ties everywhere.
Label majority(double fake_weight, double real_weight) {
  return fake_weight >= real_weight ? Label::Fake : Label::Real;
}

struct ConstantModel {
  Label label;
  Label predict(std::span<const double>) const { return label; }
};

struct NaiveBayesModel {
  std::array<double, kNumLabels> log_prior{};
  std::array<std::vector<double>, kNumLabels> mean;
  std::array<std::vector<double>, kNumLabels> variance;

  static NaiveBayesModel fit(const Matrix& x, std::span<const Label> y, double floor) {
    NaiveBayesModel m;
    const std::size_t d = x.cols();
    std::array<std::size_t, kNumLabels> count{};
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      m.mean[c].assign(d, 0.0);
      m.variance[c].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto c = label_index(y[i]);
      ++count[c];
      const auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) m.mean[c][j] += row[j];
    }
    for (std::size_t c = 0; c < kNumLabels; ++c)
      for (auto& v : m.mean[c]) v /= static_cast<double>(count[c]);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto c = label_index(y[i]);
      const auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = row[j] - m.mean[c][j];
        m.variance[c][j] += diff * diff;
      }
    }
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      for (auto& v : m.variance[c]) v = std::max(v / static_cast<double>(count[c]), floor);
      m.log_prior[c] = std::log(static_cast<double>(count[c]) / static_cast<double>(x.rows()));
    }
    return m;
  }

  Label predict(std::span<const double> row) const {
    std::array<double, kNumLabels> score = log_prior;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        const double diff = row[j] - mean[c][j];
        score[c] -= 0.5 * (std::log(2.0 * std::numbers::pi * variance[c][j]) + diff * diff / variance[c][j]);
      }
    }
    return majority(score[0], score[1]);
  }
};

struct KnnModel {
  Matrix points;
  std::vector<Label> labels;
  std::size_t k;

  Label predict(std::span<const double> row) const {
    const std::size_t n = points.rows();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = {squared_distance(row, points.row(i)), i};
    const std::size_t kk = std::min(k, n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    std::array<double, kNumLabels> votes{};
    for (std::size_t i = 0; i < kk; ++i) votes[label_index(labels[dist[i].second])] += 1.0;
    return majority(votes[0], votes[1]);
  }
};

// Fake = +1, Real = -1.
double sign_of(Label y) { return y == Label::Fake ? 1.0 : -1.0; }

struct LinearSvmModel {
  std::vector<double> offset;
  std::vector<double> scale;
  std::vector<double> weights;  // last entry multiplies a constant 1

  double decision(std::span<const double> row) const {
    const std::size_t d = row.size();
    double s = weights[d];
    for (std::size_t j = 0; j < d; ++j) s += weights[j] * (row[j] - offset[j]) * scale[j];
    return s;
  }

  Label predict(std::span<const double> row) const { return decision(row) >= 0.0 ? Label::Fake : Label::Real; }

  // Pegasos: SGD on lambda/2 |w|^2 + mean hinge loss with lambda = 1/(C n),
  // over standardized features augmented with a constant bias feature.
  static LinearSvmModel fit(const Matrix& x, std::span<const Label> y, const ModelParams& p, std::uint64_t seed) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    LinearSvmModel m;
    m.offset.assign(d, 0.0);
    m.scale.assign(d, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) m.offset[j] += x(i, j);
    for (auto& o : m.offset) o /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) var[j] += (x(i, j) - m.offset[j]) * (x(i, j) - m.offset[j]);
    for (std::size_t j = 0; j < d; ++j) {
      const double sd = std::sqrt(var[j] / static_cast<double>(n));
      m.scale[j] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }

    Matrix z(n, d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) z(i, j) = (x(i, j) - m.offset[j]) * m.scale[j];
      z(i, d) = 1.0;
    }

    const double lambda = 1.0 / (p.svm_c * static_cast<double>(n));
    const double radius = 1.0 / std::sqrt(lambda);
    std::vector<double> w(d + 1, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    std::uint64_t t = 0;
    for (std::size_t epoch = 0; epoch < p.svm_epochs; ++epoch) {
      rng.shuffle(order.begin(), order.end());
      for (const std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const auto zi = z.row(i);
        const double yi = sign_of(y[i]);
        const double margin = yi * dot(w, zi);
        const double shrink = 1.0 - eta * lambda;
        for (auto& wj : w) wj *= shrink;
        if (margin < 1.0)
          for (std::size_t j = 0; j <= d; ++j) w[j] += eta * yi * zi[j];
        const double norm = std::sqrt(dot(w, w));
        if (norm > radius)
          for (auto& wj : w) wj *= radius / norm;
      }
    }
    m.weights = std::move(w);
    return m;
  }
};

// Per-feature dense ranks of the training values (equal values share a
// rank) and the distinct values in ascending order.
struct RankedFeatures {
  std::size_t n = 0;
  std::vector<std::uint32_t> rank;            // feature-major, d x n
  std::vector<std::vector<double>> distinct;  // per feature

  explicit RankedFeatures(const Matrix& x) : n(x.rows()), rank(x.rows() * x.cols()), distinct(x.cols()) {
    std::vector<std::pair<double, std::uint32_t>> column(n);
    for (std::size_t f = 0; f < x.cols(); ++f) {
      for (std::size_t i = 0; i < n; ++i) column[i] = {x(i, f), static_cast<std::uint32_t>(i)};
      std::sort(column.begin(), column.end());
      auto& values = distinct[f];
      for (const auto& [value, i] : column) {
        if (values.empty() || values.back() < value) values.push_back(value);
        rank[f * n + i] = static_cast<std::uint32_t>(values.size() - 1);
      }
    }
  }

  std::size_t features() const { return distinct.size(); }
  std::uint32_t operator()(std::size_t feature, std::size_t sample) const { return rank[feature * n + sample]; }
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  Label leaf = Label::Fake;
};

// CART classification tree with Gini impurity.
class DecisionTree {
 public:
  Label predict(std::span<const double> row) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
      const auto& node = nodes_[i];
      i = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes_[i].leaf;
  }

  // `samples` may contain repeats (bootstrap). max_features >= d uses every
  // feature in index order without touching `rng`.
  static DecisionTree fit(const RankedFeatures& x, std::span<const Label> y, std::vector<std::size_t> samples,
                          const ModelParams& p, std::size_t max_features, Rng& rng) {
    DecisionTree tree;
    Builder b{x, y, p, max_features, rng, tree.nodes_};
    b.grow(samples, 0);
    return tree;
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Builder {
    const RankedFeatures& x;
    std::span<const Label> y;
    const ModelParams& p;
    std::size_t max_features;
    Rng& rng;
    std::vector<TreeNode>& nodes;
    std::vector<std::size_t> feature_pool{};
    // (rank << 1) | label, sorted per candidate feature.
    std::vector<std::uint64_t> keys{};

    std::size_t grow(std::vector<std::size_t>& samples, std::size_t depth) {
      const std::size_t id = nodes.size();
      nodes.emplace_back();
      std::size_t fake = 0;
      for (const auto s : samples) fake += y[s] == Label::Fake;
      const std::size_t n = samples.size();
      const std::size_t real = n - fake;
      nodes[id].leaf = majority(static_cast<double>(fake), static_cast<double>(real));

      const bool depth_capped = p.tree_max_depth != 0 && depth >= p.tree_max_depth;
      if (fake == 0 || real == 0 || n < p.tree_min_samples_split || depth_capped) return id;

      const auto split = best_split(samples, fake);
      if (split.feature < 0) return id;

      std::vector<std::size_t> left, right;
      for (const auto s : samples)
        (x(static_cast<std::size_t>(split.feature), s) <= split.rank ? left : right).push_back(s);
      samples.clear();
      samples.shrink_to_fit();

      const std::size_t l = grow(left, depth + 1);
      const std::size_t r = grow(right, depth + 1);
      nodes[id].feature = split.feature;
      nodes[id].threshold = split.threshold;
      nodes[id].left = l;
      nodes[id].right = r;
      return id;
    }

    struct Split {
      int feature = -1;
      double threshold = 0.0;
      double impurity = 0.0;
      // Largest rank sent to the left child.
      std::uint32_t rank = 0;
    };

    Split best_split(const std::vector<std::size_t>& samples, std::size_t total_fake) {
      const std::size_t d = x.features();
      const std::size_t n = samples.size();
      if (feature_pool.size() != d) {
        feature_pool.resize(d);
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
      }
      std::size_t m = d;
      if (max_features < d) {
        // Partial Fisher-Yates; the first m entries are the sampled subset.
        for (std::size_t i = 0; i < max_features; ++i) {
          const std::size_t j = i + rng.below(d - i);
          std::swap(feature_pool[i], feature_pool[j]);
        }
        m = max_features;
      } else {
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
      }

      Split best;
      const auto total = static_cast<double>(n);
      keys.resize(n);
      for (std::size_t fi = 0; fi < m; ++fi) {
        const std::size_t f = feature_pool[fi];
        for (std::size_t i = 0; i < n; ++i)
          keys[i] = (static_cast<std::uint64_t>(x(f, samples[i])) << 1) | label_index(y[samples[i]]);
        std::sort(keys.begin(), keys.end());
        const auto& values = x.distinct[f];
        double left_fake = 0.0, left_n = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          left_n += 1.0;
          left_fake += (keys[i] & 1) == label_index(Label::Fake);
          const auto rank = static_cast<std::uint32_t>(keys[i] >> 1);
          const auto next_rank = static_cast<std::uint32_t>(keys[i + 1] >> 1);
          if (rank == next_rank) continue;
          const double left_real = left_n - left_fake;
          const double right_n = total - left_n;
          const double right_fake = static_cast<double>(total_fake) - left_fake;
          const double right_real = right_n - right_fake;
          // n_l * gini_l + n_r * gini_r
          const double impurity = (left_n - (left_fake * left_fake + left_real * left_real) / left_n) +
                                  (right_n - (right_fake * right_fake + right_real * right_real) / right_n);
          const double lo = values[rank], hi = values[next_rank];
          double threshold = 0.5 * (lo + hi);
          if (!(threshold < hi)) threshold = lo;
          const int fint = static_cast<int>(f);
          if (best.feature < 0 || impurity < best.impurity ||
              (impurity == best.impurity &&
               (fint < best.feature || (fint == best.feature && threshold < best.threshold)))) {
            best = {fint, threshold, impurity, rank};
          }
        }
      }
      return best;
    }
  };

  std::vector<TreeNode> nodes_;
};

struct DecisionTreeModel {
  DecisionTree tree;
  Label predict(std::span<const double> row) const { return tree.predict(row); }
};

struct RandomForestModel {
  std::vector<DecisionTree> trees;

  Label predict(std::span<const double> row) const {
    std::array<double, kNumLabels> votes{};
    for (const auto& t : trees) votes[label_index(t.predict(row))] += 1.0;
    return majority(votes[0], votes[1]);
  }
};

struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  // Prediction for x[feature] <= threshold; the other side gets the opposite.
  Label left = Label::Fake;
  double alpha = 0.0;

  double vote(std::span<const double> row) const {
    const Label h = row[feature] <= threshold ? left : (left == Label::Fake ? Label::Real : Label::Fake);
    return sign_of(h);
  }
};

struct AdaBoostModel {
  std::vector<Stump> stumps;
  std::vector<double> loss_bound;

  Label predict(std::span<const double> row) const {
    double score = 0.0;
    for (const auto& s : stumps) score += s.alpha * s.vote(row);
    return score >= 0.0 ? Label::Fake : Label::Real;
  }

  // Discrete AdaBoost over depth-1 stumps.
  static AdaBoostModel fit(const Matrix& x, std::span<const Label> y, std::size_t rounds) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    constexpr double kMinError = 1e-10;

    std::vector<std::vector<std::size_t>> order(d, std::vector<std::size_t>(n));
    for (std::size_t f = 0; f < d; ++f) {
      std::iota(order[f].begin(), order[f].end(), 0);
      std::stable_sort(order[f].begin(), order[f].end(),
                       [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    }

    AdaBoostModel m;
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    double bound = 1.0;
    for (std::size_t round = 0; round < rounds; ++round) {
      double w_fake = 0.0, w_real = 0.0;
      for (std::size_t i = 0; i < n; ++i) (y[i] == Label::Fake ? w_fake : w_real) += w[i];

      bool found = false;
      Stump best;
      double best_error = 1.0;
      for (std::size_t f = 0; f < d; ++f) {
        double left_fake = 0.0, left_real = 0.0;
        for (std::size_t r = 0; r + 1 < n; ++r) {
          const std::size_t i = order[f][r];
          (y[i] == Label::Fake ? left_fake : left_real) += w[i];
          const double v = x(i, f);
          const double next = x(order[f][r + 1], f);
          if (!(v < next)) continue;
          const double error_left_fake = left_real + (w_fake - left_fake);
          const double error_left_real = left_fake + (w_real - left_real);
          double threshold = 0.5 * (v + next);
          if (!(threshold < next)) threshold = v;
          if (error_left_fake < best_error) {
            best_error = error_left_fake;
            best = {f, threshold, Label::Fake, 0.0};
            found = true;
          }
          if (error_left_real < best_error) {
            best_error = error_left_real;
            best = {f, threshold, Label::Real, 0.0};
            found = true;
          }
        }
      }
      if (!found || best_error >= 0.5) break;

      const double err = std::max(best_error, kMinError);
      best.alpha = 0.5 * std::log((1.0 - err) / err);
      m.stumps.push_back(best);
      bound *= 2.0 * std::sqrt(err * (1.0 - err));
      m.loss_bound.push_back(bound);
      if (best_error <= kMinError) break;

      double z = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] *= std::exp(-best.alpha * sign_of(y[i]) * best.vote(x.row(i)));
        z += w[i];
      }
      for (auto& wi : w) wi /= z;
    }
    return m;
  }
};

}  // namespace

class TrainedModel::Impl {
 public:
  using Model = std::variant<ConstantModel, NaiveBayesModel, KnnModel, LinearSvmModel, DecisionTreeModel,
                             RandomForestModel, AdaBoostModel>;
  explicit Impl(Model m) : model(std::move(m)) {}
  Model model;
};

TrainedModel::TrainedModel(ModelKind kind, std::size_t dimension, std::uint64_t seed, std::unique_ptr<Impl> impl)
    : kind_(kind), dimension_(dimension), seed_(seed), impl_(std::move(impl)) {}
TrainedModel::TrainedModel(TrainedModel&&) noexcept = default;
TrainedModel& TrainedModel::operator=(TrainedModel&&) noexcept = default;
TrainedModel::~TrainedModel() = default;

TrainedModel TrainedModel::fit(const ModelSpec& spec, const Matrix& features, std::span<const Label> labels,
                               std::uint64_t seed) {
  spec.validate();
  if (features.rows() == 0 || features.cols() == 0) throw std::invalid_argument("cannot fit on empty input");
  if (labels.size() != features.rows()) throw std::invalid_argument("labels and feature rows differ in count");
  if (!features.all_finite()) throw DataError("features contain NaN or infinite values");

  std::size_t fake = 0;
  for (const Label l : labels) fake += l == Label::Fake;
  const std::size_t d = features.cols();
  auto make = [&](Impl::Model m) {
    return TrainedModel(spec.kind, d, seed, std::make_unique<Impl>(std::move(m)));
  };
  if (fake == 0 || fake == labels.size()) return make(ConstantModel{labels[0]});

  const auto& p = spec.params;
  switch (spec.kind) {
    case ModelKind::NaiveBayes:
      return make(NaiveBayesModel::fit(features, labels, p.nb_variance_floor));
    case ModelKind::Knn:
      return make(KnnModel{features, std::vector<Label>(labels.begin(), labels.end()), p.knn_k});
    case ModelKind::SvmLinear:
      return make(LinearSvmModel::fit(features, labels, p, seed));
    case ModelKind::DecisionTree: {
      Rng rng(seed);
      std::vector<std::size_t> all(features.rows());
      std::iota(all.begin(), all.end(), 0);
      return make(DecisionTreeModel{DecisionTree::fit(RankedFeatures(features), labels, std::move(all), p, d, rng)});
    }
    case ModelKind::RandomForest: {
      const std::size_t max_features =
          p.forest_max_features == 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))
                                     : std::min(p.forest_max_features, d);
      RandomForestModel forest;
      forest.trees.reserve(p.forest_trees);
      const RankedFeatures ranked(features);
      const std::size_t n = features.rows();
      for (std::size_t t = 0; t < p.forest_trees; ++t) {
        Rng rng(derive_seed(seed, "forest-tree", std::to_string(t)));
        std::vector<std::size_t> samples(n);
        if (p.forest_bootstrap) {
          for (auto& s : samples) s = rng.below(n);
        } else {
          std::iota(samples.begin(), samples.end(), 0);
        }
        forest.trees.push_back(DecisionTree::fit(ranked, labels, std::move(samples), p, max_features, rng));
      }
      return make(std::move(forest));
    }
    case ModelKind::AdaBoost: {
      auto boost = AdaBoostModel::fit(features, labels, p.boost_rounds);
      if (boost.stumps.empty()) {
        return make(ConstantModel{majority(static_cast<double>(fake), static_cast<double>(labels.size() - fake))});
      }
      return make(std::move(boost));
    }
  }
  throw std::invalid_argument("unknown model kind");
}

Label TrainedModel::predict_one(std::span<const double> x) const {
  if (x.size() != dimension_) {
    throw std::invalid_argument("feature dimension " + std::to_string(x.size()) + " does not match trained " +
                                std::to_string(dimension_));
  }
  return std::visit([&](const auto& m) { return m.predict(x); }, impl_->model);
}

std::vector<Label> TrainedModel::predict(const Matrix& features) const {
  if (features.rows() > 0 && features.cols() != dimension_) {
    throw std::invalid_argument("feature dimension " + std::to_string(features.cols()) +
                                " does not match trained " + std::to_string(dimension_));
  }
  std::vector<Label> out;
  out.reserve(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) out.push_back(predict_one(features.row(i)));
  return out;
}

bool TrainedModel::is_constant() const { return std::holds_alternative<ConstantModel>(impl_->model); }

const std::vector<double>& TrainedModel::boosting_loss_bound() const {
  static const std::vector<double> kEmpty;
  if (const auto* boost = std::get_if<AdaBoostModel>(&impl_->model)) return boost->loss_bound;
  return kEmpty;
}

double accuracy(std::span<const Label> predicted, std::span<const Label> gold) {
  if (predicted.size() != gold.size()) throw std::invalid_argument("label sequences differ in length");
  if (predicted.empty()) throw std::invalid_argument("accuracy of an empty label sequence is undefined");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) agree += predicted[i] == gold[i];
  return static_cast<double>(agree) / static_cast<double>(gold.size());
}

}  // namespace emotikon
