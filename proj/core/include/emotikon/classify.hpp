#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emotikon/common.hpp"

namespace emotikon {

enum class ModelKind { NaiveBayes, Knn, SvmLinear, DecisionTree, RandomForest, AdaBoost };

inline constexpr ModelKind kAllModelKinds[] = {ModelKind::NaiveBayes,   ModelKind::Knn,
                                               ModelKind::SvmLinear,    ModelKind::RandomForest,
                                               ModelKind::DecisionTree, ModelKind::AdaBoost};

// "naive_bayes", "knn", "svm_linear", "decision_tree", "random_forest", "adaboost".
std::string_view to_string(ModelKind kind);
// Table abbreviation: NB, KNN, SVM, DT, RF, AB.
std::string_view short_name(ModelKind kind);
// Accepts the long names above or the abbreviations (case-insensitive).
std::optional<ModelKind> parse_model_kind(std::string_view name);

struct ModelParams {
  std::size_t knn_k = 5;
  double svm_c = 1.0;
  std::size_t svm_epochs = 100;
  // 0 means unlimited depth.
  std::size_t tree_max_depth = 0;
  std::size_t tree_min_samples_split = 2;
  std::size_t forest_trees = 100;
  // Features tried per split; 0 means ceil(sqrt(d)).
  std::size_t forest_max_features = 0;
  bool forest_bootstrap = true;
  std::size_t boost_rounds = 50;
  double nb_variance_floor = 1e-9;
};

struct ModelSpec {
  ModelKind kind = ModelKind::NaiveBayes;
  ModelParams params;

  // Throws std::invalid_argument when a hyperparameter is out of range.
  void validate() const;
};

// A fitted classifier. Immutable; predict() is safe to call concurrently.
class TrainedModel {
 public:
  class Impl;

  TrainedModel(TrainedModel&&) noexcept;
  TrainedModel& operator=(TrainedModel&&) noexcept;
  ~TrainedModel();

  // Fits `spec` on rows of `features` labelled by `labels`. A training set
  // containing a single class yields a model that always predicts it.
  // Throws std::invalid_argument for empty or misaligned input and
  // DataError for non-finite features.
  static TrainedModel fit(const ModelSpec& spec, const Matrix& features, std::span<const Label> labels,
                          std::uint64_t seed);

  // Throws std::invalid_argument when the column count differs from training.
  std::vector<Label> predict(const Matrix& features) const;
  Label predict_one(std::span<const double> x) const;

  ModelKind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  std::uint64_t seed() const { return seed_; }
  bool is_constant() const;

  // AdaBoost only: product of per-round normalizers, an upper bound on the
  // training error after each round. Empty for other kinds.
  const std::vector<double>& boosting_loss_bound() const;

 private:
  TrainedModel(ModelKind kind, std::size_t dimension, std::uint64_t seed, std::unique_ptr<Impl> impl);

  ModelKind kind_;
  std::size_t dimension_;
  std::uint64_t seed_;
  std::unique_ptr<Impl> impl_;
};

// Fraction of positions where the two label sequences agree. Throws
// std::invalid_argument on a length mismatch or empty input.
double accuracy(std::span<const Label> predicted, std::span<const Label> gold);

}  // namespace emotikon
