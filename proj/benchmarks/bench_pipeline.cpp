#include <benchmark/benchmark.h>

#include "emotikon/classify.hpp"
#include "emotikon/cluster.hpp"
#include "emotikon/embedding.hpp"
#include "emotikon/emotionize.hpp"
#include "emotikon/rng.hpp"

using namespace emotikon;

namespace {

const SyntheticDataset& dataset() {
  static const SyntheticDataset data = [] {
    SyntheticCorpusConfig cfg;
    cfg.docs_per_class = 100;
    return generate_synthetic_corpus(cfg);
  }();
  return data;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = rng.normal();
  return m;
}

std::vector<Label> alternating_labels(std::size_t n) {
  std::vector<Label> y;
  for (std::size_t i = 0; i < n; ++i) y.push_back(i % 2 ? Label::Real : Label::Fake);
  return y;
}

void BM_Emotionize(benchmark::State& state) {
  const auto& data = dataset();
  const auto lexicon = collapse_best_sense(data.lexicon);
  std::size_t tokens = 0;
  for (const auto& d : data.corpus.documents()) tokens += d.tokens.size();
  for (auto _ : state) {
    auto out = emotionize_corpus(data.corpus, lexicon, EmotionizeOptions{0.6, {}});
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tokens));
}
BENCHMARK(BM_Emotionize)->Unit(benchmark::kMillisecond);

void BM_PvDbowEpoch(benchmark::State& state) {
  EmbeddingConfig cfg;
  cfg.dimension = static_cast<std::size_t>(state.range(0));
  cfg.epochs = 1;
  PvDbowTrainer trainer(dataset().corpus, cfg);
  std::size_t tokens = 0;
  for (const auto& d : trainer.encoded_documents()) tokens += d.size();
  for (auto _ : state) trainer.train_epoch();
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tokens));
}
BENCHMARK(BM_PvDbowEpoch)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  const auto x = random_matrix(1000, 100, 1);
  const auto k = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans_single(x, k, seed++));
}
BENCHMARK(BM_KMeans)->Arg(2)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Dbscan(benchmark::State& state) {
  const auto x = random_matrix(1000, 100, 2);
  for (auto _ : state) benchmark::DoNotOptimize(dbscan(x, 12.0, 20));
}
BENCHMARK(BM_Dbscan)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const auto kind = kAllModelKinds[state.range(0)];
  const auto x = random_matrix(900, 100, 3);
  const auto y = alternating_labels(900);
  for (auto _ : state) benchmark::DoNotOptimize(TrainedModel::fit(ModelSpec{kind, {}}, x, y, 4));
  state.SetLabel(std::string(short_name(kind)));
}
BENCHMARK(BM_Fit)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
