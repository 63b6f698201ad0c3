#include <doctest.h>

#include <cmath>
#include <sstream>

#include "emotikon/embedding.hpp"
#include "emotikon/rng.hpp"
#include "oracles/oracles.hpp"

using namespace emotikon;

namespace {

Corpus toy_corpus(std::size_t docs, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> a{"alpha", "beta", "gamma", "delta", "eps"};
  const std::vector<std::string> b{"red", "green", "blue", "cyan", "pink"};
  Corpus c;
  for (std::size_t i = 0; i < docs; ++i) {
    Document d;
    d.id = "doc" + std::to_string(i);
    d.label = i % 2 ? Label::Real : Label::Fake;
    const auto& pool = i % 2 ? b : a;
    for (int t = 0; t < 30; ++t) d.tokens.push_back(pool[rng.below(pool.size())]);
    d.sentence_count = 1;
    c.add(d);
  }
  return c;
}

std::vector<double> random_vector(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.normal() * 0.5;
  return v;
}

}  // namespace

TEST_CASE("training on a toy corpus gives a finite matrix of the right shape") {
  EmbeddingConfig cfg;
  cfg.dimension = 8;
  cfg.epochs = 5;
  const auto v = train_pvdbow(toy_corpus(10, 1), cfg);
  CHECK(v.size() == 10);
  CHECK(v.dimension() == 8);
  CHECK(v.matrix.all_finite());
  CHECK(v.ids.front() == "doc0");
}

TEST_CASE("single-worker training is bit reproducible") {
  EmbeddingConfig cfg;
  cfg.dimension = 16;
  cfg.epochs = 4;
  cfg.seed = 77;
  const auto corpus = toy_corpus(20, 2);
  CHECK(train_pvdbow(corpus, cfg).matrix == train_pvdbow(corpus, cfg).matrix);
  auto other = cfg;
  other.seed = 78;
  CHECK_FALSE(train_pvdbow(corpus, other).matrix == train_pvdbow(corpus, cfg).matrix);
}

TEST_CASE("multi-worker training produces finite vectors") {
  EmbeddingConfig cfg;
  cfg.dimension = 16;
  cfg.epochs = 3;
  cfg.workers = 4;
  const auto v = train_pvdbow(toy_corpus(40, 3), cfg);
  CHECK(v.matrix.all_finite());
  CHECK(v.size() == 40);
}

TEST_CASE("mean objective after five epochs exceeds the objective after one") {
  EmbeddingConfig cfg;
  cfg.dimension = 10;
  cfg.epochs = 5;
  PvDbowTrainer trainer(toy_corpus(20, 4), cfg);
  const double initial = trainer.mean_objective(123);
  trainer.train_epoch();
  const double after_one = trainer.mean_objective(123);
  while (trainer.epochs_done() < 5) trainer.train_epoch();
  const double after_five = trainer.mean_objective(123);
  CHECK(after_one > initial);
  CHECK(after_five > after_one);
}

TEST_CASE("training rejects empty inputs") {
  EmbeddingConfig cfg;
  CHECK_THROWS_AS(train_pvdbow(Corpus{}, cfg), DataError);
  Corpus singletons;
  singletons.add(Document{"a", {"once"}, 1, Label::Fake});
  singletons.add(Document{"b", {"twice"}, 1, Label::Real});
  CHECK_THROWS_AS(train_pvdbow(singletons, cfg), DataError);
}

TEST_CASE("embedding config validation") {
  EmbeddingConfig cfg;
  cfg.dimension = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.negatives = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.final_learning_rate = 0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.final_learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("objective of all-zero vectors with one negative is two log one half") {
  const std::vector<double> z(5, 0.0);
  const std::vector<std::span<const double>> negs{z};
  const auto g = objective_and_gradient(z, z, negs);
  CHECK(g.objective == doctest::Approx(2.0 * std::log(0.5)));
}

TEST_CASE("zero padding leaves the objective unchanged") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto v = random_vector(rng, 6), u = random_vector(rng, 6), n1 = random_vector(rng, 6), n2 = random_vector(rng, 6);
    const std::vector<std::span<const double>> negs{n1, n2};
    const double base = objective_and_gradient(v, u, negs).objective;
    for (auto* x : {&v, &u, &n1, &n2}) x->resize(12, 0.0);
    const std::vector<std::span<const double>> padded{n1, n2};
    CHECK(objective_and_gradient(v, u, padded).objective == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(2024);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng.below(12);
    const std::size_t k = 1 + rng.below(5);
    std::vector<double> v = random_vector(rng, d), u = random_vector(rng, d);
    std::vector<std::vector<double>> negs;
    for (std::size_t i = 0; i < k; ++i) negs.push_back(random_vector(rng, d));
    std::vector<std::span<const double>> spans(negs.begin(), negs.end());
    const auto g = objective_and_gradient(v, u, spans);
    CHECK(g.objective == doctest::Approx(oracle::event_objective(v, u, negs)).epsilon(1e-12));

    auto check_block = [&](std::vector<double>& x, const std::vector<double>& analytic) {
      for (std::size_t j = 0; j < d; ++j) {
        const double saved = x[j];
        x[j] = saved + h;
        const double plus = oracle::event_objective(v, u, negs);
        x[j] = saved - h;
        const double minus = oracle::event_objective(v, u, negs);
        x[j] = saved;
        const double numeric = (plus - minus) / (2 * h);
        const double rel = std::abs(numeric - analytic[j]) / std::max(1e-6, std::abs(numeric) + std::abs(analytic[j]));
        worst = std::max(worst, rel);
      }
    };
    check_block(v, g.doc);
    check_block(u, g.word);
    for (std::size_t i = 0; i < k; ++i) check_block(negs[i], g.negatives[i]);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("objective_and_gradient rejects mismatched lengths") {
  const std::vector<double> a(3, 0.1), b(4, 0.1);
  CHECK_THROWS_AS(objective_and_gradient(a, b, {}), std::invalid_argument);
  const std::vector<std::span<const double>> negs{b};
  CHECK_THROWS_AS(objective_and_gradient(a, a, negs), std::invalid_argument);
}

TEST_CASE("sigmoid helpers are stable at extremes") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(std::isfinite(log_sigmoid(-800.0)));
  CHECK(log_sigmoid(-800.0) == doctest::Approx(-800.0));
  CHECK(log_sigmoid(800.0) == 0.0);
}

TEST_CASE("alias table sampling follows its weights") {
  const std::vector<double> w{1.0, 2.0, 3.0, 4.0};
  AliasTable table(w);
  Rng rng(6);
  std::array<int, 4> counts{};
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[table.sample(rng)];
  for (std::size_t i = 0; i < 4; ++i) {
    const double p = w[i] / 10.0;
    const double sd = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(counts[i] / static_cast<double>(n) - p) < 5 * sd);
  }
  CHECK_THROWS_AS(AliasTable(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(AliasTable(std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("noise distribution is the smoothed unigram distribution") {
  Corpus c;
  c.add(Document{"a", {"x", "x", "x", "x", "y", "y", "z"}, 1, Label::Fake});
  c.add(Document{"b", {"x", "y", "z"}, 1, Label::Real});
  EmbeddingConfig cfg;
  cfg.dimension = 4;
  PvDbowTrainer trainer(c, cfg);
  const auto& vocab = trainer.vocabulary();
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.word(0) == "x");
  CHECK(vocab.word(1) == "y");
  CHECK(vocab.word(2) == "z");
  CHECK(vocab.index("missing") == -1);
  const double total = std::pow(5.0, 0.75) + std::pow(3.0, 0.75) + std::pow(2.0, 0.75);
  CHECK(trainer.noise_distribution()[0] == doctest::Approx(std::pow(5.0, 0.75) / total));
  CHECK(trainer.noise_distribution()[2] == doctest::Approx(std::pow(2.0, 0.75) / total));
}

TEST_CASE("min_count filters rare words from the vocabulary") {
  Corpus c;
  c.add(Document{"a", {"common", "common", "rare"}, 1, Label::Fake});
  const Vocabulary vocab(c, 2);
  CHECK(vocab.size() == 1);
  CHECK(vocab.index("common") == 0);
  CHECK(vocab.index("rare") == -1);
}

TEST_CASE("vector files round-trip exactly") {
  EmbeddingConfig cfg;
  cfg.dimension = 7;
  cfg.epochs = 2;
  const auto v = train_pvdbow(toy_corpus(6, 5), cfg);
  std::stringstream buf;
  write_doc_vectors(v, buf);
  const auto back = read_doc_vectors(buf);
  CHECK(back.ids == v.ids);
  CHECK(back.matrix == v.matrix);
}

TEST_CASE("malformed vector files are rejected") {
  for (const char* text : {"", "2 3\na 1 2 3\n", "1 2\na 1\n", "1 2\na 1 x\n", "x y\n"}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_doc_vectors(in), ParseError);
  }
}

TEST_CASE("documents with disjoint vocabularies separate by cosine similarity") {
  EmbeddingConfig cfg;
  cfg.dimension = 20;
  cfg.epochs = 30;
  const auto corpus = toy_corpus(40, 9);
  const auto v = train_pvdbow(corpus, cfg);
  const auto sep = cosine_separation(v.matrix, corpus.labels());
  CHECK(sep.within > sep.between);
}
