#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "emotikon/evaluate.hpp"
#include "emotikon/rng.hpp"
#include "temp_dir.hpp"

using namespace emotikon;

namespace {

ExperimentGrid tiny_grid() {
  ExperimentGrid g;
  g.taus = {0.2, 0.6};
  g.dims = {8};
  g.models = {ModelKind::NaiveBayes, ModelKind::Knn};
  g.kmeans_k = {2, 3};
  g.dbscan_eps = {1.0};
  g.dbscan_min_samples = {3, 5};
  g.n_inits = 3;
  g.folds = 3;
  g.seed = 5;
  g.embedding.epochs = 3;
  return g;
}

SyntheticDataset tiny_data() {
  SyntheticCorpusConfig cfg;
  cfg.docs_per_class = 15;
  cfg.min_tokens = cfg.max_tokens = 40;
  return generate_synthetic_corpus(cfg);
}

}  // namespace

TEST_CASE("kfold_split of 10 into 5 folds gives five pairs") {
  const auto plan = kfold_split(10, 5, 1);
  REQUIRE(plan.folds.size() == 5);
  for (const auto& f : plan.folds) CHECK(f.size() == 2);
  CHECK(plan.n() == 10);
  CHECK(plan.complement(0).size() == 8);
}

TEST_CASE("kfold_split rejects k outside [2, n]") {
  CHECK_THROWS_AS(kfold_split(10, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(kfold_split(3, 4, 0), std::invalid_argument);
  CHECK_NOTHROW(kfold_split(2, 2, 0));
}

TEST_CASE("fold plans are disjoint, covering and balanced") {
  for (std::size_t n = 2; n <= 60; ++n) {
    for (std::size_t k = 2; k <= n; ++k) {
      const auto plan = kfold_split(n, k, n * 1000 + k);
      REQUIRE(plan.folds.size() == k);
      std::vector<int> seen(n, 0);
      std::size_t lo = n, hi = 0;
      for (std::size_t f = 0; f < k; ++f) {
        const auto& fold = plan.folds[f];
        CHECK(std::is_sorted(fold.begin(), fold.end()));
        for (auto i : fold) ++seen[i];
        lo = std::min(lo, fold.size());
        hi = std::max(hi, fold.size());
        const auto rest = plan.complement(f);
        CHECK(rest.size() + fold.size() == n);
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
      CHECK(hi - lo <= 1);
    }
  }
}

TEST_CASE("kfold_split is deterministic per seed") {
  CHECK(kfold_split(50, 7, 3).folds == kfold_split(50, 7, 3).folds);
  CHECK_FALSE(kfold_split(50, 7, 3).folds == kfold_split(50, 7, 4).folds);
}

TEST_CASE("summarize uses the sample standard deviation") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.samples == 4);
  const std::vector<double> one{0.7};
  CHECK(summarize(one).stddev == 0.0);
}

TEST_CASE("cross-validation on separable blobs scores 1.0 and averages its folds") {
  Rng rng(1);
  Matrix x(40, 3);
  std::vector<Label> y;
  for (std::size_t i = 0; i < 40; ++i) {
    const double c = i % 2 ? 10.0 : -10.0;
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = c + rng.normal();
    y.push_back(i % 2 ? Label::Real : Label::Fake);
  }
  const auto plan = kfold_split(40, 4, 2);
  for (const auto kind : kAllModelKinds) {
    const auto cv = crossval_accuracy(x, y, ModelSpec{kind, {}}, plan, 3);
    CHECK(cv.summary.mean == 1.0);
    CHECK(cv.fold_accuracies.size() == 4);
  }
  const auto cv = crossval_accuracy(x, y, ModelSpec{ModelKind::Knn, {}}, plan, 3);
  double total = 0.0;
  for (double a : cv.fold_accuracies) total += a;
  CHECK(cv.summary.mean == doctest::Approx(total / 4.0));
}

TEST_CASE("leave-one-out 1-NN on duplicated points is perfect even with random labels") {
  Rng rng(4);
  Matrix x(30, 2);
  std::vector<Label> y(30);
  for (std::size_t p = 0; p < 15; ++p) {
    const double a = rng.normal(), b = rng.normal();
    const Label l = rng.below(2) ? Label::Real : Label::Fake;
    for (std::size_t r : {2 * p, 2 * p + 1}) {
      x(r, 0) = a;
      x(r, 1) = b;
      y[r] = l;
    }
  }
  ModelSpec spec{ModelKind::Knn, {}};
  spec.params.knn_k = 1;
  const auto cv = crossval_accuracy(x, y, spec, kfold_split(30, 30, 5), 0);
  CHECK(cv.summary.mean == 1.0);
}

TEST_CASE("cross-validation on random labels stays near chance") {
  Rng rng(6);
  Matrix x(200, 4);
  std::vector<Label> y;
  for (auto& v : x.data()) v = rng.normal();
  for (std::size_t i = 0; i < 200; ++i) y.push_back(rng.below(2) ? Label::Real : Label::Fake);
  const auto cv = crossval_accuracy(x, y, ModelSpec{ModelKind::NaiveBayes, {}}, kfold_split(200, 10, 7), 8);
  CHECK(cv.summary.mean > 0.35);
  CHECK(cv.summary.mean < 0.65);
}

TEST_CASE("tau column names") {
  CHECK(ResultTable::tau_column(0.6) == "tau=0.6");
  CHECK(ResultTable::tau_column(0.0) == "tau=0.0");
  CHECK(ResultTable::tau_column(1.0) == "tau=1.0");
}

TEST_CASE("grid validation") {
  ExperimentGrid g;
  CHECK_NOTHROW(g.validate_classification());
  CHECK_NOTHROW(g.validate_clustering());
  g.taus = {0.6, 0.6};
  CHECK_THROWS_AS(g.validate_classification(), std::invalid_argument);
  g = {};
  g.taus = {1.5};
  CHECK_THROWS_AS(g.validate_classification(), std::invalid_argument);
  g = {};
  g.folds = 1;
  CHECK_THROWS_AS(g.validate_classification(), std::invalid_argument);
  g = {};
  g.dbscan_eps = {0.0};
  CHECK_THROWS_AS(g.validate_clustering(), std::invalid_argument);
  g = {};
  g.n_inits = 0;
  CHECK_THROWS_AS(g.validate_clustering(), std::invalid_argument);
}

TEST_CASE("experiment tables have the grid's shape and are reproducible") {
  const auto data = tiny_data();
  const auto lex = collapse_best_sense(data.lexicon);
  const auto grid = tiny_grid();
  const auto a = run_experiment(data.corpus, lex, grid);
  REQUIRE(a.classification);
  REQUIRE(a.clustering);
  CHECK(a.classification->columns == std::vector<std::string>{"baseline", "tau=0.2", "tau=0.6"});
  REQUIRE(a.classification->rows.size() == 2);
  CHECK(a.classification->rows[0].method == "NB");
  CHECK(a.classification->rows[1].method == "KNN");
  for (const auto& row : a.classification->rows) {
    CHECK(row.cells.size() == 3);
    for (const auto& c : row.cells) {
      REQUIRE(c.mean);
      CHECK(*c.mean >= 0.0);
      CHECK(*c.mean <= 1.0);
      CHECK(c.samples == 3);
    }
  }
  REQUIRE(a.clustering->rows.size() == 4);
  CHECK(a.clustering->rows[0].method == "KMeans");
  CHECK(a.clustering->rows[0].k == 2u);
  CHECK(a.clustering->rows[1].k == 3u);
  CHECK(a.clustering->rows[2].method == "DBSCAN");
  CHECK(a.clustering->rows[2].min_samples == 3u);
  CHECK(a.clustering->rows[3].min_samples == 5u);
  CHECK(a.clustering->rows[0].cells[0].samples == 3);
  CHECK(a.enrichment.size() == 2);
  CHECK(a.enrichment.count("tau=0.6") == 1);

  const auto b = run_experiment(data.corpus, lex, grid);
  CHECK(*a.classification == *b.classification);
  CHECK(*a.clustering == *b.clustering);

  ExperimentOptions only_cls;
  only_cls.clustering = false;
  const auto c = run_experiment(data.corpus, lex, grid, only_cls);
  CHECK_FALSE(c.clustering);
  CHECK(*c.classification == *a.classification);
}

TEST_CASE("a lexicon that never fires leaves every column equal to the baseline") {
  const auto data = tiny_data();
  const auto lex = collapse_best_sense({{"zzzunused", "joy", 0.99}});
  const auto result = run_experiment(data.corpus, lex, tiny_grid());
  for (const auto* table : {&*result.classification, &*result.clustering}) {
    for (const auto& row : table->rows) {
      for (std::size_t c = 1; c < row.cells.size(); ++c) CHECK(row.cells[c] == row.cells[0]);
    }
  }
}

TEST_CASE("worker count does not change the tables") {
  const auto data = tiny_data();
  const auto lex = collapse_best_sense(data.lexicon);
  auto grid = tiny_grid();
  const auto one = run_experiment(data.corpus, lex, grid);
  grid.workers = 3;
  const auto three = run_experiment(data.corpus, lex, grid);
  CHECK(*one.classification == *three.classification);
  CHECK(*one.clustering == *three.clustering);
}

TEST_CASE("run_experiment rejects single-class and empty corpora") {
  Corpus c;
  c.add(Document{"a", {"x", "y"}, 1, Label::Fake});
  c.add(Document{"b", {"x", "y"}, 1, Label::Fake});
  CHECK_THROWS_AS(run_experiment(c, EmotionLexicon{}, tiny_grid()), DataError);
  CHECK_THROWS_AS(run_experiment(Corpus{}, EmotionLexicon{}, tiny_grid()), DataError);
}

TEST_CASE("external predictions are read and scored") {
  std::istringstream in("doc_id,predicted_label\na,fake\nb,real\nc,fake\n");
  const auto preds = read_predictions_csv(in);
  REQUIRE(preds.size() == 3);
  Corpus c;
  c.add(Document{"a", {"x"}, 1, Label::Fake});
  c.add(Document{"b", {"x"}, 1, Label::Real});
  c.add(Document{"c", {"x"}, 1, Label::Real});
  const auto s = score_external_predictions(c, preds);
  CHECK(s.mean == doctest::Approx(2.0 / 3.0));
  CHECK(s.samples == 3);

  const std::vector<std::pair<std::string, Label>> missing{{"zz", Label::Fake}};
  CHECK_THROWS_AS(score_external_predictions(c, missing), DataError);
  const std::vector<std::pair<std::string, Label>> dup{{"a", Label::Fake}, {"a", Label::Fake}};
  CHECK_THROWS_AS(score_external_predictions(c, dup), DataError);
  CHECK_THROWS_AS(score_external_predictions(c, {}), DataError);

  std::istringstream bad("a,fake\nb\n");
  CHECK_THROWS_AS(read_predictions_csv(bad), ParseError);
}

TEST_CASE("external predictions join the classification table") {
  const auto data = tiny_data();
  auto grid = tiny_grid();
  grid.models = {ModelKind::NaiveBayes};
  std::ostringstream csv;
  for (const auto& d : data.corpus.documents()) csv << d.id << ',' << to_string(d.label) << '\n';
  const testing::TempDir dir;
  const auto path = dir.file("preds.csv");
  testing::write_file(path, csv.str());
  ExperimentOptions opts;
  opts.clustering = false;
  opts.external.push_back(ExternalPredictions{"BERT", 8, "tau=0.6", path});
  const auto r = run_experiment(data.corpus, collapse_best_sense(data.lexicon), grid, opts);
  REQUIRE(r.classification->rows.size() == 2);
  const auto& row = r.classification->rows.back();
  CHECK(row.method == "BERT");
  CHECK_FALSE(row.cells[0].mean);
  REQUIRE(row.cells[2].mean);
  CHECK(*row.cells[2].mean == 1.0);
}
