#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "emotikon/corpus.hpp"
#include "emotikon/embedding.hpp"
#include "temp_dir.hpp"

using emotikon::cli::dispatch;
namespace cli = emotikon::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

// Synthetic corpus and lexicon files shared by the round-trip tests.
struct Workspace {
  testing::TempDir dir;
  std::string corpus = dir.file("corpus.jsonl");
  std::string lexicon = dir.file("lexicon.tsv");

  Workspace() {
    testing::write_file(dir.file("synth.json"), R"({"docs_per_class": 20, "tokens_per_doc": 40})");
    const auto r = run({"corpus", "synth", "--config", dir.file("synth.json"), "--out", corpus, "--lexicon-out",
                        lexicon});
    REQUIRE(r.code == cli::kOk);
  }
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"embed", "--corpus", "x.jsonl"}).code == cli::kUsage);
  CHECK(run({"lexicon", "inspect", "x.tsv", "--tau", "1.5"}).code == cli::kUsage);
  CHECK(run({"corpus", "stats", "x.jsonl", "--format", "yaml"}).code == cli::kUsage);
}

TEST_CASE("help exits with 0") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("emotionize") != std::string::npos);
}

TEST_CASE("missing input files exit with 2") {
  CHECK(run({"lexicon", "inspect", "/nonexistent.tsv"}).code == cli::kData);
  CHECK(run({"corpus", "stats", "/nonexistent.jsonl"}).code == cli::kData);
  CHECK(run({"cluster", "kdist", "--vectors", "/nonexistent.vec", "--k", "2"}).code == cli::kData);
}

TEST_CASE("malformed inputs exit with 2 and name the line") {
  const testing::TempDir dir;
  testing::write_file(dir.file("bad.tsv"), "good\tjoy\t0.5\nbad\tjoy\n");
  const auto r = run({"lexicon", "inspect", dir.file("bad.tsv")});
  CHECK(r.code == cli::kData);
  CHECK(r.err.find("2") != std::string::npos);
}

TEST_CASE("lexicon inspect reports threshold counts as json") {
  const testing::TempDir dir;
  testing::write_file(dir.file("lex.tsv"),
                      "word\temotion\tscore\nkiller\tfear\t0.9\nkiller\tanger\t0.7\ncalm\tjoy\t0.3\nrage\tanger\t0.8\n");
  const auto r = run({"lexicon", "inspect", dir.file("lex.tsv"), "--tau", "0.6", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["raw_entries"] == 4);
  CHECK(j["distinct_words"] == 3);
  CHECK(j["raw_at_tau"] == 3);
  CHECK(j["collapsed_at_tau"] == 2);
  CHECK(j["dropped_at_tau"] == 1);
  CHECK(j["dropped_fraction_at_tau"].get<double>() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("synth, stats, emotionize, embed, classify and cluster chain together") {
  Workspace ws;
  auto stats = run({"corpus", "stats", ws.corpus, "--format", "json"});
  REQUIRE(stats.code == cli::kOk);
  auto j = nlohmann::json::parse(stats.out);
  CHECK(j["documents"] == 40);
  CHECK(j["fake"]["documents"] == 20);

  const auto emo_path = ws.dir.file("emo.jsonl");
  const auto emo_stats = ws.dir.file("emo_stats.json");
  auto emo = run({"emotionize", "--corpus", ws.corpus, "--lexicon", ws.lexicon, "--tau", "0.6", "--out", emo_path,
                  "--stats", emo_stats, "--format", "json"});
  REQUIRE(emo.code == cli::kOk);
  j = nlohmann::json::parse(emo.out);
  CHECK(j["tau"].get<double>() == 0.6);
  CHECK(j["inserted_tokens"].get<int>() > 0);
  CHECK(nlohmann::json::parse(testing::read_file(emo_stats)) == j);
  CHECK(emotikon::load_corpus_file(emo_path).emotionized());

  const auto again = run({"emotionize", "--corpus", emo_path, "--lexicon", ws.lexicon, "--out", ws.dir.file("x")});
  CHECK(again.code == cli::kData);

  const auto vec_path = ws.dir.file("emo.vec");
  REQUIRE(run({"embed", "--corpus", emo_path, "--dim", "8", "--epochs", "3", "--seed", "4", "--out", vec_path}).code ==
          cli::kOk);
  const auto vectors = emotikon::read_doc_vectors_file(vec_path);
  CHECK(vectors.size() == 40);
  CHECK(vectors.dimension() == 8);

  auto cls = run({"classify", "--vectors", vec_path, "--corpus", emo_path, "--model", "nb", "--model", "knn",
                  "--folds", "4", "--format", "json"});
  REQUIRE(cls.code == cli::kOk);
  j = nlohmann::json::parse(cls.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["model"] == "NB");
  CHECK(j[1]["fold_accuracies"].size() == 4);
  CHECK(run({"classify", "--vectors", vec_path, "--corpus", emo_path, "--model", "cnn"}).code == cli::kUsage);

  const auto assign = ws.dir.file("km.csv");
  auto km = run({"cluster", "kmeans", "--vectors", vec_path, "--k", "3", "--inits", "4", "--corpus", emo_path,
                 "--out", assign, "--format", "json"});
  REQUIRE(km.code == cli::kOk);
  j = nlohmann::json::parse(km.out);
  CHECK(j["purity"].get<double>() >= 0.5);
  CHECK(j["purity"].get<double>() <= 1.0);
  const auto csv = testing::read_file(assign);
  CHECK(csv.rfind("doc_id,cluster_id\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 41);
  CHECK(run({"cluster", "kmeans", "--vectors", vec_path, "--k", "41"}).code == cli::kUsage);

  auto db = run({"cluster", "dbscan", "--vectors", vec_path, "--eps", "100", "--min-samples", "2", "--corpus", emo_path,
                 "--format", "json"});
  REQUIRE(db.code == cli::kOk);
  j = nlohmann::json::parse(db.out);
  CHECK(j["purity"].get<double>() == 0.5);

  CHECK(run({"cluster", "kdist", "--vectors", vec_path, "--k", "3"}).code == cli::kOk);
}

TEST_CASE("classify scores an external prediction file") {
  Workspace ws;
  const auto corpus = emotikon::load_corpus_file(ws.corpus);
  std::string preds = "doc_id,predicted_label\n";
  for (const auto& d : corpus.documents()) preds += d.id + ",fake\n";
  testing::write_file(ws.dir.file("preds.csv"), preds);
  const auto r = run({"classify", "--corpus", ws.corpus, "--external", ws.dir.file("preds.csv"), "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j[0]["accuracy"].get<double>() == 0.5);
}

TEST_CASE("experiment run writes reports and refuses bad configs") {
  const testing::TempDir dir;
  testing::write_file(dir.file("exp.json"), R"({
    "corpus": {"docs_per_class": 10, "tokens_per_doc": 30},
    "taus": [0.6], "dims": [4], "models": ["nb"], "kmeans_k": [2],
    "dbscan": {"min_samples": [3]}, "n_inits": 2, "folds": 2,
    "embedding": {"epochs": 2}, "reports": ["csv"]
  })");
  const auto r = run({"experiment", "run", "--config", dir.file("exp.json"), "--out", dir.file("out"), "--quiet"});
  REQUIRE(r.code == cli::kOk);
  CHECK(testing::read_file(dir.file("out/classification.csv")).rfind("metric,method,d,k,ms,eps,baseline", 0) == 0);

  testing::write_file(dir.file("bad.json"), R"({"corpus": {"docs_per_class": 10}, "colour": "red"})");
  CHECK(run({"experiment", "run", "--config", dir.file("bad.json"), "--out", dir.file("out2")}).code == cli::kData);
}

TEST_CASE("EMOTIKON_WORKERS sets the default worker count") {
  ::setenv("EMOTIKON_WORKERS", "3", 1);
  CHECK(cli::default_workers() == 3);
  ::setenv("EMOTIKON_WORKERS", "zero", 1);
  CHECK_THROWS(cli::default_workers());
  ::unsetenv("EMOTIKON_WORKERS");
  CHECK(cli::default_workers() == 1);
}
