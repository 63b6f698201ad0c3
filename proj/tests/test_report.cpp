#include <doctest.h>

#include <json.hpp>

#include "emotikon/report.hpp"
#include "emotikon/rng.hpp"

using namespace emotikon;

namespace {

ResultTable sample_table() {
  ResultTable t;
  t.metric = "accuracy";
  t.columns = {"baseline", "tau=0.2", "tau=0.6"};
  t.rows.push_back(ResultRow{"NB", 100, {}, {}, {}, {{0.61, 0.02, 10}, {0.7, 0.03, 10}, {0.69, 0.01, 10}}});
  t.rows.push_back(ResultRow{"BERT", 100, {}, {}, {}, {{0.5, 0.0, 1}, {std::nullopt, 0.0, 0}, {0.5, 0.0, 1}}});
  return t;
}

}  // namespace

TEST_CASE("csv header and first row") {
  const auto csv = emit_report(sample_table(), ReportFormat::Csv);
  const auto first_newline = csv.find('\n');
  CHECK(csv.substr(0, first_newline) ==
        "metric,method,d,k,ms,eps,baseline,baseline_std,baseline_n,tau=0.2,tau=0.2_std,tau=0.2_n,"
        "tau=0.6,tau=0.6_std,tau=0.6_n");
  CHECK(csv.find("accuracy,NB,100,,,,0.61,0.02,10,0.7,0.03,10,0.69,0.01,10\n") != std::string::npos);
  CHECK(csv.find("accuracy,BERT,100,,,,0.5,0,1,,0,0,0.5,0,1\n") != std::string::npos);
}

TEST_CASE("csv parse then emit is byte identical") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    ResultTable t;
    t.metric = trial % 2 ? "purity" : "accuracy";
    t.columns = {"baseline", "tau=0.4"};
    for (std::size_t r = 0, n = rng.below(6); r < n; ++r) {
      ResultRow row;
      row.method = r % 2 ? "KMeans" : "DBSCAN";
      row.dim = 100 + 200 * rng.below(2);
      if (rng.below(2)) row.k = rng.below(30);
      if (rng.below(2)) row.min_samples = rng.below(100);
      if (rng.below(2)) row.eps = rng.uniform();
      for (int c = 0; c < 2; ++c) {
        ResultCell cell;
        if (rng.below(4)) cell.mean = rng.uniform();
        cell.stddev = rng.uniform() / 10;
        cell.samples = rng.below(1000);
        row.cells.push_back(cell);
      }
      t.rows.push_back(row);
    }
    const auto csv = emit_report(t, ReportFormat::Csv);
    auto back = parse_csv_report(csv);
    if (t.rows.empty()) {
      CHECK(back.metric.empty());
      back.metric = t.metric;
    }
    CHECK(back == t);
    CHECK(emit_report(back, ReportFormat::Csv) == csv);
  }
}

TEST_CASE("malformed csv reports are rejected") {
  CHECK_THROWS_AS(parse_csv_report("nonsense\n"), ParseError);
  CHECK_THROWS_AS(parse_csv_report("metric,method,d,k,ms,eps,baseline,baseline_std,baseline_n\naccuracy,NB,x,,,,1,0,1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_csv_report("metric,method,d,k,ms,eps,baseline,baseline_std,baseline_n\naccuracy,NB\n"),
                  ParseError);
}

TEST_CASE("json report mirrors the table") {
  const auto doc = nlohmann::json::parse(emit_report(sample_table(), ReportFormat::Json));
  CHECK(doc["metric"] == "accuracy");
  CHECK(doc["columns"].size() == 3);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["method"] == "NB");
  CHECK(doc["rows"][0]["cells"][1]["mean"].get<double>() == 0.7);
  CHECK(doc["rows"][1]["cells"][1]["mean"].is_null());
  CHECK(doc["rows"][0]["k"].is_null());
}

TEST_CASE("markdown bolds the row maximum") {
  const auto md = emit_report(sample_table(), "markdown");
  CHECK(md.find("| NB | 100 | 0.610 | **0.700** | 0.690 |") != std::string::npos);
  CHECK(md.find("| BERT | 100 | **0.500** | - | **0.500** |") != std::string::npos);
  CHECK(md.find("Acc(D)") != std::string::npos);
}

TEST_CASE("report format names") {
  CHECK(parse_report_format("md") == ReportFormat::Markdown);
  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK_FALSE(parse_report_format("xml"));
  CHECK(file_extension(ReportFormat::Json) == "json");
  CHECK_THROWS_AS(emit_report(sample_table(), "xml"), std::invalid_argument);
}

TEST_CASE("an empty table emits only a header") {
  ResultTable t;
  t.metric = "purity";
  t.columns = {"baseline"};
  CHECK(emit_report(t, ReportFormat::Csv) == "metric,method,d,k,ms,eps,baseline,baseline_std,baseline_n\n");
}
