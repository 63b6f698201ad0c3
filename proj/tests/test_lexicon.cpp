#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "emotikon/common.hpp"
#include "emotikon/lexicon.hpp"
#include "emotikon/rng.hpp"
#include "oracles/oracles.hpp"

using namespace emotikon;

namespace {

std::vector<RawLexiconEntry> random_raw(Rng& rng, std::size_t n, std::size_t words) {
  const std::vector<std::string> emotions{"anger", "fear", "joy", "sadness", "trust"};
  std::vector<RawLexiconEntry> raw;
  for (std::size_t i = 0; i < n; ++i) {
    raw.push_back({"w" + std::to_string(rng.below(words)), emotions[rng.below(emotions.size())],
                   static_cast<double>(rng.below(11)) / 10.0});
  }
  return raw;
}

}  // namespace

TEST_CASE("parse_lexicon reads a tab-separated record") {
  const auto entries = parse_lexicon("unlucky\tsadness\t0.7\n");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0] == RawLexiconEntry{"unlucky", "sadness", 0.7});
}

TEST_CASE("parse_lexicon of empty content") {
  CHECK(parse_lexicon("").empty());
  CHECK(parse_lexicon("\n\n").empty());
}

TEST_CASE("parse_lexicon rejects out-of-range scores with the line number") {
  try {
    parse_lexicon("ok\tjoy\t0.5\nabuse\tanger\t1.5\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_lexicon("x\tjoy\t-0.1"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("x\tjoy\tnan"), ParseError);
}

TEST_CASE("parse_lexicon rejects malformed lines") {
  CHECK_THROWS_AS(parse_lexicon("x\tjoy\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("x\tjoy\t0.5\textra\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("good\tjoy\t0.5\nbad\tjoy\tabc\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("ice cream\tjoy\t0.5\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("\tjoy\t0.5\n"), ParseError);
}

TEST_CASE("parse_lexicon skips a header and lowercases words") {
  const auto entries = parse_lexicon("word\temotion\tscore\nOUTRAGE\tAnger\t0.964\n");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].word == "outrage");
  CHECK(entries[0].emotion == "Anger");
}

TEST_CASE("parse_lexicon accepts CRLF line endings") {
  const auto entries = parse_lexicon("a\tjoy\t0.5\r\nb\tfear\t1\r\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[1].intensity == 1.0);
}

TEST_CASE("collapse_best_sense keeps the strongest sense") {
  const auto lex = collapse_best_sense({{"abuse", "anger", 0.9}, {"abuse", "fear", 0.7}});
  REQUIRE(lex.size() == 1);
  CHECK(*lex.find("abuse") == LexiconEntry{"anger", 0.9});
  CHECK(lex.dropped_count() == 1);
  CHECK(lex.emotion_set() == std::set<std::string>{"anger"});
}

TEST_CASE("collapse_best_sense breaks ties by emotion name") {
  const auto lex = collapse_best_sense({{"x", "fear", 0.5}, {"x", "anger", 0.5}});
  CHECK(*lex.find("x") == LexiconEntry{"anger", 0.5});
}

TEST_CASE("collapse_best_sense of nothing") {
  const auto lex = collapse_best_sense({});
  CHECK(lex.empty());
  CHECK(lex.dropped_count() == 0);
  CHECK(lex.max_intensity() == 0.0);
}

TEST_CASE("lookup applies an inclusive threshold") {
  const auto lex = collapse_best_sense({{"unlucky", "sadness", 0.7}});
  CHECK(lookup(lex, "unlucky", 0.6) == std::optional<std::string_view>("sadness"));
  CHECK(lookup(lex, "unlucky", 0.7) == std::optional<std::string_view>("sadness"));
  CHECK_FALSE(lookup(lex, "unlucky", 0.8).has_value());
  CHECK_FALSE(lookup(lex, "table", 0.0).has_value());
  CHECK_THROWS_AS(lookup(lex, "unlucky", 1.1), std::invalid_argument);
  CHECK_THROWS_AS(lookup(lex, "unlucky", -0.1), std::invalid_argument);
}

TEST_CASE("collapsed lexicon agrees with exhaustive best-sense selection") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto raw = random_raw(rng, rng.below(60), 25);
    const auto lex = collapse_best_sense(raw);
    std::vector<oracle::SenseRecord> records;
    for (const auto& r : raw) records.push_back({r.word, r.emotion, r.intensity});
    const auto expected = oracle::collapse(records);
    REQUIRE(lex.size() == expected.size());
    CHECK(lex.dropped_count() == raw.size() - expected.size());
    for (const auto& [word, sense] : expected) {
      const auto* entry = lex.find(word);
      REQUIRE(entry != nullptr);
      CHECK(entry->emotion == sense.first);
      CHECK(entry->intensity == sense.second);
    }
    for (const auto& r : raw) CHECK(lex.find(r.word)->intensity >= r.intensity);
    std::set<std::string> emotions;
    for (const auto& [w, e] : lex.entries()) emotions.insert(e.emotion);
    CHECK(lex.emotion_set() == emotions);
  }
}

TEST_CASE("lookup is monotone in tau") {
  Rng rng(5);
  const auto lex = collapse_best_sense(random_raw(rng, 80, 30));
  for (const auto& [word, entry] : lex.entries()) {
    for (int hi = 0; hi <= 10; ++hi) {
      const auto at_hi = lookup(lex, word, hi / 10.0);
      if (!at_hi) continue;
      for (int lo = 0; lo <= hi; ++lo) CHECK(lookup(lex, word, lo / 10.0) == at_hi);
    }
  }
}

TEST_CASE("parse, serialize and re-parse is the identity") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto raw = random_raw(rng, rng.below(40), 20);
    for (auto& r : raw) r.intensity = rng.uniform();
    const auto text = serialize_lexicon(raw);
    CHECK(parse_lexicon(text) == raw);
  }
}

TEST_CASE("summarize_lexicon counts match brute force") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto raw = random_raw(rng, rng.below(80), 30);
    const double tau = static_cast<double>(rng.below(11)) / 10.0;
    const auto s = summarize_lexicon(raw, tau);
    std::vector<oracle::SenseRecord> records;
    for (const auto& r : raw) records.push_back({r.word, r.emotion, r.intensity});
    const auto c = oracle::threshold_counts(records, tau);
    CHECK(s.raw_entries == raw.size());
    CHECK(s.raw_at_tau == c.senses_at_tau);
    CHECK(s.collapsed_at_tau == c.words_at_tau);
    CHECK(s.dropped_at_tau == c.dropped_at_tau);
  }
}

TEST_CASE("read_lexicon_file reports a missing file as a data error") {
  CHECK_THROWS_AS(read_lexicon_file("/nonexistent/lexicon.tsv"), DataError);
}

TEST_CASE("format_double round-trips") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * 1e3;
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.6) == "0.6");
  CHECK(format_double(1.0) == "1");
}
