#include <doctest.h>

#include <sstream>

#include "emotk/dataset_io.hpp"
#include "emotk/error.hpp"
#include "reference_tables.hpp"

using namespace emotk;

namespace {

Corpus parse(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return read_corpus(in, taxonomies::emotion11(), "t.jsonl");
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("dataset_io") {
  TEST_CASE("read a corpus line") {
    const auto c = parse(R"({"id":"a1","lang":"de","text":"Danke!","labels":["joy","gratitude"]})" "\n");
    REQUIRE(c.size() == 1);
    CHECK(c.samples[0].labels == std::vector<std::string>{"gratitude", "joy"});  // taxonomy order
    CHECK(c.samples[0].script == Script::kNative);
  }

  TEST_CASE("corpus errors carry the line number") {
    const auto empty = error_of([] { parse("{\"id\":\"a\",\"lang\":\"de\",\"text\":\"x\",\"labels\":[]}\n"); });
    CHECK(empty.find("t.jsonl:1") != std::string::npos);
    const auto unknown = error_of([] {
      parse("{\"id\":\"a\",\"lang\":\"de\",\"text\":\"x\",\"labels\":[\"joy\"]}\n"
            "{\"id\":\"b\",\"lang\":\"de\",\"text\":\"x\",\"labels\":[\"happiness\"]}\n");
    });
    CHECK(unknown.find("happiness") != std::string::npos);
    CHECK(unknown.find(":2") != std::string::npos);
    CHECK_FALSE(error_of([] { parse("{not json}\n"); }).empty());
    CHECK_FALSE(error_of([] {
                  parse("{\"id\":\"a\",\"lang\":\"de\",\"text\":\"x\",\"labels\":[\"joy\"]}\n"
                        "{\"id\":\"a\",\"lang\":\"de\",\"text\":\"y\",\"labels\":[\"joy\"]}\n");
                }).empty());
  }

  TEST_CASE("text is NFC-normalized on read") {
    // "e" + combining acute -> precomposed U+00E9
    const auto c = parse("{\"id\":\"a\",\"lang\":\"fr\",\"text\":\"caf\\u0065\\u0301\",\"labels\":[\"joy\"]}\n");
    CHECK(c.samples[0].text == "caf\xC3\xA9");
  }

  TEST_CASE("write then read round-trips") {
    const auto c = parse(
        "{\"id\":\"x\",\"lang\":\"hi\",\"text\":\"mera dil\",\"labels\":[\"love\",\"joy\"],\"script\":\"latin\"}\n"
        "{\"id\":\"y\",\"lang\":\"en\",\"text\":\"tab\\tnewline\\n\\\"q\\\"\",\"labels\":[\"fear\"]}\n");
    std::ostringstream out;
    write_corpus(out, c);
    const auto again = parse(out.str());
    std::ostringstream out2;
    write_corpus(out2, again);
    CHECK(out.str() == out2.str());
    CHECK(again.samples[0].script == Script::kLatin);
    CHECK(again.samples[1].text == c.samples[1].text);
  }

  TEST_CASE("binarize") {
    const auto c = parse(
        "{\"id\":\"x\",\"lang\":\"en\",\"text\":\"a\",\"labels\":[\"anger\",\"sadness\"]}\n"
        "{\"id\":\"y\",\"lang\":\"en\",\"text\":\"b\",\"labels\":[\"anger\"]}\n");
    const auto g = binarize(c);
    CHECK(g.values.cols() == 11);
    int row0 = 0, total = 0;
    for (std::size_t j = 0; j < 11; ++j) {
      row0 += g.values(0, j);
      total += g.values(0, j) + g.values(1, j);
    }
    CHECK(row0 == 2);
    CHECK(total == 3);
    CHECK(g.values(1, *taxonomies::emotion11().index_of("anger")) == 1);
  }

  TEST_CASE("score CSV column order does not matter") {
    const auto& tax = taxonomies::emotion11();
    std::string header = "id", shuffled = "id", row = "r1", srow = "r1";
    for (std::size_t j = 0; j < tax.size(); ++j) {
      header += "," + tax.label(j);
      row += "," + std::to_string(0.05 * static_cast<double>(j));
    }
    for (std::size_t j = tax.size(); j-- > 0;) {
      shuffled += "," + tax.label(j);
      srow += "," + std::to_string(0.05 * static_cast<double>(j));
    }
    std::istringstream a(header + "\n" + row + "\n"), b(shuffled + ",extra\n" + srow + ",9\n");
    const auto x = read_scores_csv(a, tax);
    const auto y = read_scores_csv(b, tax);
    CHECK(x.values == y.values);
    CHECK(x.values(0, 2) == 0.1);
  }

  TEST_CASE("score validation") {
    const auto& tax = taxonomies::semeval11();
    std::string header = "id";
    for (const auto& l : tax.labels()) header += "," + l;
    auto row = [&](const std::string& id, const std::string& first) {
      std::string r = id + "," + first;
      for (std::size_t j = 1; j < tax.size(); ++j) r += ",0.5";
      return r + "\n";
    };
    std::istringstream range(header + "\n" + row("a", "1.2"));
    CHECK_THROWS_AS(read_scores_csv(range, tax), Error);
    std::istringstream dup(header + "\n" + row("a", "0.1") + row("a", "0.2"));
    CHECK_THROWS_AS(read_scores_csv(dup, tax), Error);
    std::istringstream missing("id,anger\na,0.3\n");
    CHECK_THROWS_AS(read_scores_csv(missing, tax), Error);
    std::istringstream jsonl(R"({"id":"a","scores":{"anger":0.3}})" "\n");
    CHECK_THROWS_AS(read_scores_jsonl(jsonl, tax), Error);
  }

  TEST_CASE("score matrix shape for a full test set") {
    const auto& tax = taxonomies::emotion11();
    std::ostringstream csv;
    csv << "id";
    for (const auto& l : tax.labels()) csv << ',' << l;
    csv << '\n';
    for (int i = 0; i < 11500; ++i) {
      csv << "t" << i;
      for (std::size_t j = 0; j < tax.size(); ++j) csv << ",0.25";
      csv << '\n';
    }
    std::istringstream in(csv.str());
    const auto s = read_scores_csv(in, tax);
    CHECK(s.values.rows() == 11500);
    CHECK(s.values.cols() == 11);
  }

  TEST_CASE("score CSV write/read is lossless") {
    const auto& tax = taxonomies::emotion11();
    ScoreMatrix s{{"a", "b"}, tax, RealMatrix(2, tax.size())};
    for (std::size_t c = 0; c < s.values.size(); ++c) s.values.flat()[c] = 1.0 / (3.0 + static_cast<double>(c));
    std::ostringstream out;
    write_scores_csv(out, s);
    std::istringstream in(out.str());
    CHECK(read_scores_csv(in, tax).values == s.values);
  }

  TEST_CASE("join by id is total") {
    const auto& tax = taxonomies::emotion11();
    ScoreMatrix s{{"a", "b"}, tax, RealMatrix(2, tax.size())};
    s.values(1, 0) = 0.75;
    const auto aligned = align_scores(s, {"b", "a"});
    CHECK(aligned.values(0, 0) == 0.75);
    const auto msg = error_of([&] { align_scores(s, {"a", "zz9"}); });
    CHECK(msg.find("zz9") != std::string::npos);
  }

  TEST_CASE("GoEmotions adapter") {
    std::istringstream in("I love it\t2,14\tid1\nso curious\t7\tid2\n");
    const auto c = adapt_goemotions(in);
    CHECK(c.taxonomy.size() == 28);
    REQUIRE(c.size() == 2);
    // ids 2 and 14 in the published order are anger and fear
    CHECK(c.samples[0].labels == std::vector<std::string>{"anger", "fear"});
    CHECK(c.samples[1].labels == std::vector<std::string>{"curiosity"});
    for (const auto& s : c.samples) CHECK(s.lang == "en");
    std::istringstream bad("x\t28\tid3\n");
    CHECK_THROWS_AS(adapt_goemotions(bad), Error);
  }

  TEST_CASE("SemEval adapter") {
    const std::string header =
        "ID\tTweet\tanger\tanticipation\tdisgust\tfear\tjoy\tlove\toptimism\tpessimism\tsadness\tsurprise\ttrust\n";
    std::istringstream in(header + "2018-1\tugh\t1\t0\t0\t1\t0\t0\t0\t0\t0\t0\t0\n" +
                          "2018-2\tmeh\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\n");
    auto c = adapt_semeval(in, "ar");
    REQUIRE(c.size() == 2);
    CHECK(c.samples[0].labels == std::vector<std::string>{"anger", "fear"});
    CHECK(c.samples[1].empty_gold);
    for (const auto& s : c.samples) CHECK(s.lang == "ar");
    CHECK(drop_empty_gold(c) == 1);
    CHECK(c.size() == 1);
    std::istringstream bad(header + "2018-3\tx\t2\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\n");
    CHECK_THROWS_AS(adapt_semeval(bad, "en"), Error);
  }

  TEST_CASE("column sums of a corpus built from class counts equal the counts") {
    // Small scaled version: one label per row, counts divided by 1000.
    std::ostringstream jsonl;
    int id = 0;
    for (const auto& row : reference::kClassDistribution) {
      for (long k = 0; k < row.count / 1000; ++k) {
        jsonl << "{\"id\":\"r" << id++ << "\",\"lang\":\"en\",\"text\":\"t\",\"labels\":[\"" << row.label << "\"]}\n";
      }
    }
    const auto g = binarize(parse(jsonl.str()));
    const auto& tax = taxonomies::emotion11();
    for (const auto& row : reference::kClassDistribution) {
      long sum = 0;
      const auto j = *tax.index_of(row.label);
      for (std::size_t i = 0; i < g.values.rows(); ++i) sum += g.values(i, j);
      CHECK(sum == row.count / 1000);
    }
  }
}
