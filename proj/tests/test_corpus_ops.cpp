#include <doctest.h>

#include <set>

#include "emotk/corpus_ops.hpp"
#include "emotk/label_space.hpp"

using namespace emotk;

namespace {

Corpus make_corpus(const std::vector<std::pair<std::string, std::size_t>>& sizes) {
  Corpus c{taxonomies::emotion11(), {}, Split::kUnsplit};
  const auto& tax = taxonomies::emotion11();
  for (const auto& [lang, n] : sizes) {
    for (std::size_t i = 0; i < n; ++i) {
      Sample s;
      s.id = lang + "-" + std::to_string(i);
      s.lang = lang;
      s.text = "text " + std::to_string(i);
      s.labels = {tax.label(i % tax.size())};
      c.samples.push_back(std::move(s));
    }
  }
  return c;
}

std::set<std::string> ids(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& s : c.samples) out.insert(s.id);
  return out;
}

std::map<std::string, std::size_t> per_lang(const Corpus& c) {
  std::map<std::string, std::size_t> out;
  for (const auto& s : c.samples) ++out[s.lang];
  return out;
}

}  // namespace

TEST_SUITE("corpus_ops") {
  TEST_CASE("split sizes per language") {
    SplitSpec spec;
    spec.defaults.train = 50000;
    const auto corpus = make_corpus({{"de", 51000}, {"ja", 51000}});
    const auto r = stratified_split(corpus, spec, 42);
    for (const auto& [lang, n] : per_lang(r.train)) CHECK(n == 50000);
    for (const auto& [lang, n] : per_lang(r.validation)) CHECK(n == 500);
    for (const auto& [lang, n] : per_lang(r.test)) CHECK(n == 500);
    CHECK(per_lang(r.train).size() == 2);
    CHECK(r.train.split == Split::kTrain);
    CHECK(r.validation.split == Split::kValidation);
    CHECK(r.test.split == Split::kTest);
  }

  TEST_CASE("split is a seeded partition") {
    const auto corpus = make_corpus({{"de", 3000}, {"ja", 2000}});
    const SplitSpec spec;
    const auto a = stratified_split(corpus, spec, 7);
    const auto b = stratified_split(corpus, spec, 7);
    CHECK(ids(a.train) == ids(b.train));
    CHECK(ids(a.validation) == ids(b.validation));
    CHECK(ids(a.test) == ids(b.test));
    const auto c = stratified_split(corpus, spec, 8);
    CHECK(ids(a.validation) != ids(c.validation));

    std::set<std::string> all;
    for (const auto* part : {&a.train, &a.validation, &a.test}) {
      for (const auto& id : ids(*part)) CHECK(all.insert(id).second);
    }
    CHECK(all == ids(corpus));
  }

  TEST_CASE("split keeps input order within each output") {
    const auto corpus = make_corpus({{"de", 1500}});
    const auto r = stratified_split(corpus, SplitSpec{}, 3);
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < corpus.size(); ++i) pos[corpus.samples[i].id] = i;
    for (const auto* part : {&r.train, &r.validation, &r.test}) {
      for (std::size_t i = 1; i < part->size(); ++i) {
        CHECK(pos[part->samples[i - 1].id] < pos[part->samples[i].id]);
      }
    }
  }

  TEST_CASE("split per-language overrides") {
    SplitSpec spec;
    spec.per_language["ja"] = {100, 50, std::nullopt};
    const auto r = stratified_split(make_corpus({{"de", 1200}, {"ja", 400}}), spec, 1);
    CHECK(per_lang(r.validation)["ja"] == 100);
    CHECK(per_lang(r.test)["ja"] == 50);
    CHECK(per_lang(r.train)["ja"] == 250);
    CHECK(per_lang(r.train)["de"] == 200);
  }

  TEST_CASE("split names a language that is too small") {
    SplitSpec spec;
    spec.defaults.train = 50000;
    try {
      stratified_split(make_corpus({{"de", 51000}, {"sw", 900}}), spec, 1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInvalidInput);
      CHECK(std::string(e.what()).find("sw") != std::string::npos);
    }
    CHECK_THROWS_AS(stratified_split(make_corpus({{"de", 999}}), SplitSpec{}, 1), Error);
  }

  TEST_CASE("stats of a single two-label sample") {
    Corpus c{taxonomies::emotion11(), {{"a", "en", "hello", {"anger", "joy"}, Script::kNative, false}},
             Split::kUnsplit};
    validate_corpus(c);
    const auto st = corpus_stats(c);
    CHECK(st.n_samples == 1);
    CHECK(st.label_instances == 2);
    CHECK(st.mean_cardinality == 2.0);
    CHECK(st.cardinality_histogram.at(2) == 1);
    for (const auto& [label, share] : st.class_shares) {
      CHECK(share == ((label == "anger" || label == "joy") ? 1.0 : 0.0));
    }
  }

  TEST_CASE("length statistics") {
    Corpus c{taxonomies::emotion11(), {}, Split::kUnsplit};
    int k = 0;
    for (std::size_t len : {650u, 100u, 209u}) {
      c.samples.push_back({"s" + std::to_string(k++), "en", std::string(len, 'x'), {"joy"}, Script::kNative, false});
    }
    const auto st = corpus_stats(c);
    CHECK(st.length.median == 209);
    CHECK(st.length.min == 100);
    CHECK(st.length.max == 650);
    CHECK(st.length.p95 == 650);
    // Code points, not bytes.
    Corpus u{taxonomies::emotion11(), {{"u", "ja", "\xE3\x81\x82\xE3\x81\x84", {"joy"}, Script::kNative, false}},
             Split::kUnsplit};
    CHECK(corpus_stats(u).length.median == 2);
  }

  TEST_CASE("histogram and class counts are consistent") {
    Corpus c{taxonomies::emotion11(), {}, Split::kUnsplit};
    const auto& tax = taxonomies::emotion11();
    for (std::size_t i = 0; i < 300; ++i) {
      Sample s{"r" + std::to_string(i), i % 3 == 0 ? "hi" : "fr", "t", {}, Script::kNative, false};
      for (std::size_t j = 0; j <= i % 3; ++j) s.labels.push_back(tax.label((i + j * 4) % tax.size()));
      if (s.lang == "hi" && i % 2 == 0) s.script = Script::kLatin;
      c.samples.push_back(std::move(s));
    }
    validate_corpus(c);
    const auto st = corpus_stats(c, {"hi"});
    std::size_t rows = 0, instances = 0;
    for (const auto& [card, n] : st.cardinality_histogram) {
      rows += n;
      instances += card * n;
    }
    CHECK(rows == 300);
    std::uint64_t counted = 0;
    for (const auto& [label, n] : st.class_counts) counted += n;
    CHECK(counted == instances);
    CHECK(st.label_instances == instances);
    CHECK(st.mean_cardinality == doctest::Approx(2.0));
    CHECK(st.romanized_share.size() == 1);
    CHECK(st.romanized_share.at("hi") == doctest::Approx(0.5));
    CHECK(st.per_language.at("fr") == 200);
  }
}
