#include <doctest.h>

#include <charconv>
#include <cmath>
#include <sstream>

#include "emotk/metrics.hpp"
#include "emotk/reporting.hpp"
#include "emotk/rng.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

using namespace emotk;

namespace {

EvaluationReport rep(double f1, double auc = 0.9, double jacc = 0.7) {
  EvaluationReport r;
  r.f1_micro = f1;
  r.f1_macro = f1 - 0.01;
  r.jaccard_samples = jacc;
  r.auc_micro = auc;
  r.ap_micro = auc - 0.05;
  r.lrap = auc - 0.02;
  return r;
}

ModelRunRecord run(std::string name, double minutes, std::map<std::string, double> per_lang) {
  ModelRunRecord m;
  m.model = std::move(name);
  m.train_minutes = minutes;
  auto r = rep(0.8);
  r.per_language = std::move(per_lang);
  m.reports[ReportKey{"synthetic"}] = r;
  return m;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_SUITE("reporting") {
  TEST_CASE("language matrix orders hardest first") {
    const std::vector<ModelRunRecord> runs{run("A", 1, {{"de", 0.9}, {"sw", 0.5}, {"ja", 0.7}}),
                                           run("B", 2, {{"de", 0.8}, {"sw", 0.6}, {"ja", 0.7}})};
    const auto m = per_language_matrix(runs, ReportKey{"synthetic"});
    CHECK(m.languages == std::vector<std::string>{"sw", "ja", "de"});
    CHECK(m.models == std::vector<std::string>{"A", "B"});
    CHECK(m.mean[0] == doctest::Approx(0.55));
    CHECK(m.f1[2][1] == 0.8);
    const auto csv = to_csv(m);
    CHECK(csv.rfind("lang,A,B,mean\n", 0) == 0);
    CHECK(csv.find("sw,0.5,0.6,") != std::string::npos);
  }

  TEST_CASE("language matrix ties break alphabetically") {
    const std::vector<ModelRunRecord> runs{run("A", 1, {{"pt", 0.7}, {"es", 0.7}, {"it", 0.7}})};
    CHECK(per_language_matrix(runs, ReportKey{"synthetic"}).languages ==
          std::vector<std::string>{"es", "it", "pt"});
  }

  TEST_CASE("language matrix rejects ragged input") {
    const std::vector<ModelRunRecord> runs{run("A", 1, {{"de", 0.9}}), run("B", 1, {{"ja", 0.9}})};
    CHECK_THROWS_AS(per_language_matrix(runs, ReportKey{"synthetic"}), Error);
    CHECK_THROWS_AS(per_language_matrix(runs, ReportKey{"other"}), Error);
  }

  TEST_CASE("pareto frontier of the reference models") {
    std::vector<ParetoPoint> pts;
    for (const auto& m : reference::kModels) pts.push_back({m.name, m.train_minutes, m.jaccard});
    const auto r = pareto_frontier(pts);
    std::vector<std::string> names;
    for (const auto& p : r.frontier) names.push_back(p.name);
    CHECK(names == std::vector<std::string>{"DistilBERT", "mBERT", "XLM-R-Base", "XLM-R-Large"});
    REQUIRE(r.dominated.size() == 2);
    for (const auto& d : r.dominated) {
      CHECK(d.dominated_by == "XLM-R-Base");
      CHECK_FALSE(d.by_tie);
    }
  }

  TEST_CASE("pareto edge cases") {
    CHECK(pareto_frontier({{"solo", 1.0, 0.5}}).frontier.size() == 1);
    const auto tie = pareto_frontier({{"b", 2.0, 0.5}, {"a", 2.0, 0.5}});
    REQUIRE(tie.frontier.size() == 1);
    CHECK(tie.frontier[0].name == "a");
    REQUIRE(tie.dominated.size() == 1);
    CHECK(tie.dominated[0].by_tie);
    CHECK(tie.dominated[0].dominated_by == "a");
    CHECK_THROWS_AS(pareto_frontier({{"z", 0.0, 0.5}}), Error);
    CHECK(pareto_frontier({}).frontier.empty());
  }

  TEST_CASE("pareto frontier matches the dominance definition") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng(seed);
      std::vector<ParetoPoint> pts;
      const auto n = 1 + rng.below(12);
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({"m" + std::to_string(i), 1.0 + double(rng.below(6)), double(rng.below(6)) / 10.0});
      }
      const auto r = pareto_frontier(pts);
      CHECK(r.frontier.size() + r.dominated.size() == pts.size());
      for (const auto& p : pts) {
        bool strictly_dominated = false;
        for (const auto& q : pts) {
          strictly_dominated |= q.cost <= p.cost && q.quality >= p.quality &&
                                (q.cost < p.cost || q.quality > p.quality);
        }
        const bool on_frontier = std::any_of(r.frontier.begin(), r.frontier.end(),
                                             [&](const ParetoPoint& f) { return f.name == p.name; });
        if (strictly_dominated) CHECK_FALSE(on_frontier);
        if (on_frontier) CHECK_FALSE(strictly_dominated);
      }
      for (std::size_t i = 1; i < r.frontier.size(); ++i) {
        CHECK(r.frontier[i - 1].cost < r.frontier[i].cost);
        CHECK(r.frontier[i - 1].quality < r.frontier[i].quality);
      }
    }
  }

  TEST_CASE("pareto points from runs") {
    std::vector<ModelRunRecord> runs{run("A", 3, {}), run("B", 5, {})};
    runs[1].params = 2e8;
    const auto pts = pareto_points(runs, ReportKey{"synthetic"}, ParetoQuality::kJaccard);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].cost == 3.0);
    CHECK(pts[1].quality == 0.7);
  }

  TEST_CASE("runs JSON round-trip") {
    std::vector<ModelRunRecord> runs{run("A", 3, {{"de", 0.5}})};
    runs[0].reports[ReportKey{"semeval", "intersection", "argmax"}] = rep(0.4);
    const auto back = runs_from_json(nlohmann::json::parse(to_json(runs).dump()));
    REQUIRE(back.size() == 1);
    CHECK(back[0].reports.size() == 2);
    CHECK(back[0].report(ReportKey{"semeval", "intersection", "argmax"}).f1_micro == 0.4);
    CHECK(back[0].report(ReportKey{"synthetic"}).per_language.at("de") == 0.5);
    CHECK_THROWS_AS(back[0].report(ReportKey{"goemotions"}), Error);
  }

  TEST_CASE("table layouts") {
    std::vector<ModelRunRecord> runs{run("A", 1, {}), run("B", 1, {})};
    runs[0].reports[ReportKey{"synthetic"}] = rep(0.8684, 0.95);
    runs[1].reports[ReportKey{"synthetic"}] = rep(0.8681, 0.97);
    const auto t = render_table(runs, TableLayout::kInDomain, {ReportKey{"synthetic"}});
    const auto header = t.markdown.substr(0, t.markdown.find('\n'));
    for (const char* h : {"F1-mic", "F1-mac", "Jacc.", "AUC", "AP", "LRAP"}) {
      CHECK(header.find(h) != std::string::npos);
    }
    // .868 displays the same for both, so both are bold; AUC .970 only for B.
    CHECK(t.markdown.find("| A     | **.868** |") != std::string::npos);
    CHECK(t.markdown.find("**.970**") != std::string::npos);
    const auto a_line = t.markdown.substr(t.markdown.find("| A "));
    CHECK(a_line.substr(0, a_line.find('\n')).find(" .950 ") != std::string::npos);
    CHECK(t.markdown.find("0.868") == std::string::npos);
    const auto lz = render_table(runs, TableLayout::kInDomain, {ReportKey{"synthetic"}}, {true, 3});
    CHECK(lz.markdown.find("0.868") != std::string::npos);

    std::istringstream csv(t.csv);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "Model,F1-mic,F1-mac,Jacc.,AUC,AP,LRAP");
    std::getline(csv, line);
    const auto cells = split_csv_line(line);
    REQUIRE(cells.size() == 7);
    double v = 0.0;
    std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), v);
    CHECK(v == 0.8684);

    const auto h2h = render_table(runs, TableLayout::kHeadToHead, {ReportKey{"synthetic"}});
    CHECK(h2h.csv.rfind("Model,F1-mic,AUC-mic,AP-mic,LRAP\n", 0) == 0);

    for (auto& r : runs) r.reports[ReportKey{"semeval"}] = rep(0.5);
    const auto cross =
        render_table(runs, TableLayout::kCross, {ReportKey{"synthetic"}, ReportKey{"semeval"}});
    CHECK(cross.csv.rfind("Model,synthetic F1,synthetic AUC,semeval F1,semeval AUC\n", 0) == 0);
    CHECK(parse_layout("cross") == TableLayout::kCross);
    CHECK_THROWS_AS(parse_layout("diagonal"), Error);
  }

  TEST_CASE("curves file") {
    const RealMatrix s(1, 4, std::vector<double>{0.9, 0.8, 0.7, 0.1});
    const BinaryMatrix g(1, 4, std::vector<std::uint8_t>{1, 0, 1, 0});
    std::stringstream out;
    emit_curves(s, g, out);
    const auto text = out.str();
    CHECK(text.rfind("# ap_micro=0.8333", 0) == 0);
    CHECK(text.find("threshold,precision,recall\n") != std::string::npos);
    CHECK(text.find("inf,1,0") != std::string::npos);
    const auto back = read_curves(out);
    CHECK(back.ap_micro == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    const auto curve = metrics::pr_curve_micro(s, g);
    REQUIRE(back.points.size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
      CHECK(std::abs(back.points[i].precision - curve[i].precision) <= 1e-9);
      CHECK(std::abs(back.points[i].recall - curve[i].recall) <= 1e-9);
    }
    CHECK(std::abs(metrics::pr_curve_area(back.points) - back.ap_micro) <= 1e-9);

    std::stringstream perfect;
    emit_curves(RealMatrix(1, 2, std::vector<double>{0.9, 0.1}), BinaryMatrix(1, 2, std::vector<std::uint8_t>{1, 0}),
                perfect);
    CHECK(read_curves(perfect).points.size() == 2);
  }
}
