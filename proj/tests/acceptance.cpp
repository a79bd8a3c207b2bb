// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
// FAIL. Tolerances are fixed here and must not be loosened.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "emotk/corpus_ops.hpp"
#include "emotk/decision_rules.hpp"
#include "emotk/filters.hpp"
#include "emotk/generation.hpp"
#include "emotk/label_space.hpp"
#include "emotk/metrics.hpp"
#include "emotk/reporting.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

namespace fs = std::filesystem;
using namespace emotk;

namespace {

const fs::path kData = EMOTK_DATA_DIR;

struct Outcome {
  enum class Status { kPass, kFail, kSkip } status;
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Status::kPass, std::move(d)}; }
Outcome fail_with(std::string d) { return {Outcome::Status::kFail, std::move(d)}; }
Outcome check(bool ok, std::string d) { return ok ? pass(std::move(d)) : fail_with(std::move(d)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// ------------------------------------------------------------------ 1

Outcome metric_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto x = oracle::random_instance(seed);
    const double diffs[] = {
        metrics::subset_accuracy(x.pred, x.gold) - oracle::subset_accuracy(x.pred, x.gold),
        metrics::hamming_accuracy(x.pred, x.gold) - oracle::hamming_accuracy(x.pred, x.gold),
        metrics::jaccard_samples(x.pred, x.gold) - oracle::jaccard_samples(x.pred, x.gold),
        metrics::f1_micro(x.pred, x.gold) - oracle::f1_micro(x.pred, x.gold),
        metrics::f1_macro(x.pred, x.gold) - oracle::f1_macro(x.pred, x.gold),
        metrics::auroc_micro(x.scores, x.gold) - oracle::auroc(x.scores, x.gold),
        metrics::ap_micro(x.scores, x.gold) - oracle::average_precision(x.scores, x.gold),
        metrics::lrap(x.scores, x.gold) - oracle::lrap(x.scores, x.gold),
    };
    for (double d : diffs) worst = std::max(worst, std::abs(d));
  }
  const double secs = seconds_since(t0);
  return check(worst <= 1e-9 && secs < 10.0,
               "200 instances, max |diff| " + fmt(worst) + ", " + fmt(secs, 3) + " s");
}

// ------------------------------------------------------------------ 2

Outcome lrap_hand_case() {
  const RealMatrix s(2, 3, std::vector<double>{0.75, 0.5, 1.0, 1.0, 0.2, 0.1});
  const BinaryMatrix g(2, 3, std::vector<std::uint8_t>{1, 0, 0, 0, 0, 1});
  const double v = metrics::lrap(s, g);
  return check(std::abs(v - 5.0 / 12.0) <= 1e-12, "LRAP " + fmt(v, 17) + " vs 5/12");
}

// ------------------------------------------------------------------ 3

Outcome ap_auc_hand_cases() {
  const RealMatrix s(1, 4, std::vector<double>{0.9, 0.8, 0.7, 0.1});
  const BinaryMatrix g(1, 4, std::vector<std::uint8_t>{1, 0, 1, 0});
  const double ap = metrics::ap_micro(s, g);
  const double auc = metrics::auroc_micro(s, g);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto x = oracle::random_instance(seed);
    const auto curve = metrics::pr_curve_micro(x.scores, x.gold);
    worst = std::max(worst, std::abs(metrics::pr_curve_area(curve) - metrics::ap_micro(x.scores, x.gold)));
  }
  return check(ap == 5.0 / 6.0 && auc == 0.75 && worst <= 1e-12,
               "AP " + fmt(ap, 17) + ", AUROC " + fmt(auc, 17) + ", curve-vs-AP max |diff| " + fmt(worst));
}

// ------------------------------------------------------------------ 4

Outcome mapping_fidelity() {
  const auto go = load_mapping(kData / "mappings" / "goemotions_to_emotion11.tsv", taxonomies::goemotions28(),
                               taxonomies::emotion11());
  const auto se = load_mapping(kData / "mappings" / "semeval_to_emotion11.tsv", taxonomies::semeval11(),
                               taxonomies::emotion11());
  bool ok = go.target_of("annoyance") == "anger" && se.dropped() == std::set<std::string>{"anticipation"};
  const auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
  std::size_t go_mapped = 0, se_mapped = 0;
  for (const auto& [target, sources] : reference::kGoEmotionsProjection) {
    ok = ok && as_set(go.sources_of(target)) == as_set(sources);
    go_mapped += sources.size();
  }
  for (const auto& [target, sources] : reference::kSemEvalProjection) {
    ok = ok && as_set(se.sources_of(target)) == as_set(sources);
    se_mapped += sources.size();
  }
  ok = ok && go_mapped == go.mapped_count() && se_mapped == se.mapped_count();
  const auto n_go = intersect_taxonomies(taxonomies::goemotions28(), taxonomies::emotion11()).size();
  const auto n_se = intersect_taxonomies(taxonomies::semeval11(), taxonomies::emotion11()).size();
  ok = ok && n_go == 9 && n_se == 7;
  return check(ok, std::string(ok ? "mapping tables match" : "mapping tables differ") + "; intersections " + std::to_string(n_go) + " and " +
                       std::to_string(n_se));
}

// ------------------------------------------------------------------ 5

Outcome class_distribution_statistics() {
  const auto& tax = taxonomies::emotion11();
  const std::size_t n1 = 292468, n2 = 204727, n3 = 87740;
  const std::size_t rows = n1 + n2 + n3;
  // Label instances grouped by class, poured slot by slot: first slot of
  // every row, then the second slot of rows with 2+ labels, then the third.
  std::vector<std::size_t> instances;
  for (const auto& r : reference::kClassDistribution) {
    instances.insert(instances.end(), static_cast<std::size_t>(r.count), *tax.index_of(r.label));
  }
  if (instances.size() != n1 + 2 * n2 + 3 * n3) return fail_with("instance total mismatch");
  // Rows sorted by cardinality descending: [0, n3) have 3, [n3, n3+n2) have 2.
  std::vector<std::vector<std::size_t>> labels(rows);
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows; ++r) labels[r].push_back(instances[k++]);
  for (std::size_t r = 0; r < n3 + n2; ++r) labels[r].push_back(instances[k++]);
  for (std::size_t r = 0; r < n3; ++r) labels[r].push_back(instances[k++]);

  Corpus c{tax, {}, Split::kUnsplit};
  c.samples.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    Sample s{"r" + std::to_string(r), "en", "x", {}, Script::kNative, false};
    std::set<std::size_t> distinct(labels[r].begin(), labels[r].end());
    if (distinct.size() != labels[r].size()) return fail_with("construction produced a repeated label");
    for (auto j : distinct) s.labels.push_back(tax.label(j));
    c.samples.push_back(std::move(s));
  }
  const auto st = corpus_stats(c);
  double worst = 0.0;
  std::map<std::string, double> shares(st.class_shares.begin(), st.class_shares.end());
  for (const auto& r : reference::kClassDistribution) {
    worst = std::max(worst, std::abs(100.0 * shares.at(r.label) - r.share_pct));
  }
  return check(st.n_samples == 584935 && st.label_instances == 965142 && worst <= 0.05,
               std::to_string(st.n_samples) + " rows, mean cardinality " + fmt(st.mean_cardinality, 4) +
                   ", max share deviation " + fmt(worst, 3) + " pp");
}

// ------------------------------------------------------------------ 6

Outcome sampler_targets() {
  const auto spec = GenerationSpec::reference(taxonomies::emotion11(), 1, 0);
  const LabelSetSampler sampler(spec);
  Rng rng(derive_seed(12345, "acceptance"));
  const auto t0 = std::chrono::steady_clock::now();
  std::array<long, 4> hist{};
  constexpr long kDraws = 100000;
  for (long i = 0; i < kDraws; ++i) ++hist[sampler.draw_indices(rng).size()];
  const double secs = seconds_since(t0);
  const double p1 = 100.0 * hist[1] / kDraws, p2 = 100.0 * hist[2] / kDraws, p3 = 100.0 * hist[3] / kDraws;
  const double mean = double(hist[1] + 2 * hist[2] + 3 * hist[3]) / kDraws;
  const bool ok = std::abs(p1 - 50) <= 1 && std::abs(p2 - 35) <= 1 && std::abs(p3 - 15) <= 1 &&
                  std::abs(mean - 1.65) <= 0.02 && secs < 5.0;
  return check(ok, "cardinality " + fmt(p1, 4) + "/" + fmt(p2, 4) + "/" + fmt(p3, 4) + " %, mean " +
                       fmt(mean, 4) + ", " + fmt(secs, 3) + " s");
}

// ------------------------------------------------------------------ 7

Outcome pareto_reference_models() {
  std::vector<ParetoPoint> pts;
  for (const auto& m : reference::kModels) pts.push_back({m.name, m.train_minutes, m.jaccard});
  const auto r = pareto_frontier(pts);
  std::set<std::string> front, dominated;
  for (const auto& p : r.frontier) front.insert(p.name);
  for (const auto& d : r.dominated) dominated.insert(d.point.name);
  const bool ok = front == std::set<std::string>{"DistilBERT", "mBERT", "XLM-R-Base", "XLM-R-Large"} &&
                  dominated == std::set<std::string>{"Twitter-XLM-R", "mDeBERTa-v3"};
  std::string names;
  for (const auto& p : r.frontier) names += (names.empty() ? "" : ", ") + p.name;
  return check(ok, "frontier {" + names + "}");
}

// ------------------------------------------------------------------ 8

std::string random_text(std::mt19937_64& rng, std::size_t words) {
  std::string out;
  std::uniform_int_distribution<int> len(3, 9), letter(0, 25);
  for (std::size_t w = 0; w < words; ++w) {
    if (w) out += ' ';
    const int n = len(rng);
    for (int i = 0; i < n; ++i) out += static_cast<char>('a' + letter(rng));
  }
  return out;
}

// Exact all-pairs Jaccard of 5-character shingle sets through an inverted
// index; pairs sharing no shingle have Jaccard 0.
std::map<std::pair<std::size_t, std::size_t>, double> all_pairs_jaccard(const std::vector<std::string>& texts,
                                                                        std::size_t k) {
  std::vector<std::set<std::string>> sets(texts.size());
  std::unordered_map<std::string, std::vector<std::size_t>> postings;
  for (std::size_t d = 0; d < texts.size(); ++d) {
    for (std::size_t i = 0; i + k <= texts[d].size(); ++i) sets[d].insert(texts[d].substr(i, k));
    for (const auto& s : sets[d]) postings[s].push_back(d);
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> shared;
  for (const auto& [s, docs] : postings) {
    for (std::size_t a = 0; a < docs.size(); ++a)
      for (std::size_t b = a + 1; b < docs.size(); ++b) ++shared[{docs[a], docs[b]}];
  }
  std::map<std::pair<std::size_t, std::size_t>, double> out;
  for (const auto& [pair, inter] : shared) {
    const auto uni = sets[pair.first].size() + sets[pair.second].size() - inter;
    out[pair] = static_cast<double>(inter) / static_cast<double>(uni);
  }
  return out;
}

Outcome dedup_recall() {
  std::mt19937_64 rng(2024);
  constexpr std::size_t kRows = 5000, kPairs = 250;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < kRows - kPairs; ++i) texts.push_back(random_text(rng, 60));
  std::set<std::size_t> planted_later;
  std::uniform_int_distribution<std::size_t> pick(0, kRows - kPairs - 1);
  std::set<std::size_t> originals;
  while (originals.size() < kPairs) originals.insert(pick(rng));
  for (auto o : originals) {
    auto copy = texts[o];
    copy[copy.size() - 2] = copy[copy.size() - 2] == 'q' ? 'z' : 'q';  // one edit near the end
    planted_later.insert(texts.size());
    texts.push_back(std::move(copy));
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto pairs = all_pairs_jaccard(texts, 5);
  std::set<std::size_t> truth;
  double min_planted = 1.0, max_other = 0.0;
  for (const auto& [pair, j] : pairs) {
    const bool planted = planted_later.contains(pair.second) && originals.contains(pair.first) &&
                         texts[pair.second].substr(0, 20) == texts[pair.first].substr(0, 20);
    if (planted) {
      min_planted = std::min(min_planted, j);
    } else {
      max_other = std::max(max_other, j);
    }
    if (j >= 0.85) truth.insert(pair.second);
  }
  if (!(min_planted >= 0.9 && max_other < 0.5)) {
    return fail_with("construction out of range: planted min " + fmt(min_planted) + ", others max " +
                     fmt(max_other));
  }

  Corpus c{taxonomies::emotion11(), {}, Split::kUnsplit};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    c.samples.push_back({"d" + std::to_string(100000 + i), "en", texts[i], {"joy"}, Script::kNative, false});
  }
  dedup::Params params;
  params.threshold = 0.85;
  const auto verdicts = filter_near_duplicates(c, params);
  std::set<std::size_t> flagged;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (!verdicts[i].passed) flagged.insert(i);
  }
  std::size_t hits = 0, false_pos = 0;
  for (auto f : flagged) (truth.contains(f) ? hits : false_pos) += 1;
  const double secs = seconds_since(t0);
  return check(truth == planted_later && hits == kPairs && false_pos == 0 && secs < 30.0,
               "recall " + std::to_string(hits) + "/" + std::to_string(truth.size()) + ", false positives " +
                   std::to_string(false_pos) + ", planted min Jaccard " + fmt(min_planted, 4) +
                   ", others max " + fmt(max_other, 4) + ", " + fmt(secs, 3) + " s");
}

// ------------------------------------------------------------------ 9

Outcome decision_rule_properties() {
  bool cardinality_ok = true, free_metrics_ok = true, calibration_ok = true;
  const auto grid = default_grid();
  const bool has_default = std::find(grid.begin(), grid.end(), 0.5) != grid.end();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto x = oracle::random_instance(seed);
    const auto am = decide(x.scores, DecisionRule::argmax());
    for (std::size_t i = 0; i < am.rows(); ++i) {
      int sum = 0;
      for (auto v : am.row(i)) sum += v;
      cardinality_ok = cardinality_ok && sum == 1;
    }
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < x.gold.cols(); ++j) labels.push_back("l" + std::to_string(j));
    const auto cmp = compare_rules(x.scores, x.gold, labels);
    free_metrics_ok = free_metrics_ok && cmp.threshold.auc_micro == cmp.argmax.auc_micro &&
                      cmp.threshold.ap_micro == cmp.argmax.ap_micro && cmp.threshold.lrap == cmp.argmax.lrap;
    const auto cal = calibrate_threshold(x.scores, x.gold, grid);
    calibration_ok = calibration_ok && cal.f1_micro_at_tau >= cal.f1_micro_at_default;
  }
  return check(has_default && cardinality_ok && free_metrics_ok && calibration_ok,
               std::string("argmax cardinality ") + (cardinality_ok ? "1" : "!=1") + ", threshold-free " +
                   (free_metrics_ok ? "identical" : "differ") + ", calibration " +
                   (calibration_ok ? "never below tau=0.5" : "below tau=0.5"));
}

// ------------------------------------------------------------------ 10

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + EMOTK_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / ("emotk_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto d = dir.string();
  const std::string gen = "generate --budget 1200 --languages de,hi,ja --out ";
  int rc = run_cli("--seed 11 --workers 1 " + gen + d + "/w1.jsonl");
  rc |= run_cli("--seed 11 --workers 8 " + gen + d + "/w8.jsonl");
  rc |= run_cli("--seed 5 split --in " + d + "/w1.jsonl --out-dir " + d + "/s1");
  rc |= run_cli("--seed 5 split --in " + d + "/w1.jsonl --out-dir " + d + "/s2");
  Outcome out = fail_with("CLI exited with an error");
  if (rc == 0) {
    const auto a = slurp(dir / "w1.jsonl");
    bool same_split = true;
    for (const char* part : {"train.jsonl", "validation.jsonl", "test.jsonl"}) {
      same_split = same_split && slurp(dir / "s1" / part) == slurp(dir / "s2" / part) &&
                   !slurp(dir / "s1" / part).empty();
    }
    out = check(!a.empty() && a == slurp(dir / "w8.jsonl") && same_split,
                std::to_string(a.size()) + " corpus bytes; 1 vs 8 workers " +
                    (a == slurp(dir / "w8.jsonl") ? "identical" : "differ") + "; split reruns " +
                    (same_split ? "identical" : "differ"));
  }
  fs::remove_all(dir);
  return out;
}

// ------------------------------------------------------------------ 11

// Optional: EMOTK_STORED_PREDICTIONS names a JSON file
//   {"rows": [{"name": ..., "args": ["--gold", ..., "--scores", ...],
//              "expected": {"f1_micro": 0.868, ...}}]}
// Each row runs `emotk evaluate <args>` and compares within 0.001.
Outcome stored_predictions() {
  const char* manifest = std::getenv("EMOTK_STORED_PREDICTIONS");
  if (manifest == nullptr || *manifest == '\0') {
    return {Outcome::Status::kSkip,
            "needs fine-tuned model score files; set EMOTK_STORED_PREDICTIONS to a manifest to run"};
  }
  nlohmann::json m;
  try {
    std::ifstream in(manifest);
    m = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    return fail_with(std::string("unreadable manifest: ") + e.what());
  }
  std::size_t checked = 0;
  for (const auto& row : m.at("rows")) {
    std::string cmd = std::string("\"") + EMOTK_CLI_PATH + "\" evaluate";
    for (const auto& a : row.at("args")) cmd += " '" + a.get<std::string>() + "'";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return fail_with("cannot run the CLI");
    std::string text;
    char buf[4096];
    while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
    if (pclose(pipe) != 0) return fail_with(row.value("name", "?") + ": evaluate failed");
    const auto report = nlohmann::json::parse(text);
    for (const auto& [metric, expected] : row.at("expected").items()) {
      const double got = report.at(metric).get<double>();
      if (std::abs(got - expected.get<double>()) > 0.001) {
        return fail_with(row.value("name", "?") + " " + metric + " " + fmt(got, 4) + " vs " +
                         fmt(expected.get<double>(), 4));
      }
      ++checked;
    }
  }
  return pass(std::to_string(checked) + " published values recomputed within 0.001");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"metric oracle equivalence", metric_oracles},
      {"LRAP hand case", lrap_hand_case},
      {"AP/AUC hand cases and curve integral", ap_auc_hand_cases},
      {"mapping fidelity and intersections", mapping_fidelity},
      {"class-distribution statistics", class_distribution_statistics},
      {"sampler targets", sampler_targets},
      {"Pareto frontier", pareto_reference_models},
      {"near-duplicate filter", dedup_recall},
      {"decision-rule properties", decision_rule_properties},
      {"determinism", determinism},
      {"stored prediction files", stored_predictions},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail_with(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Outcome::Status::kPass ? "PASS" : o.status == Outcome::Status::kFail ? "FAIL" : "SKIP";
    failures += o.status == Outcome::Status::kFail;
    std::cout << tag << ' ' << (i + 1) << ' ' << criteria[i].first << ": " << o.detail << '\n';
  }
  return failures == 0 ? 0 : 1;
}
