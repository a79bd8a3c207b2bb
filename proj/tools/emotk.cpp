// emotk: evaluation and corpus-construction pipeline for multi-label emotion
// classification. Run `emotk --help` or `emotk <subcommand> --help`.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emotk/corpus_ops.hpp"
#include "emotk/dataset_io.hpp"
#include "emotk/decision_rules.hpp"
#include "emotk/error.hpp"
#include "emotk/filters.hpp"
#include "emotk/generation.hpp"
#include "emotk/kernels.hpp"
#include "emotk/label_space.hpp"
#include "emotk/languages.hpp"
#include "emotk/metrics.hpp"
#include "emotk/reporting.hpp"

namespace fs = std::filesystem;
using namespace emotk;

namespace {

// Exit codes. Kept stable; documented in the README.
int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return 2;
    case ErrorKind::kInvalidInput: return 3;
    case ErrorKind::kIo: return 4;
    case ErrorKind::kUndefinedMetric: return 5;
    case ErrorKind::kGenerator: return 6;
    case ErrorKind::kBudgetUnreachable: return 7;
  }
  return 1;
}

int report_error(std::string_view kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

fs::path data_dir() {
  if (const char* env = std::getenv("EMOTK_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return EMOTK_DATA_DIR;
}

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) fail(ErrorKind::kUsage, std::string(what) + " is required");
  if (!fs::is_regular_file(path)) fail(ErrorKind::kIo, std::string(what) + " not found: " + path);
}

void require_dir(const std::string& path, std::string_view what) {
  if (!fs::is_directory(path)) fail(ErrorKind::kIo, std::string(what) + " not found: " + path);
}

/// Built-in name (emotion11, goemotions, semeval) or a path to a label list.
EmotionTaxonomy resolve_taxonomy(const std::string& spec) {
  if (spec == "emotion11") return taxonomies::emotion11();
  if (spec == "goemotions") return taxonomies::goemotions28();
  if (spec == "semeval") return taxonomies::semeval11();
  require_file(spec, "taxonomy file");
  return load_taxonomy(spec, fs::path(spec).stem().string());
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  auto out = open_out(path);
  out << text;
}

template <class Json>
void write_json(const std::string& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

// ------------------------------------------------------------ shared inputs

struct GoldOptions {
  std::string gold;
  std::string format = "jsonl";
  std::string lang = "en";
  std::string gold_taxonomy;
  std::string scores;
  std::string score_taxonomy = "emotion11";
  std::string mapping;
  std::string view = "projected";
  bool keep_empty_gold = false;

  void add_to(CLI::App* app) {
    app->add_option("--gold", gold, "Gold file (corpus JSONL or a benchmark release file)")->required();
    app->add_option("--gold-format", format, "Gold layout")
        ->check(CLI::IsMember({"jsonl", "goemotions", "semeval"}))
        ->capture_default_str();
    app->add_option("--lang", lang, "Language tag for semeval gold files")->capture_default_str();
    app->add_option("--gold-taxonomy", gold_taxonomy,
                    "Gold label space: emotion11 | goemotions | semeval | <file> (default by format)");
    app->add_option("--scores", scores, "Score file (.csv or .jsonl)")->required();
    app->add_option("--score-taxonomy", score_taxonomy, "Label space of the score columns")
        ->capture_default_str();
    app->add_option("--mapping", mapping,
                    "Gold-to-score label mapping TSV for the projected view (default: shipped mapping)");
    app->add_option("--view", view, "Label-space view")
        ->check(CLI::IsMember({"projected", "intersection"}))
        ->capture_default_str();
    app->add_flag("--keep-empty-gold", keep_empty_gold,
                  "Keep rows whose native gold is empty (dropped by default)");
  }

  void validate() const {
    require_file(gold, "gold file");
    require_file(scores, "score file");
    if (!mapping.empty()) require_file(mapping, "mapping file");
  }
};

struct EvalInputs {
  EmotionTaxonomy taxonomy;
  RealMatrix scores;
  BinaryMatrix gold;
  std::vector<std::string> langs;
  std::vector<std::string> notes;
};

EvalInputs load_eval_inputs(const GoldOptions& o) {
  o.validate();
  Corpus corpus;
  std::string default_tax = "emotion11";
  if (o.format == "goemotions") {
    corpus = adapt_goemotions(fs::path(o.gold));
    default_tax = "goemotions";
  } else if (o.format == "semeval") {
    corpus = adapt_semeval(fs::path(o.gold), o.lang);
    default_tax = "semeval";
  }
  const auto gold_tax = resolve_taxonomy(o.gold_taxonomy.empty() ? default_tax : o.gold_taxonomy);
  if (o.format == "jsonl") {
    corpus = read_corpus(fs::path(o.gold), gold_tax);
  } else if (!(corpus.taxonomy == gold_tax)) {
    fail(ErrorKind::kUsage, "--gold-taxonomy does not match the " + o.format + " layout");
  }
  const auto score_tax = resolve_taxonomy(o.score_taxonomy);

  EvalInputs in;
  if (!o.keep_empty_gold) {
    if (const auto dropped = drop_empty_gold(corpus)) {
      in.notes.push_back("dropped " + std::to_string(dropped) + " rows with empty native gold");
    }
  }
  const auto gold = binarize(corpus);
  const auto scores = align_scores(read_scores(fs::path(o.scores), score_tax), gold.ids);

  const auto kind = parse_view_kind(o.view);
  ViewResult view;
  if (kind == ViewKind::kIntersection) {
    view = apply_view(gold.values, gold_tax, scores.values, score_tax,
                      LabelSpaceView::intersection(score_tax, gold_tax));
    in.notes.push_back("view intersection: " + std::to_string(view.taxonomy.size()) + " shared labels, " +
                       std::to_string(gold.values.rows() - view.kept_rows.size()) +
                       " rows without a shared gold label dropped");
  } else {
    BinaryMatrix projected = gold.values;
    if (!(gold_tax == score_tax)) {
      std::string mapping_path = o.mapping;
      if (mapping_path.empty()) {
        const auto shipped = data_dir() / "mappings" / (gold_tax.name() + "_to_" + score_tax.name() + ".tsv");
        if (!fs::is_regular_file(shipped)) {
          fail(ErrorKind::kUsage, "no mapping from " + gold_tax.name() + " to " + score_tax.name() +
                                      "; pass --mapping");
        }
        mapping_path = shipped.string();
      }
      const auto mapping = load_mapping(mapping_path, gold_tax, score_tax);
      auto pg = project_gold(gold.values, mapping);
      projected = std::move(pg.values);
      in.notes.push_back("view projected via " + fs::path(mapping_path).filename().string());
      if (!pg.empty_rows.empty()) {
        in.notes.push_back(std::to_string(pg.empty_rows.size()) +
                           " rows have no gold label after projection (kept)");
      }
    } else {
      in.notes.push_back("view projected (identity)");
    }
    view = apply_view(projected, score_tax, scores.values, score_tax, LabelSpaceView::projected(score_tax));
  }
  in.taxonomy = view.taxonomy;
  in.scores = std::move(view.scores);
  in.gold = std::move(view.gold);
  for (const auto r : view.kept_rows) in.langs.push_back(corpus.samples[r].lang);
  return in;
}

// ---------------------------------------------------------------- commands

struct Globals {
  std::uint64_t seed = 0;
  int workers = 1;
  CLI::Option* seed_option = nullptr;
};

void setup_workers(const Globals& g) { kernels::set_num_threads(g.workers); }

void add_evaluate(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("evaluate", "Compute the full metric suite for a score file");
  auto opts = std::make_shared<GoldOptions>();
  auto rule = std::make_shared<std::string>("threshold@0.5");
  auto out = std::make_shared<std::string>();
  auto title = std::make_shared<std::string>();
  opts->add_to(cmd);
  cmd->add_option("--rule", *rule, "Decision rule: threshold[@tau] | argmax")->capture_default_str();
  cmd->add_option("--out", *out, "Output prefix; writes <prefix>.json and <prefix>.md (default: JSON to stdout)");
  cmd->add_option("--title", *title, "Markdown report title");
  cmd->callback([=, &g] {
    const auto r = DecisionRule::parse(*rule);
    setup_workers(g);
    const auto in = load_eval_inputs(*opts);
    auto report = metrics::evaluate_all(in.scores, in.gold, in.taxonomy.labels(), r, &in.langs);
    report.notes.insert(report.notes.begin(), in.notes.begin(), in.notes.end());
    if (r.kind() == DecisionRule::Kind::kArgmax) {
      report.notes.push_back("single-label rule: argmax predicts exactly one label per row");
    }
    if (out->empty()) {
      write_json("-", to_json(report));
    } else {
      write_json(*out + ".json", to_json(report));
      write_text(*out + ".md", to_markdown(report, *title));
    }
  });
}

void add_compare(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("compare", "Paired threshold vs argmax analysis on the same scores");
  auto opts = std::make_shared<GoldOptions>();
  auto tau = std::make_shared<double>(0.5);
  auto out = std::make_shared<std::string>();
  opts->add_to(cmd);
  cmd->add_option("--tau", *tau, "Threshold for the threshold rule")->capture_default_str();
  cmd->add_option("--out", *out, "Output JSON path (default stdout)");
  cmd->callback([=, &g] {
    setup_workers(g);
    const auto in = load_eval_inputs(*opts);
    const auto cmp = compare_rules(in.scores, in.gold, in.taxonomy.labels(), &in.langs, *tau);
    auto j = to_json(cmp);
    j["notes"] = in.notes;
    write_json(*out, j);
  });
}

void add_calibrate(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("calibrate", "Grid-search the global threshold on validation scores");
  auto opts = std::make_shared<GoldOptions>();
  auto grid = std::make_shared<std::string>("0.05:0.95:0.05");
  auto out = std::make_shared<std::string>();
  opts->add_to(cmd);
  cmd->add_option("--grid", *grid, "start:stop:step or a comma list")->capture_default_str();
  cmd->add_option("--out", *out, "Output JSON path (default stdout)");
  cmd->callback([=, &g] {
    const auto points = parse_grid(*grid);
    setup_workers(g);
    const auto in = load_eval_inputs(*opts);
    write_json(*out, to_json(calibrate_threshold(in.scores, in.gold, points)));
  });
}

void add_curves(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("curves", "Write the micro-averaged PR curve as CSV");
  auto opts = std::make_shared<GoldOptions>();
  auto out = std::make_shared<std::string>();
  opts->add_to(cmd);
  cmd->add_option("--out", *out, "Output CSV path (default stdout)");
  cmd->callback([=, &g] {
    setup_workers(g);
    const auto in = load_eval_inputs(*opts);
    std::ostringstream s;
    emit_curves(in.scores, in.gold, s);
    write_text(*out, s.str());
  });
}

struct FilterOptions {
  double min_ttr = 0.4;
  std::size_t min_tokens = 20;
  double dedup_threshold = 0.85;
  std::size_t shingle = 5;
  std::size_t bands = 32;
  std::size_t rows = 4;
  std::string dedup_scope = "lang";
  double min_aux_score = 0.5;

  void add_to(CLI::App* app) {
    app->add_option("--min-ttr", min_ttr, "Minimum type-token ratio")->capture_default_str();
    app->add_option("--min-tokens", min_tokens, "TTR applies only to texts with at least this many tokens")
        ->capture_default_str();
    app->add_option("--dedup-threshold", dedup_threshold, "Shingle Jaccard at or above which a text is a near duplicate")
        ->capture_default_str();
    app->add_option("--shingle", shingle, "Character shingle length")->capture_default_str();
    app->add_option("--bands", bands, "LSH bands")->capture_default_str();
    app->add_option("--rows", rows, "LSH rows per band")->capture_default_str();
    app->add_option("--dedup-scope", dedup_scope, "Compare within a language or across the corpus")
        ->check(CLI::IsMember({"lang", "global"}))
        ->capture_default_str();
    app->add_option("--min-aux-score", min_aux_score, "Minimum auxiliary score for every gold label")
        ->capture_default_str();
  }

  FilterConfig config(std::uint64_t seed) const {
    FilterConfig c;
    c.min_ttr = min_ttr;
    c.min_tokens = min_tokens;
    c.dedup.threshold = dedup_threshold;
    c.dedup.shingle_size = shingle;
    c.dedup.bands = bands;
    c.dedup.rows = rows;
    c.dedup.seed = derive_seed(seed, "dedup");
    c.dedup.validate();
    c.dedup_scope = dedup_scope == "global" ? DedupScope::kGlobal : DedupScope::kPerLanguage;
    c.min_aux_score = min_aux_score;
    return c;
  }
};

void add_generate(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("generate", "Generate a filtered synthetic corpus");
  struct Opts {
    std::string spec;
    std::size_t budget = 0;
    std::vector<std::string> languages;
    std::string prompts;
    std::string generator = "mock";
    std::string out;
    std::string audit;
    std::string romanization_scope;
    FilterOptions filters;
    bool filters_set = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--spec", o->spec, "Generation spec JSON (default: the 23-language reference plan)");
  cmd->add_option("--budget", o->budget, "Samples per language (overrides the spec)");
  cmd->add_option("--languages", o->languages, "Restrict to these language codes")->delimiter(',');
  cmd->add_option("--prompts", o->prompts, "Prompt template directory (default: shipped templates)");
  cmd->add_option("--generator", o->generator, "Text generator backend; http reads EMOTK_GENERATOR_URL")
      ->check(CLI::IsMember({"mock", "http"}))
      ->capture_default_str();
  cmd->add_option("--out", o->out, "Output corpus JSONL")->required();
  cmd->add_option("--audit", o->audit, "Filter audit log JSONL");
  cmd->add_option("--romanization-scope", o->romanization_scope, "per_language | corpus");
  o->filters.add_to(cmd);
  cmd->callback([=, &g] {
    const auto prompts_dir = o->prompts.empty() ? (data_dir() / "prompts").string() : o->prompts;
    require_dir(prompts_dir, "prompt directory");
    if (!o->spec.empty()) require_file(o->spec, "spec file");

    const auto& tax = taxonomies::emotion11();
    GenerationSpec spec = GenerationSpec::reference(tax, 50000, g.seed);
    if (!o->spec.empty()) {
      std::ifstream in(o->spec);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::kInvalidInput, o->spec + ": " + e.what());
      }
      spec = spec_from_json(j, tax);
    }
    // Flags win over the spec file.
    if (g.seed_option->count() > 0 || o->spec.empty()) spec.seed = g.seed;
    if (o->budget > 0) {
      for (auto& p : spec.languages) p.budget = o->budget;
    }
    if (!o->languages.empty()) {
      const std::set<std::string> keep(o->languages.begin(), o->languages.end());
      std::erase_if(spec.languages, [&](const LanguagePlan& p) { return !keep.contains(p.lang); });
      if (spec.languages.size() != keep.size()) fail(ErrorKind::kUsage, "--languages names an unknown language");
    }
    if (!o->romanization_scope.empty()) spec.romanization_scope = parse_romanization_scope(o->romanization_scope);
    spec.filters = o->filters.config(spec.seed);

    const auto prompts = PromptLibrary::load(prompts_dir);
    MockGenerator mock;
    std::unique_ptr<HttpGenerator> http;
    TextGenerator* gen = &mock;
    if (o->generator == "http") {
      http = std::make_unique<HttpGenerator>(HttpGenerator::from_env());
      gen = http.get();
    }
    const auto outcome = generate_batch(spec, prompts, *gen, nullptr, g.workers);
    write_corpus(fs::path(o->out), outcome.corpus);
    if (!o->audit.empty()) {
      auto out = open_out(o->audit);
      write_audit(out, outcome.audit);
    }
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const auto& s : outcome.languages) {
      summary.push_back({{"lang", s.lang}, {"accepted", s.accepted}, {"attempts", s.attempts},
                         {"latin", s.latin}, {"rejections", s.rejections}});
    }
    std::cout << summary.dump(2) << '\n';
  });
}

void add_filter(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("filter", "Apply quality filters to an existing corpus");
  struct Opts {
    std::string in, out, audit, aux_scores;
    FilterOptions filters;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Input corpus JSONL")->required();
  cmd->add_option("--out", o->out, "Kept samples JSONL")->required();
  cmd->add_option("--audit", o->audit, "Per-sample verdicts JSONL");
  cmd->add_option("--aux-scores", o->aux_scores,
                  "Auxiliary classifier scores per sample id (.csv/.jsonl) for label consistency");
  o->filters.add_to(cmd);
  cmd->callback([=, &g] {
    require_file(o->in, "input corpus");
    if (!o->aux_scores.empty()) require_file(o->aux_scores, "aux score file");
    const auto corpus = read_corpus(fs::path(o->in), taxonomies::emotion11());
    const auto config = o->filters.config(g.seed);
    std::unique_ptr<CallbackScorer> scorer;
    if (!o->aux_scores.empty()) {
      std::vector<std::string> ids;
      for (const auto& s : corpus.samples) ids.push_back(s.id);
      auto aligned = std::make_shared<ScoreMatrix>(
          align_scores(read_scores(fs::path(o->aux_scores), corpus.taxonomy), ids));
      auto row_of = std::make_shared<std::map<std::string, std::size_t>>();
      for (std::size_t i = 0; i < ids.size(); ++i) (*row_of)[ids[i]] = i;
      scorer = std::make_unique<CallbackScorer>([aligned, row_of](const Sample& s, const EmotionTaxonomy&) {
        const auto row = aligned->values.row(row_of->at(s.id));
        return std::vector<double>(row.begin(), row.end());
      });
    }
    const auto outcome = run_filters(corpus, config, scorer.get());
    write_corpus(fs::path(o->out), outcome.kept);
    if (!o->audit.empty()) {
      auto out = open_out(o->audit);
      write_audit(out, outcome.verdicts);
    }
    std::map<std::string, std::size_t> reasons;
    for (const auto& v : outcome.verdicts) {
      for (const auto& r : v.reasons) ++reasons[std::string(to_string(r.kind))];
    }
    nlohmann::ordered_json j;
    j["input"] = corpus.samples.size();
    j["kept"] = outcome.kept.samples.size();
    j["rejections"] = reasons;
    j["label_consistency"] = scorer ? "checked" : "skipped (no --aux-scores)";
    std::cout << j.dump(2) << '\n';
  });
}

void add_split(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("split", "Stratified train/validation/test split");
  struct Opts {
    std::string in, out_dir;
    std::size_t val = 500, test = 500, train = 0;
    std::string stratify = "lang";
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Input corpus JSONL")->required();
  cmd->add_option("--out-dir", o->out_dir, "Directory for train/validation/test.jsonl")->required();
  cmd->add_option("--val", o->val, "Validation rows per language")->capture_default_str();
  cmd->add_option("--test", o->test, "Test rows per language")->capture_default_str();
  cmd->add_option("--train", o->train, "Train rows per language (default: all remaining)");
  cmd->add_option("--stratify", o->stratify, "Stratification key")
      ->check(CLI::IsMember({"lang"}))
      ->capture_default_str();
  cmd->callback([=, &g] {
    require_file(o->in, "input corpus");
    const auto corpus = read_corpus(fs::path(o->in), taxonomies::emotion11());
    SplitSpec spec;
    spec.defaults.validation = o->val;
    spec.defaults.test = o->test;
    if (cmd->count("--train") > 0) spec.defaults.train = o->train;
    const auto r = stratified_split(corpus, spec, g.seed);
    const fs::path dir(o->out_dir);
    fs::create_directories(dir);
    write_corpus(dir / "train.jsonl", r.train);
    write_corpus(dir / "validation.jsonl", r.validation);
    write_corpus(dir / "test.jsonl", r.test);
    nlohmann::ordered_json j;
    j["train"] = r.train.samples.size();
    j["validation"] = r.validation.samples.size();
    j["test"] = r.test.samples.size();
    std::cout << j.dump(2) << '\n';
  });
}

void add_stats(CLI::App& app, const Globals&) {
  auto* cmd = app.add_subcommand("stats", "Corpus statistics with a class-distribution table");
  auto in = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto eligible = std::make_shared<std::vector<std::string>>();
  cmd->add_option("--in", *in, "Corpus JSONL")->required();
  cmd->add_option("--out", *out, "Output JSON path (default stdout)");
  cmd->add_option("--eligible", *eligible,
                  "Languages that get a romanized share (default: the romanization-eligible set)")
      ->delimiter(',');
  cmd->callback([=] {
    require_file(*in, "input corpus");
    const auto corpus = read_corpus(fs::path(*in), taxonomies::emotion11());
    std::set<std::string> langs(eligible->begin(), eligible->end());
    if (langs.empty()) {
      for (const auto& l : corpus_languages()) {
        if (l.romanization_eligible) langs.insert(std::string(l.code));
      }
    }
    auto j = to_json(corpus_stats(corpus, langs));
    j["reference_totals"] = to_json(reference_totals());
    write_json(*out, j);
  });
}

struct RunsOptions {
  std::string runs;
  std::string dataset = "synthetic";
  std::string label_space = "projected";
  std::string rule = "threshold@0.5";

  void add_to(CLI::App* app) {
    app->add_option("--runs", runs, "Model runs JSON")->required();
    app->add_option("--dataset", dataset, "Dataset key of the reports to use")->capture_default_str();
    app->add_option("--label-space", label_space, "Label-space key")->capture_default_str();
    app->add_option("--rule", rule, "Decision-rule key")->capture_default_str();
  }
  ReportKey key() const { return {dataset, label_space, rule}; }
  std::vector<ModelRunRecord> load() const {
    require_file(runs, "runs file");
    return load_runs(runs);
  }
};

void add_pareto(CLI::App& app, const Globals&) {
  auto* cmd = app.add_subcommand("pareto", "Cost/quality Pareto frontier over model runs");
  auto o = std::make_shared<RunsOptions>();
  auto cost = std::make_shared<std::string>("train_minutes");
  auto quality = std::make_shared<std::string>("jaccard");
  auto out = std::make_shared<std::string>();
  o->add_to(cmd);
  cmd->add_option("--cost", *cost, "Cost axis")
      ->check(CLI::IsMember({"train_minutes", "params"}))
      ->capture_default_str();
  cmd->add_option("--quality", *quality, "Quality axis")
      ->check(CLI::IsMember({"jaccard", "f1_micro"}))
      ->capture_default_str();
  cmd->add_option("--out", *out, "Output JSON path (default stdout)");
  cmd->callback([=] {
    const auto runs = o->load();
    auto points = pareto_points(runs, o->key(), *quality == "jaccard" ? ParetoQuality::kJaccard
                                                                       : ParetoQuality::kF1Micro);
    if (*cost == "params") {
      for (std::size_t i = 0; i < runs.size(); ++i) points[i].cost = runs[i].params;
    }
    auto j = to_json(pareto_frontier(points));
    j["cost"] = *cost;
    j["quality"] = *quality;
    write_json(*out, j);
  });
}

void add_table(CLI::App& app, const Globals&) {
  auto* cmd = app.add_subcommand("table", "Render a result table as Markdown and CSV");
  auto o = std::make_shared<RunsOptions>();
  auto layout = std::make_shared<std::string>("indomain");
  auto datasets = std::make_shared<std::vector<std::string>>();
  auto md = std::make_shared<std::string>();
  auto csv = std::make_shared<std::string>();
  auto leading_zero = std::make_shared<bool>(false);
  o->add_to(cmd);
  cmd->add_option("--layout", *layout, "Table layout")
      ->check(CLI::IsMember({"indomain", "cross", "headtohead"}))
      ->capture_default_str();
  cmd->add_option("--datasets", *datasets, "Dataset keys for the cross layout")->delimiter(',');
  cmd->add_option("--md", *md, "Markdown output (default stdout)");
  cmd->add_option("--csv", *csv, "CSV output");
  cmd->add_flag("--leading-zero", *leading_zero, "Print 0.868 instead of .868");
  cmd->callback([=] {
    const auto runs = o->load();
    std::vector<ReportKey> keys;
    if (*layout == "cross" && !datasets->empty()) {
      for (const auto& d : *datasets) keys.push_back({d, o->label_space, o->rule});
    } else {
      keys.push_back(o->key());
    }
    const auto t = render_table(runs, parse_layout(*layout), keys, {*leading_zero, 3});
    write_text(*md, t.markdown);
    if (!csv->empty()) write_text(*csv, t.csv);
  });
}

void add_langmatrix(CLI::App& app, const Globals&) {
  auto* cmd = app.add_subcommand("langmatrix", "Per-language F1 matrix, hardest language first");
  auto o = std::make_shared<RunsOptions>();
  auto out = std::make_shared<std::string>();
  o->add_to(cmd);
  cmd->add_option("--out", *out, "Output CSV path (default stdout)");
  cmd->callback([=] { write_text(*out, to_csv(per_language_matrix(o->load(), o->key()))); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emotk: multi-label emotion evaluation and synthetic corpus pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML or INI config file; command-line flags take precedence");
  Globals g;
  g.seed_option = app.add_option("--seed", g.seed, "Seed for every stochastic stage")
                      ->envname("EMOTK_SEED")
                      ->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")
      ->envname("EMOTK_WORKERS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  add_evaluate(app, g);
  add_compare(app, g);
  add_calibrate(app, g);
  add_curves(app, g);
  add_generate(app, g);
  add_filter(app, g);
  add_split(app, g);
  add_stats(app, g);
  add_pareto(app, g);
  add_table(app, g);
  add_langmatrix(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  } catch (const Error& e) {
    return report_error(to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return 0;
}
