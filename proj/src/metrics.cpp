#include "emotk/metrics.hpp"

#include <cmath>
#include <map>

#include "emotk/kernels.hpp"

namespace emotk::metrics {

namespace {

void require_same_shape(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  if (!pred.same_shape(gold)) {
    fail(ErrorKind::kInvalidInput, "shape mismatch: pred " + std::to_string(pred.rows()) + "x" +
                                       std::to_string(pred.cols()) + ", gold " +
                                       std::to_string(gold.rows()) + "x" + std::to_string(gold.cols()));
  }
}

void require_same_shape(const RealMatrix& scores, const BinaryMatrix& gold) {
  if (scores.rows() != gold.rows() || scores.cols() != gold.cols()) {
    fail(ErrorKind::kInvalidInput, "shape mismatch between scores and gold");
  }
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

double pooled_f1(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  const auto den = 2 * tp + fp + fn;
  return den == 0 ? 1.0 : ratio(2 * tp, den);
}

struct CellTotals {
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
};

CellTotals count_cells(const BinaryMatrix& gold) {
  CellTotals t;
  for (const auto v : gold.flat()) (v ? t.positives : t.negatives) += 1;
  if (t.positives == 0 || t.negatives == 0) {
    fail(ErrorKind::kUndefinedMetric,
         "threshold-free metric undefined: need at least one positive and one negative cell");
  }
  return t;
}

// Walks the cells in descending score order, one callback per tie group
// with (group score, positives in group, group size).
template <typename Fn>
void for_each_score_group(const RealMatrix& scores, const BinaryMatrix& gold, Fn&& fn) {
  const auto order = kernels::cells_by_descending_score(scores);
  const auto s = scores.flat();
  const auto g = gold.flat();
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin;
    std::uint64_t pos = 0;
    const double v = s[order[begin]];
    while (end < order.size() && s[order[end]] == v) {
      pos += g[order[end]] != 0;
      ++end;
    }
    if (!fn(v, pos, static_cast<std::uint64_t>(end - begin))) return;
    begin = end;
  }
}

}  // namespace

double subset_accuracy(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  require_same_shape(pred, gold);
  if (pred.rows() == 0) fail(ErrorKind::kUndefinedMetric, "no rows");
  const auto rows = kernels::row_agreement(pred, gold);
  std::uint64_t exact = 0;
  for (const auto& r : rows) exact += r.mismatches == 0;
  return ratio(exact, rows.size());
}

double hamming_accuracy(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  require_same_shape(pred, gold);
  if (pred.size() == 0) fail(ErrorKind::kUndefinedMetric, "no cells");
  const auto rows = kernels::row_agreement(pred, gold);
  std::uint64_t wrong = 0;
  for (const auto& r : rows) wrong += r.mismatches;
  return 1.0 - ratio(wrong, pred.size());
}

double jaccard_samples(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  require_same_shape(pred, gold);
  if (pred.rows() == 0) fail(ErrorKind::kUndefinedMetric, "no rows");
  const auto rows = kernels::row_agreement(pred, gold);
  std::vector<double> per_row;
  per_row.reserve(rows.size());
  for (const auto& r : rows) {
    per_row.push_back(r.union_size == 0 ? 1.0 : ratio(r.intersection, r.union_size));
  }
  return kernels::compensated_sum(per_row) / static_cast<double>(rows.size());
}

double f1_micro(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  require_same_shape(pred, gold);
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (const auto& c : kernels::label_counts(pred, gold)) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  return pooled_f1(tp, fp, fn);
}

std::vector<LabelPrf> per_label_prf(const BinaryMatrix& pred, const BinaryMatrix& gold,
                                    const std::vector<std::string>& labels) {
  require_same_shape(pred, gold);
  if (labels.size() != pred.cols()) {
    fail(ErrorKind::kInvalidInput, "label name count does not match column count");
  }
  const auto counts = kernels::label_counts(pred, gold);
  std::vector<LabelPrf> out;
  out.reserve(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const auto& c = counts[j];
    LabelPrf p;
    p.label = labels[j];
    p.support = c.tp + c.fn;
    p.predicted = c.tp + c.fp;
    p.precision = p.predicted == 0 ? 0.0 : ratio(c.tp, p.predicted);
    p.recall = p.support == 0 ? 0.0 : ratio(c.tp, p.support);
    p.in_macro = !(p.support == 0 && p.predicted == 0);
    p.f1 = p.in_macro ? ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn) : 0.0;
    out.push_back(std::move(p));
  }
  return out;
}

double f1_macro(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  std::vector<std::string> names(pred.cols());
  const auto per_label = per_label_prf(pred, gold, names);
  std::vector<double> f1s;
  for (const auto& p : per_label) {
    if (p.in_macro) f1s.push_back(p.f1);
  }
  if (f1s.empty()) return 1.0;
  return kernels::compensated_sum(f1s) / static_cast<double>(f1s.size());
}

double auroc_micro(const RealMatrix& scores, const BinaryMatrix& gold) {
  require_same_shape(scores, gold);
  const auto totals = count_cells(gold);
  // 2U accumulated exactly: each positive beats every negative scored below
  // its group and ties with the negatives inside it.
  unsigned __int128 twice_u = 0;
  std::uint64_t negatives_seen = 0;
  for_each_score_group(scores, gold, [&](double, std::uint64_t pos, std::uint64_t size) {
    const auto neg = size - pos;
    negatives_seen += neg;
    const auto below = totals.negatives - negatives_seen;
    twice_u += static_cast<unsigned __int128>(pos) * (2 * below + neg);
    return true;
  });
  const long double pairs = static_cast<long double>(totals.positives) *
                            static_cast<long double>(totals.negatives);
  return static_cast<double>(static_cast<long double>(twice_u) / (2.0L * pairs));
}

double ap_micro(const RealMatrix& scores, const BinaryMatrix& gold) {
  require_same_shape(scores, gold);
  const auto totals = count_cells(gold);
  // Extended-precision Neumaier sum, divided once at the end, so small
  // rational cases such as 5/6 come out correctly rounded.
  long double sum = 0.0L, carry = 0.0L;
  std::uint64_t seen = 0, hits = 0;
  for_each_score_group(scores, gold, [&](double, std::uint64_t pos, std::uint64_t size) {
    seen += size;
    hits += pos;
    if (pos > 0) {
      const long double term = static_cast<long double>(pos) * static_cast<long double>(hits) /
                               static_cast<long double>(seen);
      const long double t = sum + term;
      carry += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
    return hits < totals.positives;
  });
  return static_cast<double>((sum + carry) / static_cast<long double>(totals.positives));
}

double lrap(const RealMatrix& scores, const BinaryMatrix& gold, std::size_t* excluded) {
  require_same_shape(scores, gold);
  const auto per_row = kernels::row_ranking_precision(scores, gold);
  std::vector<double> kept;
  kept.reserve(per_row.size());
  for (const double v : per_row) {
    if (!std::isnan(v)) kept.push_back(v);
  }
  if (excluded != nullptr) *excluded = per_row.size() - kept.size();
  if (kept.empty()) fail(ErrorKind::kUndefinedMetric, "LRAP undefined: no row has a positive label");
  return kernels::compensated_sum(kept) / static_cast<double>(kept.size());
}

std::vector<PrPoint> pr_curve_micro(const RealMatrix& scores, const BinaryMatrix& gold) {
  require_same_shape(scores, gold);
  const auto totals = count_cells(gold);
  std::vector<PrPoint> descending;
  std::uint64_t seen = 0, hits = 0;
  for_each_score_group(scores, gold, [&](double v, std::uint64_t pos, std::uint64_t size) {
    seen += size;
    hits += pos;
    descending.push_back({ratio(hits, totals.positives), ratio(hits, seen), v});
    return hits < totals.positives;
  });
  std::vector<PrPoint> curve(descending.rbegin(), descending.rend());
  curve.push_back({0.0, 1.0, std::numeric_limits<double>::infinity()});
  return curve;
}

double pr_curve_area(const std::vector<PrPoint>& curve) {
  std::vector<double> terms;
  double prev_recall = 0.0;
  // The curve is stored ascending by threshold; integrate from the top.
  for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
    if (std::isinf(it->threshold)) continue;
    terms.push_back((it->recall - prev_recall) * it->precision);
    prev_recall = it->recall;
  }
  return kernels::compensated_sum(terms);
}

EvaluationReport evaluate_predictions(const RealMatrix& scores, const BinaryMatrix& pred,
                                      const BinaryMatrix& gold,
                                      const std::vector<std::string>& labels,
                                      const std::string& rule_name,
                                      const std::vector<std::string>* groups) {
  require_same_shape(pred, gold);
  require_same_shape(scores, gold);
  if (groups != nullptr && groups->size() != gold.rows()) {
    fail(ErrorKind::kInvalidInput, "group tags do not match row count");
  }
  EvaluationReport r;
  r.decision_rule = rule_name;
  r.n_rows = gold.rows();
  r.n_labels = gold.cols();

  r.subset_accuracy = subset_accuracy(pred, gold);
  r.hamming_accuracy = hamming_accuracy(pred, gold);
  r.jaccard_samples = jaccard_samples(pred, gold);
  r.per_label = per_label_prf(pred, gold, labels);
  std::uint64_t tp = 0, fp = 0, fn = 0;
  std::vector<double> macro_terms;
  for (const auto& p : r.per_label) {
    if (p.in_macro) macro_terms.push_back(p.f1);
  }
  for (const auto& c : kernels::label_counts(pred, gold)) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  r.f1_micro = pooled_f1(tp, fp, fn);
  r.f1_macro = macro_terms.empty()
                   ? 1.0
                   : kernels::compensated_sum(macro_terms) / static_cast<double>(macro_terms.size());

  r.auc_micro = auroc_micro(scores, gold);
  r.ap_micro = ap_micro(scores, gold);
  r.lrap = lrap(scores, gold, &r.lrap_rows_excluded);

  const auto rows = kernels::row_agreement(pred, gold);
  std::uint64_t gold_cells = 0, pred_cells = 0;
  for (const auto& a : rows) {
    gold_cells += a.gold_count;
    pred_cells += a.pred_count;
  }
  r.mean_gold_cardinality = ratio(gold_cells, rows.size());
  r.mean_predicted_cardinality = ratio(pred_cells, rows.size());

  if (groups != nullptr) {
    struct Pooled {
      std::uint64_t tp = 0, fp = 0, fn = 0;
    };
    std::map<std::string, Pooled> pooled;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto& p = pooled[(*groups)[i]];
      p.tp += rows[i].intersection;
      p.fp += rows[i].pred_count - rows[i].intersection;
      p.fn += rows[i].gold_count - rows[i].intersection;
    }
    for (const auto& [lang, p] : pooled) r.per_language[lang] = pooled_f1(p.tp, p.fp, p.fn);
  }
  if (r.lrap_rows_excluded > 0) {
    r.notes.push_back("lrap: " + std::to_string(r.lrap_rows_excluded) +
                      " rows without a positive label excluded");
  }
  return r;
}

EvaluationReport evaluate_all(const RealMatrix& scores, const BinaryMatrix& gold,
                              const std::vector<std::string>& labels, const DecisionRule& rule,
                              const std::vector<std::string>* groups) {
  const auto pred = decide(scores, rule);
  return evaluate_predictions(scores, pred, gold, labels, rule.describe(), groups);
}

}  // namespace emotk::metrics
