#pragma once

#include <limits>
#include <string>
#include <vector>

#include "emotk/decision_rules.hpp"
#include "emotk/matrix.hpp"
#include "emotk/report.hpp"

namespace emotk::metrics {

// Threshold-based metrics over binary prediction/gold matrices of equal shape.
double subset_accuracy(const BinaryMatrix& pred, const BinaryMatrix& gold);
double hamming_accuracy(const BinaryMatrix& pred, const BinaryMatrix& gold);
/// Rows where both sets are empty contribute 1.0.
double jaccard_samples(const BinaryMatrix& pred, const BinaryMatrix& gold);
/// 2TP / (2TP + FP + FN) over pooled cells; 1.0 when there is nothing to
/// predict and nothing was predicted.
double f1_micro(const BinaryMatrix& pred, const BinaryMatrix& gold);
/// Mean per-label F1. Labels with no gold and no predicted positives are
/// left out of the mean; no gold but some predictions counts as F1 = 0.
double f1_macro(const BinaryMatrix& pred, const BinaryMatrix& gold);
std::vector<LabelPrf> per_label_prf(const BinaryMatrix& pred, const BinaryMatrix& gold,
                                    const std::vector<std::string>& labels);

// Threshold-free metrics over flattened (row, label) cells. All of them throw
// kUndefinedMetric when every cell is positive or every cell is negative.

/// Mann-Whitney formulation, ties count one half.
double auroc_micro(const RealMatrix& scores, const BinaryMatrix& gold);
/// Step-wise AP; equal scores form one threshold group.
double ap_micro(const RealMatrix& scores, const BinaryMatrix& gold);
/// Rows without a positive label are skipped; `excluded` receives their count.
double lrap(const RealMatrix& scores, const BinaryMatrix& gold, std::size_t* excluded = nullptr);

struct PrPoint {
  double recall;
  double precision;
  double threshold;  // +inf for the (0, 1) endpoint
};

/// One point per distinct score down to the first threshold reaching full
/// recall, ordered by ascending threshold, followed by the (recall 0,
/// precision 1) endpoint.
std::vector<PrPoint> pr_curve_micro(const RealMatrix& scores, const BinaryMatrix& gold);

/// Σ (R_k − R_{k−1}) · P_k along descending thresholds.
double pr_curve_area(const std::vector<PrPoint>& curve);

/// Full report. `groups`, when given, holds one language tag per row.
EvaluationReport evaluate_all(const RealMatrix& scores, const BinaryMatrix& gold,
                              const std::vector<std::string>& labels, const DecisionRule& rule,
                              const std::vector<std::string>* groups = nullptr);

/// Same as above on an already-decided prediction matrix.
EvaluationReport evaluate_predictions(const RealMatrix& scores, const BinaryMatrix& pred,
                                      const BinaryMatrix& gold,
                                      const std::vector<std::string>& labels,
                                      const std::string& rule_name,
                                      const std::vector<std::string>* groups = nullptr);

}  // namespace emotk::metrics
