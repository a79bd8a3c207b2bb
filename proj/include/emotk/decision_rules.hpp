#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "emotk/matrix.hpp"
#include "emotk/report.hpp"

namespace emotk {

class DecisionRule {
 public:
  enum class Kind { kThreshold, kArgmax };

  /// score >= tau predicts positive; 0 < tau < 1.
  static DecisionRule threshold(double tau = 0.5);
  /// Exactly one positive per row; lowest column wins ties.
  static DecisionRule argmax();
  /// "threshold", "threshold@0.45", "argmax".
  static DecisionRule parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double tau() const;
  std::string describe() const;

 private:
  DecisionRule(Kind kind, double tau) : kind_(kind), tau_(tau) {}
  Kind kind_;
  double tau_;
};

BinaryMatrix decide(const RealMatrix& scores, const DecisionRule& rule);

/// Inclusive grid `start:stop:step`, rounded to 10 decimals per point.
std::vector<double> parse_grid(std::string_view spec);
std::vector<double> default_grid();

struct CalibrationResult {
  double tau = 0.5;
  double f1_micro_at_tau = 0.0;
  double f1_micro_at_default = 0.0;  // at tau = 0.5
  double f1_macro_at_tau = 0.0;
  double f1_macro_at_default = 0.0;
  std::vector<std::pair<double, double>> curve;  // (tau, F1-micro) per grid point
};

/// Grid search maximizing F1-micro. Ties go to the value nearest 0.5, then
/// to the lower value.
CalibrationResult calibrate_threshold(const RealMatrix& scores, const BinaryMatrix& gold,
                                      const std::vector<double>& grid);

struct RuleComparison {
  EvaluationReport threshold;
  EvaluationReport argmax;
  double mean_gold_cardinality = 0.0;
  double mean_cardinality_threshold = 0.0;
  double mean_cardinality_argmax = 0.0;
};

RuleComparison compare_rules(const RealMatrix& scores, const BinaryMatrix& gold,
                             const std::vector<std::string>& labels,
                             const std::vector<std::string>* groups = nullptr, double tau = 0.5);

nlohmann::ordered_json to_json(const CalibrationResult& result);
nlohmann::ordered_json to_json(const RuleComparison& comparison);

}  // namespace emotk
