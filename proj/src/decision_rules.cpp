#include "emotk/decision_rules.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "emotk/kernels.hpp"
#include "emotk/metrics.hpp"

namespace emotk {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::kUsage, "cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

double round10(double v) { return std::round(v * 1e10) / 1e10; }

}  // namespace

DecisionRule DecisionRule::threshold(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    fail(ErrorKind::kUsage, "threshold must lie in (0,1), got " + std::to_string(tau));
  }
  return DecisionRule(Kind::kThreshold, tau);
}

DecisionRule DecisionRule::argmax() { return DecisionRule(Kind::kArgmax, 0.0); }

DecisionRule DecisionRule::parse(std::string_view text) {
  if (text == "argmax") return argmax();
  if (text == "threshold") return threshold(0.5);
  constexpr std::string_view kPrefix = "threshold@";
  if (text.starts_with(kPrefix)) return threshold(parse_double(text.substr(kPrefix.size()), "tau"));
  fail(ErrorKind::kUsage, "unknown decision rule '" + std::string(text) + "'");
}

double DecisionRule::tau() const {
  if (kind_ != Kind::kThreshold) fail(ErrorKind::kUsage, "argmax rule has no threshold");
  return tau_;
}

std::string DecisionRule::describe() const {
  if (kind_ == Kind::kArgmax) return "argmax";
  char buf[48];
  std::snprintf(buf, sizeof buf, "threshold@%g", tau_);
  return buf;
}

BinaryMatrix decide(const RealMatrix& scores, const DecisionRule& rule) {
  return rule.kind() == DecisionRule::Kind::kArgmax ? kernels::argmax_decide(scores)
                                                    : kernels::threshold_decide(scores, rule.tau());
}

std::vector<double> parse_grid(std::string_view spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string_view::npos ? a : spec.find(':', a + 1);
  if (b == std::string_view::npos) {
    // comma-separated explicit list
    std::vector<double> grid;
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const auto tok = spec.substr(start, comma - start);
      grid.push_back(parse_double(tok, "grid value"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    for (const double g : grid) {
      if (!(g > 0.0 && g < 1.0)) fail(ErrorKind::kUsage, "grid values must lie in (0,1)");
    }
    return grid;
  }
  const double start = parse_double(spec.substr(0, a), "grid start");
  const double stop = parse_double(spec.substr(a + 1, b - a - 1), "grid stop");
  const double step = parse_double(spec.substr(b + 1), "grid step");
  if (!(step > 0.0) || stop < start) fail(ErrorKind::kUsage, "invalid grid '" + std::string(spec) + "'");
  if (!(start > 0.0 && stop < 1.0)) fail(ErrorKind::kUsage, "grid values must lie in (0,1)");
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long k = 0; k <= steps; ++k) grid.push_back(round10(start + static_cast<double>(k) * step));
  return grid;
}

std::vector<double> default_grid() { return parse_grid("0.05:0.95:0.05"); }

CalibrationResult calibrate_threshold(const RealMatrix& scores, const BinaryMatrix& gold,
                                      const std::vector<double>& grid) {
  if (grid.empty()) fail(ErrorKind::kUsage, "calibration grid is empty");
  bool any_positive = false;
  for (const auto v : gold.flat()) any_positive = any_positive || v != 0;
  if (!any_positive) fail(ErrorKind::kUndefinedMetric, "calibration gold has no positives");

  CalibrationResult out;
  bool have_best = false;
  for (const double tau : grid) {
    const auto pred = decide(scores, DecisionRule::threshold(tau));
    const double f1 = metrics::f1_micro(pred, gold);
    out.curve.emplace_back(tau, f1);
    bool better = !have_best || f1 > out.f1_micro_at_tau;
    if (have_best && f1 == out.f1_micro_at_tau) {
      const double d_new = std::abs(tau - 0.5);
      const double d_old = std::abs(out.tau - 0.5);
      better = d_new < d_old || (d_new == d_old && tau < out.tau);
    }
    if (better) {
      out.tau = tau;
      out.f1_micro_at_tau = f1;
      have_best = true;
    }
  }
  const auto at_best = decide(scores, DecisionRule::threshold(out.tau));
  const auto at_default = decide(scores, DecisionRule::threshold(0.5));
  out.f1_macro_at_tau = metrics::f1_macro(at_best, gold);
  out.f1_micro_at_default = metrics::f1_micro(at_default, gold);
  out.f1_macro_at_default = metrics::f1_macro(at_default, gold);
  return out;
}

RuleComparison compare_rules(const RealMatrix& scores, const BinaryMatrix& gold,
                             const std::vector<std::string>& labels,
                             const std::vector<std::string>* groups, double tau) {
  RuleComparison c;
  c.threshold = metrics::evaluate_all(scores, gold, labels, DecisionRule::threshold(tau), groups);
  c.argmax = metrics::evaluate_all(scores, gold, labels, DecisionRule::argmax(), groups);
  c.mean_gold_cardinality = c.threshold.mean_gold_cardinality;
  c.mean_cardinality_threshold = c.threshold.mean_predicted_cardinality;
  c.mean_cardinality_argmax = c.argmax.mean_predicted_cardinality;
  return c;
}

nlohmann::ordered_json to_json(const CalibrationResult& r) {
  nlohmann::ordered_json j;
  j["tau"] = r.tau;
  j["f1_micro_at_tau"] = r.f1_micro_at_tau;
  j["f1_micro_at_default"] = r.f1_micro_at_default;
  j["f1_micro_delta"] = r.f1_micro_at_tau - r.f1_micro_at_default;
  j["f1_macro_at_tau"] = r.f1_macro_at_tau;
  j["f1_macro_at_default"] = r.f1_macro_at_default;
  j["f1_macro_delta"] = r.f1_macro_at_tau - r.f1_macro_at_default;
  auto& curve = j["grid"] = nlohmann::ordered_json::array();
  for (const auto& [tau, f1] : r.curve) curve.push_back({{"tau", tau}, {"f1_micro", f1}});
  return j;
}

nlohmann::ordered_json to_json(const RuleComparison& c) {
  nlohmann::ordered_json j;
  j["mean_gold_cardinality"] = c.mean_gold_cardinality;
  j["mean_cardinality_threshold"] = c.mean_cardinality_threshold;
  j["mean_cardinality_argmax"] = c.mean_cardinality_argmax;
  j["f1_micro_delta_argmax_minus_threshold"] = c.argmax.f1_micro - c.threshold.f1_micro;
  j["threshold"] = to_json(c.threshold);
  j["argmax"] = to_json(c.argmax);
  return j;
}

}  // namespace emotk
