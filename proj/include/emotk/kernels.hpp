#pragma once

// Data-parallel inner loops behind the metrics. Every kernel has an OpenMP
// implementation (namespace kernels) and a plain serial reference
// (namespace kernels::serial). Both produce bit-identical results: parallel
// regions only fill per-row or per-thread integer slots, and every floating
// point reduction runs sequentially in row order afterwards.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "emotk/matrix.hpp"

namespace emotk::kernels {

struct LabelCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

/// Per-row agreement summary for two binary matrices of equal shape.
struct RowAgreement {
  std::uint32_t intersection = 0;  // |pred ∩ gold|
  std::uint32_t union_size = 0;    // |pred ∪ gold|
  std::uint32_t mismatches = 0;    // cells where pred != gold
  std::uint32_t gold_count = 0;
  std::uint32_t pred_count = 0;

  friend bool operator==(const RowAgreement&, const RowAgreement&) = default;
};

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

/// Threads used by the parallel kernels; 0 means the OpenMP default.
void set_num_threads(int threads);
int num_threads();

std::vector<RowAgreement> row_agreement(const BinaryMatrix& pred, const BinaryMatrix& gold);
std::vector<LabelCounts> label_counts(const BinaryMatrix& pred, const BinaryMatrix& gold);

/// Per-row label-ranking precision; rows with no positive gold label get NaN.
std::vector<double> row_ranking_precision(const RealMatrix& scores, const BinaryMatrix& gold);

/// Flattened cell indices sorted by descending score, ascending index.
std::vector<std::uint32_t> cells_by_descending_score(const RealMatrix& scores);

BinaryMatrix threshold_decide(const RealMatrix& scores, double tau);
BinaryMatrix argmax_decide(const RealMatrix& scores);

namespace serial {

std::vector<RowAgreement> row_agreement(const BinaryMatrix& pred, const BinaryMatrix& gold);
std::vector<LabelCounts> label_counts(const BinaryMatrix& pred, const BinaryMatrix& gold);
std::vector<double> row_ranking_precision(const RealMatrix& scores, const BinaryMatrix& gold);
std::vector<std::uint32_t> cells_by_descending_score(const RealMatrix& scores);
BinaryMatrix threshold_decide(const RealMatrix& scores, double tau);
BinaryMatrix argmax_decide(const RealMatrix& scores);

}  // namespace serial

}  // namespace emotk::kernels
