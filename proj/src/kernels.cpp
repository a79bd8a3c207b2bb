#include "emotk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <omp.h>
#include <parallel/algorithm>

namespace emotk::kernels {

namespace {

int g_threads = 0;

int threads_for(std::size_t work) {
  // Tiny inputs are not worth a parallel region.
  if (work < 4096) return 1;
  return g_threads > 0 ? g_threads : omp_get_max_threads();
}

RowAgreement agree(std::span<const std::uint8_t> p, std::span<const std::uint8_t> g) {
  RowAgreement a;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const bool pc = p[c] != 0;
    const bool gc = g[c] != 0;
    a.intersection += pc && gc;
    a.union_size += pc || gc;
    a.mismatches += pc != gc;
    a.gold_count += gc;
    a.pred_count += pc;
  }
  return a;
}

// Sort-based: labels in descending score order, tie groups share the rank
// of the group's last member.
double ranking_precision(std::span<const double> s, std::span<const std::uint8_t> g,
                         std::vector<std::uint32_t>& order) {
  const auto n = s.size();
  order.resize(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return s[a] > s[b] || (s[a] == s[b] && a < b);
  });
  std::uint32_t positives = 0;
  for (const auto v : g) positives += v != 0;
  if (positives == 0) return std::numeric_limits<double>::quiet_NaN();

  double row_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin;
    std::size_t group_hits = 0;
    while (end < n && s[order[end]] == s[order[begin]]) {
      group_hits += g[order[end]] != 0;
      ++end;
    }
    hits += group_hits;
    // every positive in the group sees rank = end, hits = hits
    row_sum += static_cast<double>(group_hits) * (static_cast<double>(hits) / static_cast<double>(end));
    begin = end;
  }
  return row_sum / positives;
}

void check_shapes(const BinaryMatrix& a, const BinaryMatrix& b) {
  if (!a.same_shape(b)) fail(ErrorKind::kInvalidInput, "prediction and gold shapes differ");
}

void check_shapes(const RealMatrix& a, const BinaryMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::kInvalidInput, "score and gold shapes differ");
  }
}

bool descending(const std::span<const double> flat, std::uint32_t a, std::uint32_t b) {
  return flat[a] > flat[b] || (flat[a] == flat[b] && a < b);
}

void check_cell_count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::kInvalidInput, "too many cells for 32-bit cell indices");
  }
}

}  // namespace

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

void set_num_threads(int threads) { g_threads = std::max(0, threads); }
int num_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

std::vector<RowAgreement> row_agreement(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  check_shapes(pred, gold);
  const auto n = static_cast<std::int64_t>(pred.rows());
  std::vector<RowAgreement> out(pred.rows());
#pragma omp parallel for schedule(static) num_threads(threads_for(pred.size()))
  for (std::int64_t r = 0; r < n; ++r) {
    out[r] = agree(pred.row(r), gold.row(r));
  }
  return out;
}

std::vector<LabelCounts> label_counts(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  check_shapes(pred, gold);
  const auto cols = pred.cols();
  const auto n = static_cast<std::int64_t>(pred.rows());
  std::vector<LabelCounts> total(cols);
  // Integer counts: merge order cannot change the result.
#pragma omp parallel num_threads(threads_for(pred.size()))
  {
    std::vector<LabelCounts> local(cols);
#pragma omp for schedule(static) nowait
    for (std::int64_t r = 0; r < n; ++r) {
      const auto p = pred.row(r);
      const auto g = gold.row(r);
      auto* acc = local.data();
      for (std::size_t c = 0; c < cols; ++c) {
        const unsigned pc = p[c] != 0, gc = g[c] != 0;
        acc[c].tp += pc & gc;
        acc[c].fp += pc & (gc ^ 1u);
        acc[c].fn += (pc ^ 1u) & gc;
      }
    }
#pragma omp critical(emotk_label_counts)
    for (std::size_t c = 0; c < cols; ++c) {
      total[c].tp += local[c].tp;
      total[c].fp += local[c].fp;
      total[c].fn += local[c].fn;
    }
  }
  return total;
}

std::vector<double> row_ranking_precision(const RealMatrix& scores, const BinaryMatrix& gold) {
  check_shapes(scores, gold);
  const auto n = static_cast<std::int64_t>(scores.rows());
  std::vector<double> out(scores.rows());
#pragma omp parallel num_threads(threads_for(scores.size()))
  {
    std::vector<std::uint32_t> order;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      out[r] = ranking_precision(scores.row(r), gold.row(r), order);
    }
  }
  return out;
}

std::vector<std::uint32_t> cells_by_descending_score(const RealMatrix& scores) {
  check_cell_count(scores.size());
  const auto flat = scores.flat();
  std::vector<std::uint32_t> order(flat.size());
  std::iota(order.begin(), order.end(), 0u);
  // The comparator is a strict total order, so any correct sort yields the
  // same permutation.
  const auto cmp = [flat](std::uint32_t a, std::uint32_t b) { return descending(flat, a, b); };
  const int threads = threads_for(flat.size());
  if (threads > 1) {
    __gnu_parallel::sort(order.begin(), order.end(), cmp,
                         __gnu_parallel::multiway_mergesort_tag(threads));
  } else {
    std::sort(order.begin(), order.end(), cmp);
  }
  return order;
}

BinaryMatrix threshold_decide(const RealMatrix& scores, double tau) {
  BinaryMatrix out(scores.rows(), scores.cols(), 0);
  const auto in = scores.flat();
  auto dst = out.flat();
  const auto n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(in.size()))
  for (std::int64_t i = 0; i < n; ++i) dst[i] = in[i] >= tau ? 1 : 0;
  return out;
}

BinaryMatrix argmax_decide(const RealMatrix& scores) {
  BinaryMatrix out(scores.rows(), scores.cols(), 0);
  if (scores.cols() == 0) return out;
  const auto n = static_cast<std::int64_t>(scores.rows());
#pragma omp parallel for schedule(static) num_threads(threads_for(scores.size()))
  for (std::int64_t r = 0; r < n; ++r) {
    const auto row = scores.row(r);
    // max_element returns the first maximum: lowest column wins ties
    const auto best = std::max_element(row.begin(), row.end()) - row.begin();
    out(r, static_cast<std::size_t>(best)) = 1;
  }
  return out;
}

namespace serial {

std::vector<RowAgreement> row_agreement(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  check_shapes(pred, gold);
  std::vector<RowAgreement> out;
  out.reserve(pred.rows());
  for (std::size_t r = 0; r < pred.rows(); ++r) out.push_back(agree(pred.row(r), gold.row(r)));
  return out;
}

std::vector<LabelCounts> label_counts(const BinaryMatrix& pred, const BinaryMatrix& gold) {
  check_shapes(pred, gold);
  std::vector<LabelCounts> out(pred.cols());
  for (std::size_t r = 0; r < pred.rows(); ++r) {
    for (std::size_t c = 0; c < pred.cols(); ++c) {
      const bool p = pred(r, c) != 0;
      const bool g = gold(r, c) != 0;
      out[c].tp += p && g;
      out[c].fp += p && !g;
      out[c].fn += !p && g;
    }
  }
  return out;
}

std::vector<double> row_ranking_precision(const RealMatrix& scores, const BinaryMatrix& gold) {
  check_shapes(scores, gold);
  std::vector<double> out;
  out.reserve(scores.rows());
  std::vector<std::uint32_t> order;
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    out.push_back(ranking_precision(scores.row(r), gold.row(r), order));
  }
  return out;
}

std::vector<std::uint32_t> cells_by_descending_score(const RealMatrix& scores) {
  check_cell_count(scores.size());
  const auto flat = scores.flat();
  std::vector<std::uint32_t> order(flat.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [flat](std::uint32_t a, std::uint32_t b) { return descending(flat, a, b); });
  return order;
}

BinaryMatrix threshold_decide(const RealMatrix& scores, double tau) {
  BinaryMatrix out(scores.rows(), scores.cols(), 0);
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    for (std::size_t c = 0; c < scores.cols(); ++c) out(r, c) = scores(r, c) >= tau ? 1 : 0;
  }
  return out;
}

BinaryMatrix argmax_decide(const RealMatrix& scores) {
  BinaryMatrix out(scores.rows(), scores.cols(), 0);
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.cols(); ++c) {
      if (scores(r, c) > scores(r, best)) best = c;
    }
    if (scores.cols() > 0) out(r, best) = 1;
  }
  return out;
}

}  // namespace serial

}  // namespace emotk::kernels
