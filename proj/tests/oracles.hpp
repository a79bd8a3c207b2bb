#pragma once

// Naive reference implementations used only by the tests. Each is written
// straight from the metric definition, without sharing code or ordering
// tricks with the library, so agreement is meaningful.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "emotk/matrix.hpp"

namespace oracle {

using emotk::BinaryMatrix;
using emotk::RealMatrix;

inline double subset_accuracy(const BinaryMatrix& p, const BinaryMatrix& g) {
  int exact = 0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    bool same = true;
    for (std::size_t j = 0; j < g.cols(); ++j) same = same && p(i, j) == g(i, j);
    exact += same;
  }
  return static_cast<double>(exact) / static_cast<double>(g.rows());
}

inline double hamming_accuracy(const BinaryMatrix& p, const BinaryMatrix& g) {
  int wrong = 0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) wrong += p(i, j) != g(i, j);
  return 1.0 - static_cast<double>(wrong) / static_cast<double>(g.rows() * g.cols());
}

inline double jaccard_samples(const BinaryMatrix& p, const BinaryMatrix& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    std::set<std::size_t> a, b, u;
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (p(i, j)) a.insert(j);
      if (g(i, j)) b.insert(j);
    }
    u = a;
    u.insert(b.begin(), b.end());
    std::size_t inter = 0;
    for (auto x : a) inter += b.count(x);
    total += u.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(u.size());
  }
  return total / static_cast<double>(g.rows());
}

struct Confusion {
  long tp = 0, fp = 0, fn = 0;
};

inline Confusion confusion(const BinaryMatrix& p, const BinaryMatrix& g, long col = -1) {
  Confusion c;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (col >= 0 && static_cast<long>(j) != col) continue;
      if (p(i, j) && g(i, j)) ++c.tp;
      if (p(i, j) && !g(i, j)) ++c.fp;
      if (!p(i, j) && g(i, j)) ++c.fn;
    }
  return c;
}

inline double f1_micro(const BinaryMatrix& p, const BinaryMatrix& g) {
  const auto c = confusion(p, g);
  if (c.tp + c.fp + c.fn == 0) return 1.0;
  const double prec = c.tp + c.fp == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fp);
  const double rec = c.tp + c.fn == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fn);
  return prec + rec == 0.0 ? 0.0 : 2 * prec * rec / (prec + rec);
}

// Labels with no gold and no predicted positives are left out.
inline double f1_macro(const BinaryMatrix& p, const BinaryMatrix& g) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t j = 0; j < g.cols(); ++j) {
    const auto c = confusion(p, g, static_cast<long>(j));
    if (c.tp + c.fp + c.fn == 0) continue;
    const double prec = c.tp + c.fp == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fp);
    const double rec = c.tp + c.fn == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fn);
    sum += prec + rec == 0.0 ? 0.0 : 2 * prec * rec / (prec + rec);
    ++n;
  }
  return n == 0 ? 1.0 : sum / n;
}

// Every positive/negative cell pair, ties count one half.
inline double auroc(const RealMatrix& s, const BinaryMatrix& g) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    if (!g.flat()[a]) continue;
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (g.flat()[b]) continue;
      pairs += 1.0;
      const double x = s.flat()[a], y = s.flat()[b];
      wins += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

// Steps at every distinct score: precision and recall of "score >= t".
inline double average_precision(const RealMatrix& s, const BinaryMatrix& g) {
  std::set<double, std::greater<>> thresholds(s.flat().begin(), s.flat().end());
  long positives = 0;
  for (auto v : g.flat()) positives += v;
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    long tp = 0, pred = 0;
    for (std::size_t c = 0; c < s.size(); ++c) {
      if (s.flat()[c] >= t) {
        ++pred;
        tp += g.flat()[c];
      }
    }
    const double recall = double(tp) / double(positives);
    ap += (recall - prev_recall) * (double(tp) / double(pred));
    prev_recall = recall;
  }
  return ap;
}

// Rows with no positive label are skipped.
inline double lrap(const RealMatrix& s, const BinaryMatrix& g) {
  double total = 0.0;
  int rows = 0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    double row = 0.0;
    int positives = 0;
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (!g(i, j)) continue;
      ++positives;
      int rank = 0, hits = 0;
      for (std::size_t k = 0; k < g.cols(); ++k) {
        if (s(i, k) >= s(i, j)) {
          ++rank;
          hits += g(i, k);
        }
      }
      row += double(hits) / double(rank);
    }
    if (positives == 0) continue;
    total += row / positives;
    ++rows;
  }
  return total / rows;
}

struct Instance {
  RealMatrix scores;
  BinaryMatrix gold;
  BinaryMatrix pred;
};

/// Random instance with N <= 50, L <= 11. Scores are drawn from a small grid
/// so ties are frequent. At least one positive and one negative cell.
inline Instance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = 1 + rng() % 50;
  const auto l = 2 + rng() % 10;
  const auto levels = 2 + rng() % 20;
  Instance x{RealMatrix(n, l), BinaryMatrix(n, l), BinaryMatrix(n, l)};
  std::bernoulli_distribution coin(0.3);
  for (std::size_t c = 0; c < n * l; ++c) {
    x.gold.flat()[c] = coin(rng);
    x.scores.flat()[c] = static_cast<double>(rng() % (levels + 1)) / static_cast<double>(levels);
    x.pred.flat()[c] = coin(rng);
  }
  x.gold.flat()[0] = 1;
  x.gold.flat()[n * l - 1] = 0;
  return x;
}

}  // namespace oracle
