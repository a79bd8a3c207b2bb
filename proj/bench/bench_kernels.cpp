// Serial reference kernels against their OpenMP counterparts.
//   emotk_bench --benchmark_filter=ranking

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <string_view>

#include "emotk/dedup.hpp"
#include "emotk/kernels.hpp"

using namespace emotk;

namespace {

constexpr std::size_t kLabels = 11;

struct Fixture {
  RealMatrix scores;
  BinaryMatrix gold;
  BinaryMatrix pred;
};

const Fixture& fixture(std::size_t rows) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(rows);
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(rows);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Fixture f{RealMatrix(rows, kLabels), BinaryMatrix(rows, kLabels), BinaryMatrix(rows, kLabels)};
  for (std::size_t c = 0; c < rows * kLabels; ++c) {
    f.scores.flat()[c] = u(rng);
    f.gold.flat()[c] = u(rng) < 0.15;
    f.pred.flat()[c] = f.scores.flat()[c] >= 0.5;
  }
  return cache.emplace(rows, std::move(f)).first->second;
}

const std::vector<std::string>& documents() {
  static const auto docs = [] {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> letter(0, 25), len(3, 9);
    std::vector<std::string> out(5000);
    for (auto& d : out) {
      for (int w = 0; w < 60; ++w) {
        const int n = len(rng);
        for (int i = 0; i < n; ++i) d += static_cast<char>('a' + letter(rng));
        d += ' ';
      }
    }
    return out;
  }();
  return docs;
}

template <auto Fn>
void run_binary(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.pred, f.gold));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void run_scores(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.scores, f.gold));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void run_sort(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.scores));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void run_sketch(benchmark::State& state) {
  std::vector<std::string_view> views(documents().begin(), documents().end());
  const dedup::Params params;
  for (auto _ : state) benchmark::DoNotOptimize(Fn(views, params));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(views.size()));
}

}  // namespace

#define ROWS ->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)

BENCHMARK(run_binary<kernels::serial::row_agreement>)->Name("row_agreement/serial") ROWS;
BENCHMARK(run_binary<kernels::row_agreement>)->Name("row_agreement/parallel") ROWS;
BENCHMARK(run_binary<kernels::serial::label_counts>)->Name("label_counts/serial") ROWS;
BENCHMARK(run_binary<kernels::label_counts>)->Name("label_counts/parallel") ROWS;
BENCHMARK(run_scores<kernels::serial::row_ranking_precision>)->Name("ranking/serial") ROWS;
BENCHMARK(run_scores<kernels::row_ranking_precision>)->Name("ranking/parallel") ROWS;
BENCHMARK(run_sort<kernels::serial::cells_by_descending_score>)->Name("cell_sort/serial") ROWS;
BENCHMARK(run_sort<kernels::cells_by_descending_score>)->Name("cell_sort/parallel") ROWS;
BENCHMARK(run_sketch<dedup::serial::sketch_all>)->Name("sketch_all/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(run_sketch<dedup::sketch_all>)->Name("sketch_all/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
