// Serial reference vs OpenMP kernels. Results are bit-identical; only the timing differs.
//
//   ./build/bench/bench_kernels --benchmark_filter=assign

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "ighsom/hierarchy.hpp"
#include "ighsom/kernels.hpp"

using namespace ighsom;
using kernels::Execution;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

// Gaussian blobs around a few centers, so the hierarchy has structure to find.
Matrix clustered(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  auto m = random_matrix(rows, cols, seed);
  for (std::size_t i = 0; i < rows; ++i) m(i, i % cols) += 6.0 * static_cast<double>(i % 4);
  return m;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

void BM_AssignBmus(benchmark::State& state, Execution ex) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = random_matrix(n, 6, 1);
  const auto weights = random_matrix(100, 6, 2);
  const auto idx = all_rows(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::assign_bmus(ex, weights, data, idx));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_DistancesTo(benchmark::State& state, Execution ex) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = random_matrix(n, 6, 3);
  const std::vector<double> point(6, 0.25);
  const auto idx = all_rows(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::distances_to(ex, point, data, idx));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_ColumnMeans(benchmark::State& state, Execution ex) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = random_matrix(n, 6, 4);
  const auto idx = all_rows(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::column_means(ex, data, idx));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_Grow(benchmark::State& state, Execution ex) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = clustered(n, 6, 5);
  GrowthParams p;
  p.execution = ex;
  p.lambda = 20;
  for (auto _ : state) benchmark::DoNotOptimize(grow(data, p, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK_CAPTURE(BM_AssignBmus, serial, Execution::serial)->RangeMultiplier(8)->Range(512, 32768);
BENCHMARK_CAPTURE(BM_AssignBmus, parallel, Execution::parallel)->RangeMultiplier(8)->Range(512, 32768);
BENCHMARK_CAPTURE(BM_DistancesTo, serial, Execution::serial)->RangeMultiplier(8)->Range(512, 32768);
BENCHMARK_CAPTURE(BM_DistancesTo, parallel, Execution::parallel)->RangeMultiplier(8)->Range(512, 32768);
BENCHMARK_CAPTURE(BM_ColumnMeans, serial, Execution::serial)->RangeMultiplier(8)->Range(512, 32768);
BENCHMARK_CAPTURE(BM_ColumnMeans, parallel, Execution::parallel)->RangeMultiplier(8)->Range(512, 32768);
BENCHMARK_CAPTURE(BM_Grow, serial, Execution::serial)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Grow, parallel, Execution::parallel)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
