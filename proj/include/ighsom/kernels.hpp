#pragma once

// Data-parallel inner loops. Each kernel exists twice: `serial` is the reference
// implementation used by tests, `parallel` distributes samples over OpenMP threads.
// Both produce bit-identical results: per-sample work is independent and every
// reduction is finished serially in sample order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ighsom/matrix.hpp"

namespace ighsom::kernels {

/// Index of the row of `weights` nearest to `x`; ties go to the lowest index.
std::size_t nearest_row(const Matrix& weights, std::span<const double> x);

struct Assignment {
  std::vector<std::size_t> unit;  // winning unit per sample, aligned with the index list
  std::vector<double> distance;   // Euclidean distance to that unit
};

enum class Execution { serial, parallel };

namespace serial {

Assignment assign_bmus(const Matrix& weights, const Matrix& data, std::span<const std::size_t> indices);
std::vector<double> distances_to(std::span<const double> point, const Matrix& data,
                                 std::span<const std::size_t> indices);
std::vector<double> column_means(const Matrix& data, std::span<const std::size_t> indices);

template <typename Fn>
auto map_records(std::size_t n, Fn&& fn) {
  std::vector<decltype(fn(std::size_t{}))> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

}  // namespace serial

namespace parallel {

Assignment assign_bmus(const Matrix& weights, const Matrix& data, std::span<const std::size_t> indices);
std::vector<double> distances_to(std::span<const double> point, const Matrix& data,
                                 std::span<const std::size_t> indices);
std::vector<double> column_means(const Matrix& data, std::span<const std::size_t> indices);

template <typename Fn>
auto map_records(std::size_t n, Fn&& fn) {
  std::vector<decltype(fn(std::size_t{}))> out(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  return out;
}

}  // namespace parallel

inline Assignment assign_bmus(Execution ex, const Matrix& weights, const Matrix& data,
                              std::span<const std::size_t> indices) {
  return ex == Execution::parallel ? parallel::assign_bmus(weights, data, indices)
                                   : serial::assign_bmus(weights, data, indices);
}

inline std::vector<double> distances_to(Execution ex, std::span<const double> point, const Matrix& data,
                                        std::span<const std::size_t> indices) {
  return ex == Execution::parallel ? parallel::distances_to(point, data, indices)
                                   : serial::distances_to(point, data, indices);
}

inline std::vector<double> column_means(Execution ex, const Matrix& data, std::span<const std::size_t> indices) {
  return ex == Execution::parallel ? parallel::column_means(data, indices) : serial::column_means(data, indices);
}

/// In-order sum; the only reduction the kernels use, so serial and parallel agree.
double ordered_sum(std::span<const double> values);

}  // namespace ighsom::kernels
