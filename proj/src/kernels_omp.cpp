#include <cstdint>

#include "ighsom/kernels.hpp"

namespace ighsom::kernels::parallel {

Assignment assign_bmus(const Matrix& weights, const Matrix& data, std::span<const std::size_t> indices) {
  if (weights.empty()) throw ContractError("assign_bmus: no units");
  if (weights.cols() != data.cols()) throw ContractError("assign_bmus: dimension mismatch");
  Assignment a;
  a.unit.resize(indices.size());
  a.distance.resize(indices.size());
  const auto n = static_cast<std::int64_t>(indices.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto x = data.row(indices[static_cast<std::size_t>(k)]);
    const std::size_t u = nearest_row(weights, x);
    a.unit[static_cast<std::size_t>(k)] = u;
    a.distance[static_cast<std::size_t>(k)] = euclidean_distance(weights.row(u), x);
  }
  return a;
}

std::vector<double> distances_to(std::span<const double> point, const Matrix& data,
                                 std::span<const std::size_t> indices) {
  std::vector<double> out(indices.size());
  const auto n = static_cast<std::int64_t>(indices.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = euclidean_distance(point, data.row(indices[static_cast<std::size_t>(k)]));
  }
  return out;
}

std::vector<double> column_means(const Matrix& data, std::span<const std::size_t> indices) {
  // Columns are independent; each column is still accumulated in sample order.
  const std::size_t d = data.cols();
  std::vector<double> mean(d, 0.0);
  if (indices.empty()) return mean;
  const auto cols = static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t idx : indices) s += data(idx, static_cast<std::size_t>(j));
    mean[static_cast<std::size_t>(j)] = s / static_cast<double>(indices.size());
  }
  return mean;
}

}  // namespace ighsom::kernels::parallel
