#include <cmath>

#include "ighsom/kernels.hpp"

namespace ighsom::kernels {

std::size_t nearest_row(const Matrix& weights, std::span<const double> x) {
  if (weights.empty()) throw ContractError("nearest_row: no units");
  if (weights.cols() != x.size()) {
    throw ContractError("dimension mismatch: unit width " + std::to_string(weights.cols()) + ", sample width " +
                        std::to_string(x.size()));
  }
  std::size_t best = 0;
  double best_d = squared_distance(weights.row(0), x);
  for (std::size_t u = 1; u < weights.rows(); ++u) {
    const double d = squared_distance(weights.row(u), x);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

double ordered_sum(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

namespace serial {

Assignment assign_bmus(const Matrix& weights, const Matrix& data, std::span<const std::size_t> indices) {
  Assignment a;
  a.unit.resize(indices.size());
  a.distance.resize(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto x = data.row(indices[k]);
    const std::size_t u = nearest_row(weights, x);
    a.unit[k] = u;
    a.distance[k] = euclidean_distance(weights.row(u), x);
  }
  return a;
}

std::vector<double> distances_to(std::span<const double> point, const Matrix& data,
                                 std::span<const std::size_t> indices) {
  std::vector<double> out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) out[k] = euclidean_distance(point, data.row(indices[k]));
  return out;
}

std::vector<double> column_means(const Matrix& data, std::span<const std::size_t> indices) {
  std::vector<double> mean(data.cols(), 0.0);
  if (indices.empty()) return mean;
  for (std::size_t idx : indices) {
    const auto r = data.row(idx);
    for (std::size_t j = 0; j < r.size(); ++j) mean[j] += r[j];
  }
  for (double& m : mean) m /= static_cast<double>(indices.size());
  return mean;
}

}  // namespace serial
}  // namespace ighsom::kernels
