#include "ighsom/matrix.hpp"

#include <cmath>

namespace ighsom {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw ContractError("row width " + std::to_string(values.size()) + " does not match matrix width " +
                        std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void FeatureVector::validate() const {
  if (values.size() != schema.size()) throw ContractError("feature vector length does not match its schema");
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractError("feature vector contains a non-finite value");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace ighsom
