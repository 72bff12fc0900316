#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "ighsom/kernels.hpp"
#include "ighsom/matrix.hpp"

namespace ighsom {

struct UnitCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  auto operator<=>(const UnitCoord&) const = default;
};

/// Snapshot of one map unit.
struct Unit {
  UnitCoord coord;
  std::vector<double> weight;
  std::vector<std::size_t> mapped;  // global sample indices
  double qe = 0.0;                  // sum of distances from mapped samples to weight
};

/// Rectangular SOM. Units are stored row-major: index = row * cols + col.
class SomMap {
 public:
  SomMap() = default;
  SomMap(std::size_t rows, std::size_t cols, std::size_t dim);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t dim() const noexcept { return weights_.cols(); }
  std::size_t unit_count() const noexcept { return rows_ * cols_; }

  std::size_t index(UnitCoord c) const noexcept { return c.row * cols_ + c.col; }
  UnitCoord coord(std::size_t index) const noexcept { return {index / cols_, index % cols_}; }
  bool contains(UnitCoord c) const noexcept { return c.row < rows_ && c.col < cols_; }

  const Matrix& weights() const noexcept { return weights_; }
  Matrix& weights() noexcept { return weights_; }
  std::span<const double> weight(std::size_t u) const { return weights_.row(u); }

  const std::vector<std::size_t>& mapped(std::size_t u) const { return mapped_[u]; }
  double qe(std::size_t u) const { return qe_[u]; }
  const std::vector<double>& qes() const noexcept { return qe_; }

  Unit unit(UnitCoord c) const;

  /// Units with at least one mapped sample (the winner set), row-major.
  std::vector<std::size_t> winner_set() const;
  /// Mean of qe over the winner set; 0 when nothing is assigned.
  double mqe() const;
  double total_qe() const;
  std::size_t assigned_count() const;

  /// Replaces sample assignments and per-unit qe in one step.
  void set_assignment(std::vector<std::vector<std::size_t>> mapped, std::vector<double> qe);
  void clear_assignment();

  bool operator==(const SomMap&) const = default;

 private:
  friend SomMap insert_row_or_col(const SomMap&, const UnitCoord*);
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Matrix weights_;
  std::vector<std::vector<std::size_t>> mapped_;
  std::vector<double> qe_;
};

struct TrainConfig {
  std::size_t epochs = 100;
  double initial_learning_rate = 0.5;
  double initial_radius = 1.0;
  std::uint64_t rng_seed = 0;
  kernels::Execution execution = kernels::Execution::parallel;

  void validate() const;
};

inline constexpr double kFinalLearningRate = 0.01;
inline constexpr double kFinalRadius = 0.5;

/// Best-matching unit; ties resolve to the earliest unit in row-major order.
UnitCoord bmu(const SomMap& map, std::span<const double> x);

/// Fresh map whose weights are samples drawn (seeded) from `indices`; distinct while possible.
SomMap init_from_samples(std::size_t rows, std::size_t cols, const Matrix& data,
                         std::span<const std::size_t> indices, std::uint64_t seed);

/// Called after each epoch with the epoch number (0-based) and the current weights.
using EpochObserver = std::function<void(std::size_t, const SomMap&)>;

/// Online SOM training with a Gaussian neighbourhood. Learning rate and radius decay linearly
/// to 0.01 and 0.5 over the epochs; afterwards every sample is assigned to its BMU.
SomMap train(SomMap map, const Matrix& data, std::span<const std::size_t> indices, const TrainConfig& cfg,
             const EpochObserver& observer = {});

/// Assign each sample to its BMU and recompute every unit's qe.
void assign(SomMap& map, const Matrix& data, std::span<const std::size_t> indices,
            kernels::Execution ex = kernels::Execution::parallel);

/// Per-unit qe recomputed from scratch out of the current mapped lists.
std::vector<double> recompute_qe(const SomMap& map, const Matrix& data);

struct InsertionPlan {
  UnitCoord error_unit;
  UnitCoord neighbor;
  bool inserts_row = false;  // otherwise a column
  std::size_t position = 0;  // index the new row/column will occupy
};

/// Error unit = argmax qe (or `error_unit` when given); neighbour = most dissimilar 4-neighbour.
InsertionPlan plan_insertion(const SomMap& map, const UnitCoord* error_unit = nullptr);

/// Inserts a full row or column between the error unit and its most dissimilar neighbour.
/// New weights average the two flanking units; assignments are cleared pending retraining.
SomMap insert_row_or_col(const SomMap& map, const UnitCoord* error_unit = nullptr);

/// Deterministic seed stream helper (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Uniform integer in [0, n) by rejection; stable across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

}  // namespace ighsom
