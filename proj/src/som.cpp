#include "ighsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ighsom/errors.hpp"

namespace ighsom {

SomMap::SomMap(std::size_t rows, std::size_t cols, std::size_t dim)
    : rows_(rows), cols_(cols), weights_(rows * cols, dim), mapped_(rows * cols), qe_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw ContractError("map needs at least one row and one column");
}

Unit SomMap::unit(UnitCoord c) const {
  if (!contains(c)) throw ContractError("unit coordinate outside the map");
  const auto u = index(c);
  auto w = weights_.row(u);
  return {c, {w.begin(), w.end()}, mapped_[u], qe_[u]};
}

std::vector<std::size_t> SomMap::winner_set() const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < unit_count(); ++u) {
    if (!mapped_[u].empty()) out.push_back(u);
  }
  return out;
}

double SomMap::mqe() const {
  const auto winners = winner_set();
  if (winners.empty()) return 0.0;
  double s = 0.0;
  for (auto u : winners) s += qe_[u];
  return s / static_cast<double>(winners.size());
}

double SomMap::total_qe() const { return kernels::ordered_sum(qe_); }

std::size_t SomMap::assigned_count() const {
  std::size_t n = 0;
  for (const auto& m : mapped_) n += m.size();
  return n;
}

void SomMap::set_assignment(std::vector<std::vector<std::size_t>> mapped, std::vector<double> qe) {
  if (mapped.size() != unit_count() || qe.size() != unit_count()) {
    throw ContractError("assignment size does not match unit count");
  }
  mapped_ = std::move(mapped);
  qe_ = std::move(qe);
}

void SomMap::clear_assignment() {
  mapped_.assign(unit_count(), {});
  qe_.assign(unit_count(), 0.0);
}

void TrainConfig::validate() const {
  if (epochs == 0) throw ContractError("training needs at least one epoch");
  if (!(initial_learning_rate > 0.0 && initial_learning_rate <= 1.0)) {
    throw ContractError("initial learning rate must lie in (0, 1]");
  }
  if (!(initial_radius >= kFinalRadius)) throw ContractError("initial radius must be >= 0.5");
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + b * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw ContractError("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

UnitCoord bmu(const SomMap& map, std::span<const double> x) {
  return map.coord(kernels::nearest_row(map.weights(), x));
}

SomMap init_from_samples(std::size_t rows, std::size_t cols, const Matrix& data,
                         std::span<const std::size_t> indices, std::uint64_t seed) {
  if (indices.empty()) throw ContractError("cannot initialise a map from an empty sample set");
  SomMap map(rows, cols, data.cols());
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(indices.begin(), indices.end());
  std::size_t remaining = pool.size();
  for (std::size_t u = 0; u < map.unit_count(); ++u) {
    if (remaining == 0) remaining = pool.size();
    // Partial Fisher-Yates: draw without replacement until the pool is exhausted.
    const auto pick = static_cast<std::size_t>(uniform_below(rng, remaining));
    std::swap(pool[pick], pool[remaining - 1]);
    const auto src = data.row(pool[remaining - 1]);
    --remaining;
    std::copy(src.begin(), src.end(), map.weights().row(u).begin());
  }
  return map;
}

void assign(SomMap& map, const Matrix& data, std::span<const std::size_t> indices, kernels::Execution ex) {
  const auto a = kernels::assign_bmus(ex, map.weights(), data, indices);
  std::vector<std::vector<std::size_t>> mapped(map.unit_count());
  std::vector<double> qe(map.unit_count(), 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    mapped[a.unit[k]].push_back(indices[k]);
    qe[a.unit[k]] += a.distance[k];
  }
  map.set_assignment(std::move(mapped), std::move(qe));
}

std::vector<double> recompute_qe(const SomMap& map, const Matrix& data) {
  std::vector<double> qe(map.unit_count(), 0.0);
  for (std::size_t u = 0; u < map.unit_count(); ++u) {
    for (auto idx : map.mapped(u)) qe[u] += euclidean_distance(map.weight(u), data.row(idx));
  }
  return qe;
}

SomMap train(SomMap map, const Matrix& data, std::span<const std::size_t> indices, const TrainConfig& cfg,
             const EpochObserver& observer) {
  cfg.validate();
  if (indices.empty()) throw ContractError("train: empty data");
  if (map.dim() != data.cols()) throw ContractError("train: map and data dimensions differ");

  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<std::size_t> order(indices.begin(), indices.end());
  const std::size_t units = map.unit_count();
  const std::size_t dim = map.dim();
  std::vector<double> grid_r(units), grid_c(units);
  for (std::size_t u = 0; u < units; ++u) {
    grid_r[u] = static_cast<double>(map.coord(u).row);
    grid_c[u] = static_cast<double>(map.coord(u).col);
  }
  Matrix& w = map.weights();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double frac =
        cfg.epochs > 1 ? static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1) : 0.0;
    const double lr = cfg.initial_learning_rate + (kFinalLearningRate - cfg.initial_learning_rate) * frac;
    const double radius = cfg.initial_radius + (kFinalRadius - cfg.initial_radius) * frac;
    const double inv_two_r2 = 1.0 / (2.0 * radius * radius);

    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_below(rng, i))]);
    }
    for (std::size_t idx : order) {
      const auto x = data.row(idx);
      const std::size_t win = kernels::nearest_row(w, x);
      for (std::size_t u = 0; u < units; ++u) {
        const double dr = grid_r[u] - grid_r[win];
        const double dc = grid_c[u] - grid_c[win];
        const double h = std::exp(-(dr * dr + dc * dc) * inv_two_r2);
        const double step = lr * h;
        auto wu = w.row(u);
        for (std::size_t j = 0; j < dim; ++j) wu[j] += step * (x[j] - wu[j]);
      }
    }
    if (observer) observer(epoch, map);
  }
  assign(map, data, indices, cfg.execution);
  return map;
}

InsertionPlan plan_insertion(const SomMap& map, const UnitCoord* error_unit) {
  if (map.assigned_count() == 0) throw ContractError("insert_row_or_col: map has no assigned samples");
  if (map.unit_count() < 2) throw ContractError("insert_row_or_col: a 1x1 map has no neighbour");
  InsertionPlan plan;
  if (error_unit) {
    if (!map.contains(*error_unit)) throw ContractError("insert_row_or_col: error unit outside the map");
    plan.error_unit = *error_unit;
  } else {
    std::size_t e = 0;
    for (std::size_t u = 1; u < map.unit_count(); ++u) {
      if (map.qe(u) > map.qe(e)) e = u;
    }
    plan.error_unit = map.coord(e);
  }
  const auto [r, c] = plan.error_unit;
  const auto e_w = map.weight(map.index(plan.error_unit));

  // Candidate neighbours in row-major order so ties resolve to the earliest.
  std::vector<UnitCoord> neighbours;
  if (r > 0) neighbours.push_back({r - 1, c});
  if (c > 0) neighbours.push_back({r, c - 1});
  if (c + 1 < map.cols()) neighbours.push_back({r, c + 1});
  if (r + 1 < map.rows()) neighbours.push_back({r + 1, c});
  double best = -1.0;
  for (const auto& nb : neighbours) {
    const double d = squared_distance(e_w, map.weight(map.index(nb)));
    if (d > best) {
      best = d;
      plan.neighbor = nb;
    }
  }
  plan.inserts_row = plan.neighbor.col == c;
  plan.position = plan.inserts_row ? std::max(r, plan.neighbor.row) : std::max(c, plan.neighbor.col);
  return plan;
}

SomMap insert_row_or_col(const SomMap& map, const UnitCoord* error_unit) {
  const auto plan = plan_insertion(map, error_unit);
  const std::size_t rows = map.rows() + (plan.inserts_row ? 1 : 0);
  const std::size_t cols = map.cols() + (plan.inserts_row ? 0 : 1);
  SomMap out(rows, cols, map.dim());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      auto dst = out.weights_.row(out.index({r, c}));
      const std::size_t k = plan.inserts_row ? r : c;
      auto src_at = [&](std::size_t kk) {
        return plan.inserts_row ? map.weight(map.index({kk, c})) : map.weight(map.index({r, kk}));
      };
      if (k < plan.position) {
        auto s = src_at(k);
        std::copy(s.begin(), s.end(), dst.begin());
      } else if (k > plan.position) {
        auto s = src_at(k - 1);
        std::copy(s.begin(), s.end(), dst.begin());
      } else {
        auto a = src_at(plan.position - 1);
        auto b = src_at(plan.position);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = 0.5 * (a[j] + b[j]);
      }
    }
  }
  return out;
}

}  // namespace ighsom
