#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "ighsom/som.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace ighsom;

namespace {

std::vector<std::size_t> all_indices(const Matrix& m) {
  std::vector<std::size_t> idx(m.rows());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

SomMap with_weights(std::size_t rows, std::size_t cols, const std::vector<std::vector<double>>& w) {
  SomMap m(rows, cols, w.front().size());
  m.weights() = Matrix::from_rows(w);
  return m;
}

}  // namespace

TEST_SUITE("som") {
  TEST_CASE("bmu: exact hit, nearest, row-major tie, dimension mismatch") {
    const auto m = with_weights(1, 2, {{0, 0}, {3, 0}});
    CHECK(bmu(m, std::vector<double>{3, 0}) == UnitCoord{0, 1});
    CHECK(bmu(m, std::vector<double>{1, 0}) == UnitCoord{0, 0});
    CHECK(bmu(m, std::vector<double>{1.5, 0}) == UnitCoord{0, 0});
    CHECK_THROWS_AS(bmu(m, std::vector<double>{1}), ContractError);
    const auto grid = with_weights(2, 2, {{1, 1}, {0, 0}, {0, 0}, {5, 5}});
    CHECK(bmu(grid, std::vector<double>{0, 0}) == UnitCoord{0, 1});
  }

  TEST_CASE("map construction and config validation") {
    CHECK_THROWS_AS(SomMap(0, 2, 2), ContractError);
    TrainConfig c;
    CHECK_NOTHROW(c.validate());
    c.epochs = 0;
    CHECK_THROWS_AS(c.validate(), ContractError);
    c = {};
    c.initial_learning_rate = 1.5;
    CHECK_THROWS_AS(c.validate(), ContractError);
    c = {};
    c.initial_radius = 0.4;
    CHECK_THROWS_AS(c.validate(), ContractError);
  }

  TEST_CASE("one sample on a 1x1 map: qe decreases every epoch") {
    const auto data = Matrix::from_rows({{3.0, -1.0}});
    const std::vector<std::size_t> idx = {0};
    auto m = with_weights(1, 1, {{0.0, 0.0}});
    TrainConfig cfg;
    cfg.epochs = 30;
    std::vector<double> dist;
    m = train(std::move(m), data, idx, cfg, [&](std::size_t, const SomMap& cur) {
      dist.push_back(euclidean_distance(cur.weight(0), data.row(0)));
    });
    REQUIRE(dist.size() == 30);
    for (std::size_t e = 1; e < dist.size(); ++e) CHECK(dist[e] < dist[e - 1]);
    CHECK(m.qe(0) == doctest::Approx(dist.back()));
    CHECK(m.mapped(0) == idx);
  }

  TEST_CASE("identical samples: winner qe goes to zero") {
    const auto data = Matrix::from_rows(std::vector<std::vector<double>>(20, {1.5, 2.5, -3.0}));
    const auto idx = all_indices(data);
    auto m = init_from_samples(2, 2, data, idx, 1);
    m = train(std::move(m), data, idx, {});
    for (auto u : m.winner_set()) CHECK(m.qe(u) <= 1e-6);
  }

  TEST_CASE("four separated clusters on a 2x2 map: one cluster per unit, below the one-unit baseline") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      const auto g = testing::four_gaussians(40, seed, 0.4);
      const auto idx = all_indices(g.data);
      TrainConfig cfg;
      cfg.rng_seed = seed;
      auto m = train(init_from_samples(2, 2, g.data, idx, seed), g.data, idx, cfg);
      std::set<std::string> seen;
      for (std::size_t u = 0; u < 4; ++u) {
        std::set<std::string> labels;
        for (auto s : m.mapped(u)) labels.insert(g.labels[s]);
        INFO("seed " << seed << " unit " << u);
        CHECK(labels.size() == 1);
        seen.insert(labels.begin(), labels.end());
      }
      CHECK(seen.size() == 4);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < g.data.rows(); ++i) rows.emplace_back(g.data.row(i).begin(), g.data.row(i).end());
      CHECK(m.total_qe() < oracle::mean_vector_qe(rows));
    }
  }

  TEST_CASE("partition, qe recomputation and reproducibility after training") {
    const auto g = testing::blobs({{0, 0, 0}, {4, 1, 0}, {1, 5, 2}}, 30, 1.0, 17);
    const auto idx = all_indices(g.data);
    TrainConfig cfg;
    cfg.rng_seed = 99;
    cfg.epochs = 40;
    const auto a = train(init_from_samples(3, 2, g.data, idx, 5), g.data, idx, cfg);
    const auto b = train(init_from_samples(3, 2, g.data, idx, 5), g.data, idx, cfg);
    CHECK(a == b);
    CHECK(a.assigned_count() == g.data.rows());
    std::vector<std::size_t> seen;
    for (std::size_t u = 0; u < a.unit_count(); ++u) seen.insert(seen.end(), a.mapped(u).begin(), a.mapped(u).end());
    std::sort(seen.begin(), seen.end());
    CHECK(seen == idx);
    const auto fresh = recompute_qe(a, g.data);
    for (std::size_t u = 0; u < a.unit_count(); ++u) {
      CHECK(std::abs(fresh[u] - a.qe(u)) <= 1e-9);
      if (a.mapped(u).empty()) CHECK(a.qe(u) == 0.0);
    }
    double mean = 0;
    for (auto u : a.winner_set()) mean += a.qe(u);
    CHECK(a.mqe() == doctest::Approx(mean / static_cast<double>(a.winner_set().size())));

    cfg.execution = kernels::Execution::serial;
    const auto c = train(init_from_samples(3, 2, g.data, idx, 5), g.data, idx, cfg);
    CHECK(c == a);
  }

  TEST_CASE("empty data is a contract error") {
    const auto data = Matrix::from_rows({{1.0}});
    CHECK_THROWS_AS(train(SomMap(1, 1, 1), data, std::vector<std::size_t>{}, {}), ContractError);
    CHECK_THROWS_AS(init_from_samples(2, 2, data, std::vector<std::size_t>{}, 0), ContractError);
  }

  TEST_CASE("initialisation draws distinct samples while possible") {
    const auto data = Matrix::from_rows({{0}, {1}, {2}, {3}, {4}, {5}});
    const auto idx = all_indices(data);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto m = init_from_samples(2, 3, data, idx, seed);
      std::set<double> w;
      for (std::size_t u = 0; u < 6; ++u) w.insert(m.weight(u)[0]);
      CHECK(w.size() == 6);
    }
    const auto few = init_from_samples(2, 2, data, std::vector<std::size_t>{4}, 1);
    for (std::size_t u = 0; u < 4; ++u) CHECK(few.weight(u)[0] == 4.0);
  }
}

TEST_SUITE("insertion") {
  SomMap assigned_map(const std::vector<std::vector<double>>& w, std::size_t rows, std::size_t cols,
                      std::vector<double> qe) {
    auto m = with_weights(rows, cols, w);
    std::vector<std::vector<std::size_t>> mapped(rows * cols);
    for (std::size_t u = 0; u < rows * cols; ++u) mapped[u] = {u};
    m.set_assignment(std::move(mapped), std::move(qe));
    return m;
  }

  TEST_CASE("column inserted between the error unit and its most dissimilar neighbour") {
    // Error unit (0,0); (0,1) is far, (1,0) close.
    const auto m = assigned_map({{0, 0}, {10, 0}, {0, 1}, {10, 1}}, 2, 2, {5, 1, 1, 1});
    const auto plan = plan_insertion(m);
    CHECK(plan.error_unit == UnitCoord{0, 0});
    CHECK(plan.neighbor == UnitCoord{0, 1});
    CHECK_FALSE(plan.inserts_row);
    const auto out = insert_row_or_col(m);
    REQUIRE(out.rows() == 2);
    REQUIRE(out.cols() == 3);
    CHECK(out.weight(out.index({0, 1}))[0] == 5.0);
    CHECK(out.weight(out.index({1, 1}))[1] == 1.0);
    CHECK(out.weight(out.index({0, 2}))[0] == 10.0);
    CHECK(out.weight(out.index({1, 0}))[0] == 0.0);
    CHECK(out.assigned_count() == 0);
  }

  TEST_CASE("row inserted when the vertical neighbour is more dissimilar") {
    const auto m = assigned_map({{0, 0}, {1, 0}, {0, 8}, {1, 8}}, 2, 2, {1, 1, 1, 4});
    const auto plan = plan_insertion(m);
    CHECK(plan.error_unit == UnitCoord{1, 1});
    CHECK(plan.neighbor == UnitCoord{0, 1});
    CHECK(plan.inserts_row);
    const auto out = insert_row_or_col(m);
    CHECK(out.rows() == 3);
    CHECK(out.cols() == 2);
    CHECK(out.weight(out.index({1, 0}))[1] == 4.0);
  }

  TEST_CASE("uniform qe picks (0,0) by the tie rule; exactly one side grows") {
    const auto m = assigned_map({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 2, 2, {2, 2, 2, 2});
    CHECK(plan_insertion(m).error_unit == UnitCoord{0, 0});
    const auto out = insert_row_or_col(m);
    CHECK(out.unit_count() == 6);
    CHECK((out.rows() == 3) != (out.cols() == 3));
  }

  TEST_CASE("preconditions") {
    SomMap blank(2, 2, 2);
    CHECK_THROWS_AS(insert_row_or_col(blank), ContractError);
    const auto one = assigned_map({{0, 0}}, 1, 1, {1});
    CHECK_THROWS_AS(insert_row_or_col(one), ContractError);
    const auto m = assigned_map({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 2, 2, {1, 1, 1, 1});
    const UnitCoord outside{5, 5};
    CHECK_THROWS_AS(insert_row_or_col(m, &outside), ContractError);
  }

  TEST_CASE("MQE does not increase after an insert-and-retrain cycle on the acceptance data") {
    const auto g = testing::four_gaussians(50, 11);
    const auto idx = all_indices(g.data);
    TrainConfig cfg;
    cfg.rng_seed = 3;
    auto m = train(init_from_samples(2, 2, g.data, idx, 3), g.data, idx, cfg);
    for (int step = 0; step < 4; ++step) {
      const double before = m.mqe();
      cfg.rng_seed += 1;
      cfg.initial_radius = std::max(1.0, static_cast<double>(std::max(m.rows(), m.cols())) / 2.0);
      m = train(insert_row_or_col(m), g.data, idx, cfg);
      INFO("step " << step);
      CHECK(m.mqe() <= before);
    }
  }

  TEST_CASE("seed helpers are deterministic and spread") {
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    std::mt19937_64 rng(5);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[uniform_below(rng, 7)];
    for (int h : hits) CHECK(h > 800);
    CHECK_THROWS_AS(uniform_below(rng, 0), ContractError);
  }
}
