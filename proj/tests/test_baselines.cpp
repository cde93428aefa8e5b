#include <cmath>

#include "doctest.h"
#include "semcad/baselines.hpp"

using namespace semcad;
using namespace semcad::trees;

namespace {

data::EncodedDataset random_dataset(std::size_t n, std::size_t f, std::uint64_t seed,
                                    bool label_from_first) {
  Rng rng(seed);
  data::EncodedDataset ds;
  for (std::size_t c = 0; c < f; ++c) {
    ds.feature_names.push_back("f" + std::to_string(c));
    ds.cardinalities.push_back(9);
  }
  ds.rows = n;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::int32_t> row(f);
    for (auto& v : row) v = static_cast<std::int32_t>(1 + rng.below(8));
    std::uint8_t y;
    if (label_from_first) {
      y = row[0] >= 5;
    } else {
      y = (row[0] + row[1] > 10) != rng.bernoulli(0.1);
    }
    ds.codes.insert(ds.codes.end(), row.begin(), row.end());
    ds.labels.push_back(y);
  }
  return ds;
}

// Independent traversal: ordinal split, `code <= threshold` goes left.
double traverse(const DecisionTree& t, std::span<const std::int32_t> row) {
  std::size_t i = 0;
  while (t.nodes[i].feature >= 0) {
    const auto& n = t.nodes[i];
    i = static_cast<std::size_t>(row[n.feature] <= n.threshold ? n.left : n.right);
  }
  return t.nodes[i].value;
}

double accuracy(const data::EncodedDataset& ds, auto predict) {
  std::size_t ok = 0;
  for (std::size_t r = 0; r < ds.rows; ++r) ok += (predict(ds.row(r)) >= 0.5) == (ds.labels[r] == 1);
  return static_cast<double>(ok) / static_cast<double>(ds.rows);
}

}  // namespace

TEST_CASE("a feature equal to the label is split perfectly") {
  auto ds = random_dataset(300, 3, 1, false);
  for (std::size_t r = 0; r < ds.rows; ++r) ds.codes[r * 3] = ds.labels[r] + 1;
  ForestConfig cfg;
  cfg.trees = 10;
  cfg.max_depth = 1;
  cfg.features_per_split = 3;
  const auto forest = rf_fit(ds, cfg);
  CHECK(accuracy(ds, [&](auto row) { return rf_predict(forest, row); }) == 1.0);
  for (const auto& t : forest.trees) CHECK(t.depth() <= 1);
}

TEST_CASE("forest prediction is the mean of tree outputs") {
  const auto ds = random_dataset(400, 4, 2, false);
  ForestConfig cfg;
  cfg.trees = 7;
  cfg.seed = 5;
  const auto forest = rf_fit(ds, cfg);
  REQUIRE(forest.trees.size() == 7);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::int32_t> row(4);
    for (auto& v : row) v = static_cast<std::int32_t>(rng.below(9));
    double mean = 0.0;
    for (const auto& t : forest.trees) mean += traverse(t, row);
    mean /= 7.0;
    CHECK(rf_predict(forest, row) == doctest::Approx(mean).epsilon(1e-15));
    CHECK(forest.trees[0].predict(row) == traverse(forest.trees[0], row));
  }
  for (const auto& t : forest.trees) {
    CHECK(t.depth() <= cfg.max_depth);
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        CHECK(n.value >= 0.0);
        CHECK(n.value <= 1.0);
      } else {
        CHECK(n.left > 0);
        CHECK(n.right > 0);
        CHECK(static_cast<std::size_t>(n.left) < t.nodes.size());
        CHECK(static_cast<std::size_t>(n.right) < t.nodes.size());
      }
    }
  }

  cfg.trees = 1;
  const auto single = rf_fit(ds, cfg);
  const std::vector<std::int32_t> row = {3, 4, 5, 6};
  CHECK(rf_predict(single, row) == traverse(single.trees[0], row));
}

TEST_CASE("forest fitting is deterministic and round-trips through JSON") {
  const auto ds = random_dataset(300, 4, 3, false);
  ForestConfig cfg;
  cfg.trees = 5;
  const auto a = rf_fit(ds, cfg);
  const auto b = rf_fit(ds, cfg);
  CHECK(a.to_json() == b.to_json());
  cfg.seed = 99;
  CHECK(rf_fit(ds, cfg).to_json() != a.to_json());
  CHECK(ForestModel::from_json(a.to_json()).to_json() == a.to_json());
}

TEST_CASE("unanimous trees and bad rows") {
  ForestModel m;
  m.n_features = 2;
  DecisionTree leaf;
  leaf.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 1.0});
  m.trees = {leaf, leaf, leaf};
  const std::vector<std::int32_t> row = {1, 2};
  CHECK(rf_predict(m, row) == 1.0);
  CHECK_THROWS_AS(rf_predict(m, std::span<const std::int32_t>{}), Error);
}

TEST_CASE("single-class data is rejected") {
  auto ds = random_dataset(50, 2, 4, true);
  for (auto& y : ds.labels) y = 0;
  CHECK_THROWS_AS(rf_fit(ds, ForestConfig{}), Error);
  CHECK_THROWS_AS(gbt_fit(ds, BoostConfig{}), Error);
}

TEST_CASE("boosting separates separable data") {
  const auto ds = random_dataset(400, 3, 6, true);
  BoostConfig cfg;
  cfg.rounds = 50;
  const auto m = gbt_fit(ds, cfg);
  CHECK(accuracy(ds, [&](auto row) { return gbt_predict(m, row); }) == 1.0);
  REQUIRE(m.loss_trace.size() == 51);
  for (std::size_t i = 1; i < m.loss_trace.size(); ++i) {
    CHECK(m.loss_trace[i] <= m.loss_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("boosting loss decreases on noisy data") {
  const auto ds = random_dataset(500, 4, 7, false);
  BoostConfig cfg;
  cfg.rounds = 30;
  const auto m = gbt_fit(ds, cfg);
  for (std::size_t i = 1; i < m.loss_trace.size(); ++i) {
    CHECK(m.loss_trace[i] <= m.loss_trace[i - 1] + 1e-12);
  }
  CHECK(BoostedModel::from_json(m.to_json()).to_json() == m.to_json());

  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::int32_t> row(4);
    for (auto& v : row) v = static_cast<std::int32_t>(rng.below(9));
    double sum = 0.0;
    for (const auto& t : m.trees) sum += traverse(t, row);
    const double margin = m.initial_log_odds + cfg.learning_rate * sum;
    CHECK(gbt_margin(m, row) == doctest::Approx(margin).epsilon(1e-12));
    CHECK(gbt_predict(m, row) == doctest::Approx(1.0 / (1.0 + std::exp(-margin))).epsilon(1e-12));
  }
}

TEST_CASE("zero learning rate and zero rounds predict the prevalence") {
  const auto ds = random_dataset(200, 3, 9, false);
  double prevalence = 0.0;
  for (auto y : ds.labels) prevalence += y;
  prevalence /= static_cast<double>(ds.rows);

  BoostConfig cfg;
  cfg.rounds = 0;
  const auto none = gbt_fit(ds, cfg);
  CHECK(none.trees.empty());
  const std::vector<std::int32_t> row = {1, 2, 3};
  CHECK(gbt_predict(none, row) == doctest::Approx(prevalence).epsilon(1e-12));

  cfg.rounds = 5;
  cfg.learning_rate = 0.0;
  const auto frozen = gbt_fit(ds, cfg);
  for (std::size_t r = 0; r < ds.rows; ++r) {
    CHECK(gbt_margin(frozen, ds.row(r)) == frozen.initial_log_odds);
  }
}

TEST_CASE("a larger leaf value never lowers the prediction") {
  const auto ds = random_dataset(200, 3, 10, false);
  BoostConfig cfg;
  cfg.rounds = 3;
  auto m = gbt_fit(ds, cfg);
  const std::vector<std::int32_t> row = {2, 6, 4};
  const double before = gbt_predict(m, row);
  for (auto& n : m.trees[1].nodes) {
    if (n.is_leaf()) n.value += 0.5;
  }
  CHECK(gbt_predict(m, row) >= before);
}
