/*
 * Copyright 2026 The SEMC-AD Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Tree-ensemble baselines trained directly on label-encoded columns: a
// Gini random forest and second-order gradient boosting with logistic loss.
// Integer codes are split ordinally (`code <= threshold` goes left).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "semcad/data_model.hpp"

namespace semcad::trees {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf probability (forest) or leaf weight (boosting)

  bool is_leaf() const noexcept { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const std::int32_t> row) const;
  int depth() const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);
};

struct ForestConfig {
  int trees = 200;
  int max_depth = 12;
  int min_samples_leaf = 5;
  int features_per_split = 0;  // 0 selects ceil(sqrt(F))
  double anomaly_weight = 1.0;
  bool bootstrap = true;
  std::uint64_t seed = 42;

  nlohmann::json to_json() const;
  static ForestConfig from_json(const nlohmann::json& j);
};

struct ForestModel {
  static constexpr int kFormatVersion = 1;

  std::vector<DecisionTree> trees;
  ForestConfig config;
  std::size_t n_features = 0;

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);
};

ForestModel rf_fit(const data::EncodedDataset& ds, const ForestConfig& config);
double rf_predict(const ForestModel& model, std::span<const std::int32_t> row);

struct BoostConfig {
  int rounds = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  double lambda = 1.0;
  int min_samples_leaf = 1;

  nlohmann::json to_json() const;
  static BoostConfig from_json(const nlohmann::json& j);
};

struct BoostedModel {
  static constexpr int kFormatVersion = 1;

  double initial_log_odds = 0.0;
  std::vector<DecisionTree> trees;
  BoostConfig config;
  std::size_t n_features = 0;
  // Mean training logistic loss before the first round and after each round.
  std::vector<double> loss_trace;

  nlohmann::json to_json() const;
  static BoostedModel from_json(const nlohmann::json& j);
};

BoostedModel gbt_fit(const data::EncodedDataset& ds, const BoostConfig& config);
// initial + learning_rate * sum of tree outputs
double gbt_margin(const BoostedModel& model, std::span<const std::int32_t> row);
double gbt_predict(const BoostedModel& model, std::span<const std::int32_t> row);

}  // namespace semcad::trees
