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

#include "semcad/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "semcad/embedding_net.hpp"

namespace semcad::trees {
namespace {

constexpr const char* kStage = "baseline";

void check_row(std::size_t n_features, std::span<const std::int32_t> row) {
  if (row.size() != n_features) {
    throw Error(kStage, "row has " + std::to_string(row.size()) + " features, model expects " +
                            std::to_string(n_features));
  }
}

void require_both_classes(const data::EncodedDataset& ds) {
  const auto positives = std::count(ds.labels.begin(), ds.labels.end(), 1);
  if (ds.rows == 0 || positives == 0 || positives == static_cast<long>(ds.rows)) {
    throw Error(kStage, "training data must contain both labels");
  }
}

// Split statistics for Gini classification trees.
struct GiniPolicy {
  struct Stats {
    double w0 = 0.0;
    double w1 = 0.0;
    std::size_t n = 0;
    void add(const Stats& o) { w0 += o.w0; w1 += o.w1; n += o.n; }
    void sub(const Stats& o) { w0 -= o.w0; w1 -= o.w1; n -= o.n; }
  };

  const data::EncodedDataset& ds;
  double anomaly_weight;

  Stats sample(std::size_t row) const {
    Stats s;
    (ds.labels[row] ? s.w1 : s.w0) = ds.labels[row] ? anomaly_weight : 1.0;
    s.n = 1;
    return s;
  }
  static double impurity_mass(const Stats& s) {
    const double w = s.w0 + s.w1;
    if (w <= 0.0) return 0.0;
    return w - (s.w0 * s.w0 + s.w1 * s.w1) / w;  // w * gini
  }
  double gain(const Stats& left, const Stats& right, const Stats& parent) const {
    return impurity_mass(parent) - impurity_mass(left) - impurity_mass(right);
  }
  bool pure(const Stats& s) const { return s.w0 == 0.0 || s.w1 == 0.0; }
  double leaf(const Stats& s) const {
    const double w = s.w0 + s.w1;
    return w > 0.0 ? s.w1 / w : 0.0;
  }
};

// Second-order statistics for boosting regression trees.
struct NewtonPolicy {
  struct Stats {
    double g = 0.0;
    double h = 0.0;
    std::size_t n = 0;
    void add(const Stats& o) { g += o.g; h += o.h; n += o.n; }
    void sub(const Stats& o) { g -= o.g; h -= o.h; n -= o.n; }
  };

  const std::vector<double>& grad;
  const std::vector<double>& hess;
  double lambda;

  Stats sample(std::size_t row) const { return {grad[row], hess[row], 1}; }
  double score(const Stats& s) const { return s.g * s.g / (s.h + lambda); }
  double gain(const Stats& left, const Stats& right, const Stats& parent) const {
    return 0.5 * (score(left) + score(right) - score(parent));
  }
  bool pure(const Stats&) const { return false; }
  double leaf(const Stats& s) const { return -s.g / (s.h + lambda); }
};

struct BuildParams {
  int max_depth = 1;
  int min_samples_leaf = 1;
  int features_per_split = 0;  // 0 = all features
};

template <typename Policy>
DecisionTree build_tree(const data::EncodedDataset& ds, const Policy& policy,
                        std::vector<std::size_t> samples, const BuildParams& params, Rng* rng) {
  using Stats = typename Policy::Stats;
  const std::size_t n_features = ds.cols();
  std::vector<std::size_t> feature_pool(n_features);
  for (std::size_t f = 0; f < n_features; ++f) feature_pool[f] = f;
  const std::size_t mtry = params.features_per_split > 0
                               ? std::min<std::size_t>(params.features_per_split, n_features)
                               : n_features;
  const auto min_leaf = static_cast<std::size_t>(std::max(1, params.min_samples_leaf));

  struct Pending {
    int node;
    int depth;
    std::size_t begin;
    std::size_t end;
  };

  DecisionTree tree;
  tree.nodes.emplace_back();
  std::vector<Pending> stack{{0, 0, 0, samples.size()}};
  std::vector<Stats> per_code;

  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();

    Stats total;
    for (std::size_t i = job.begin; i < job.end; ++i) total.add(policy.sample(samples[i]));
    tree.nodes[job.node].value = policy.leaf(total);
    if (job.depth >= params.max_depth || total.n < 2 * min_leaf || policy.pure(total)) continue;

    if (rng != nullptr && mtry < n_features) {
      // Partial Fisher-Yates: the first mtry entries are the sampled features.
      for (std::size_t i = 0; i < mtry; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng->below(n_features - i));
        std::swap(feature_pool[i], feature_pool[j]);
      }
    }
    std::vector<std::size_t> candidates(feature_pool.begin(), feature_pool.begin() + mtry);
    std::sort(candidates.begin(), candidates.end());

    double best_gain = 1e-12;
    int best_feature = -1;
    std::int32_t best_threshold = 0;
    for (std::size_t f : candidates) {
      const auto card = static_cast<std::size_t>(ds.cardinalities[f]);
      per_code.assign(card, Stats{});
      for (std::size_t i = job.begin; i < job.end; ++i) {
        per_code[static_cast<std::size_t>(ds.code(samples[i], f))].add(policy.sample(samples[i]));
      }
      Stats left;
      Stats right = total;
      for (std::size_t c = 0; c + 1 < card; ++c) {
        if (per_code[c].n == 0) continue;
        left.add(per_code[c]);
        right.sub(per_code[c]);
        if (right.n == 0) break;
        if (left.n < min_leaf || right.n < min_leaf) continue;
        const double g = policy.gain(left, right, total);
        if (g > best_gain) {
          best_gain = g;
          best_feature = static_cast<int>(f);
          best_threshold = static_cast<std::int32_t>(c);
        }
      }
    }
    if (best_feature < 0) continue;

    const auto mid = std::stable_partition(
        samples.begin() + static_cast<long>(job.begin), samples.begin() + static_cast<long>(job.end),
        [&](std::size_t r) {
          return ds.code(r, static_cast<std::size_t>(best_feature)) <= best_threshold;
        });
    const auto split = static_cast<std::size_t>(mid - samples.begin());
    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[job.node];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = left_id + 1;
    stack.push_back({left_id + 1, job.depth + 1, split, job.end});
    stack.push_back({left_id, job.depth + 1, job.begin, split});
  }
  return tree;
}

double mean_logistic_loss(const std::vector<double>& margin, const data::EncodedDataset& ds) {
  double total = 0.0;
  for (std::size_t r = 0; r < ds.rows; ++r) total += embedding::logistic_loss(margin[r], ds.labels[r]);
  return total / static_cast<double>(ds.rows);
}

nlohmann::json trees_to_json(const std::vector<DecisionTree>& trees) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : trees) arr.push_back(t.to_json());
  return arr;
}

std::vector<DecisionTree> trees_from_json(const nlohmann::json& j) {
  std::vector<DecisionTree> out;
  for (const auto& t : j) out.push_back(DecisionTree::from_json(t));
  return out;
}

}  // namespace

double DecisionTree::predict(std::span<const std::int32_t> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                         : n.right);
  }
  return nodes[i].value;
}

int DecisionTree::depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    depth[static_cast<std::size_t>(nodes[i].left)] = depth[i] + 1;
    depth[static_cast<std::size_t>(nodes[i].right)] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

nlohmann::json DecisionTree::to_json() const {
  std::vector<int> feature, left, right;
  std::vector<double> threshold, value;
  for (const auto& n : nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
          {"value", value}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || n == 0) {
    throw Error("io", "malformed tree arrays");
  }
  DecisionTree t;
  for (std::size_t i = 0; i < n; ++i) {
    if (feature[i] >= 0 && (left[i] <= static_cast<int>(i) || right[i] <= static_cast<int>(i) ||
                            left[i] >= static_cast<int>(n) || right[i] >= static_cast<int>(n))) {
      throw Error("io", "tree node " + std::to_string(i) + " has invalid children");
    }
    t.nodes.push_back({feature[i], threshold[i], left[i], right[i], value[i]});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Random forest

nlohmann::json ForestConfig::to_json() const {
  return {{"trees", trees},
          {"max_depth", max_depth},
          {"min_samples_leaf", min_samples_leaf},
          {"features_per_split", features_per_split},
          {"anomaly_weight", anomaly_weight},
          {"bootstrap", bootstrap},
          {"seed", seed}};
}

ForestConfig ForestConfig::from_json(const nlohmann::json& j) {
  ForestConfig c;
  c.trees = j.value("trees", c.trees);
  c.max_depth = j.value("max_depth", c.max_depth);
  c.min_samples_leaf = j.value("min_samples_leaf", c.min_samples_leaf);
  c.features_per_split = j.value("features_per_split", c.features_per_split);
  c.anomaly_weight = j.value("anomaly_weight", c.anomaly_weight);
  c.bootstrap = j.value("bootstrap", c.bootstrap);
  c.seed = j.value("seed", c.seed);
  return c;
}

nlohmann::json ForestModel::to_json() const {
  return {{"format_version", kFormatVersion},
          {"kind", "rf"},
          {"n_features", n_features},
          {"config", config.to_json()},
          {"trees", trees_to_json(trees)}};
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion || j.at("kind") != "rf") {
    throw Error("io", "not a version-1 random forest model");
  }
  ForestModel m;
  m.n_features = j.at("n_features").get<std::size_t>();
  m.config = ForestConfig::from_json(j.at("config"));
  m.trees = trees_from_json(j.at("trees"));
  return m;
}

ForestModel rf_fit(const data::EncodedDataset& ds, const ForestConfig& config) {
  if (config.trees < 1) throw Error(kStage, "forest needs at least one tree");
  if (config.max_depth < 1 || config.min_samples_leaf < 1) {
    throw Error(kStage, "max depth and min samples per leaf must be positive");
  }
  if (!(config.anomaly_weight > 0.0)) throw Error(kStage, "anomaly weight must be positive");
  require_both_classes(ds);

  ForestModel model;
  model.config = config;
  model.n_features = ds.cols();
  BuildParams params;
  params.max_depth = config.max_depth;
  params.min_samples_leaf = config.min_samples_leaf;
  params.features_per_split =
      config.features_per_split > 0
          ? config.features_per_split
          : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(ds.cols()))));
  const GiniPolicy policy{ds, config.anomaly_weight};

  for (int t = 0; t < config.trees; ++t) {
    Rng rng(derive_seed(config.seed, "rf-tree-" + std::to_string(t)));
    std::vector<std::size_t> samples(ds.rows);
    for (std::size_t i = 0; i < ds.rows; ++i) {
      samples[i] = config.bootstrap ? static_cast<std::size_t>(rng.below(ds.rows)) : i;
    }
    std::sort(samples.begin(), samples.end());
    model.trees.push_back(build_tree(ds, policy, std::move(samples), params, &rng));
  }
  return model;
}

double rf_predict(const ForestModel& model, std::span<const std::int32_t> row) {
  check_row(model.n_features, row);
  double sum = 0.0;
  for (const auto& t : model.trees) sum += t.predict(row);
  return sum / static_cast<double>(model.trees.size());
}

// ---------------------------------------------------------------------------
// Gradient boosting

nlohmann::json BoostConfig::to_json() const {
  return {{"rounds", rounds},
          {"max_depth", max_depth},
          {"learning_rate", learning_rate},
          {"lambda", lambda},
          {"min_samples_leaf", min_samples_leaf}};
}

BoostConfig BoostConfig::from_json(const nlohmann::json& j) {
  BoostConfig c;
  c.rounds = j.value("rounds", c.rounds);
  c.max_depth = j.value("max_depth", c.max_depth);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.lambda = j.value("lambda", c.lambda);
  c.min_samples_leaf = j.value("min_samples_leaf", c.min_samples_leaf);
  return c;
}

nlohmann::json BoostedModel::to_json() const {
  return {{"format_version", kFormatVersion},
          {"kind", "gbt"},
          {"n_features", n_features},
          {"initial_log_odds", initial_log_odds},
          {"config", config.to_json()},
          {"trees", trees_to_json(trees)}};
}

BoostedModel BoostedModel::from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion || j.at("kind") != "gbt") {
    throw Error("io", "not a version-1 boosted model");
  }
  BoostedModel m;
  m.n_features = j.at("n_features").get<std::size_t>();
  m.initial_log_odds = j.at("initial_log_odds").get<double>();
  m.config = BoostConfig::from_json(j.at("config"));
  m.trees = trees_from_json(j.at("trees"));
  return m;
}

BoostedModel gbt_fit(const data::EncodedDataset& ds, const BoostConfig& config) {
  if (config.rounds < 0 || config.max_depth < 1 || config.min_samples_leaf < 1) {
    throw Error(kStage, "invalid boosting configuration");
  }
  if (!(config.learning_rate >= 0.0) || !(config.lambda >= 0.0)) {
    throw Error(kStage, "learning rate and lambda must be non-negative");
  }
  require_both_classes(ds);

  BoostedModel model;
  model.config = config;
  model.n_features = ds.cols();
  const double prevalence =
      static_cast<double>(std::count(ds.labels.begin(), ds.labels.end(), 1)) /
      static_cast<double>(ds.rows);
  model.initial_log_odds = std::log(prevalence / (1.0 - prevalence));

  std::vector<double> margin(ds.rows, model.initial_log_odds);
  std::vector<double> grad(ds.rows), hess(ds.rows);
  model.loss_trace.push_back(mean_logistic_loss(margin, ds));

  BuildParams params;
  params.max_depth = config.max_depth;
  params.min_samples_leaf = config.min_samples_leaf;
  std::vector<std::size_t> all(ds.rows);
  for (std::size_t i = 0; i < ds.rows; ++i) all[i] = i;

  for (int round = 0; round < config.rounds; ++round) {
    for (std::size_t r = 0; r < ds.rows; ++r) {
      const double p = embedding::sigmoid(margin[r]);
      grad[r] = p - ds.labels[r];
      hess[r] = p * (1.0 - p);
      if (!std::isfinite(grad[r]) || !std::isfinite(hess[r])) {
        throw Error(kStage, "non-finite residual in round " + std::to_string(round + 1));
      }
    }
    const NewtonPolicy policy{grad, hess, config.lambda};
    DecisionTree tree = build_tree(ds, policy, all, params, nullptr);
    for (std::size_t r = 0; r < ds.rows; ++r) {
      margin[r] += config.learning_rate * tree.predict(ds.row(r));
    }
    model.trees.push_back(std::move(tree));
    model.loss_trace.push_back(mean_logistic_loss(margin, ds));
  }
  return model;
}

double gbt_margin(const BoostedModel& model, std::span<const std::int32_t> row) {
  check_row(model.n_features, row);
  double sum = 0.0;
  for (const auto& t : model.trees) sum += t.predict(row);
  return model.initial_log_odds + model.config.learning_rate * sum;
}

double gbt_predict(const BoostedModel& model, std::span<const std::int32_t> row) {
  return embedding::sigmoid(gbt_margin(model, row));
}

}  // namespace semcad::trees
