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

// End-to-end SEMC-AD: encode -> embed -> project -> cluster -> label, plus
// the tree baselines run on the same encoded columns.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "semcad/baselines.hpp"
#include "semcad/clustering.hpp"
#include "semcad/data_model.hpp"
#include "semcad/embedding_net.hpp"
#include "semcad/evaluation.hpp"
#include "semcad/feature_selection.hpp"
#include "semcad/pca.hpp"

namespace semcad::pipeline {

struct PipelineConfig {
  // Every stage seed is derive_seed(seed, <stage name>); see stage_seed().
  std::uint64_t seed = 42;

  std::vector<std::string> features;  // empty selects the default ten columns
  std::vector<std::string> severity_scale = data::default_severity_scale();
  data::AlarmTypeMapping mapping;
  data::CsvSchema schema;

  bool select_features = false;
  int select_k = 10;

  embedding::TrainConfig embedding;
  pca::ComponentRule pca_rule;
  bool standardize = true;
  int clusters = 5;
  cluster::GmmOptions gmm;
  double rho = 0.9;
  cluster::LabelRule label_rule = cluster::LabelRule::kFraction;

  bool temporal_split = true;
  double train_fraction = 0.8;
  double target_precision = 0.6;

  trees::ForestConfig forest;
  trees::BoostConfig boost;

  std::uint64_t stage_seed(std::string_view stage) const;
  std::vector<data::Feature> feature_list() const;
  void validate() const;

  nlohmann::json to_json() const;
  // Keys absent from `j` keep their defaults.
  static PipelineConfig from_json(const nlohmann::json& j);
};

struct ClassifyResult {
  std::vector<std::size_t> clusters;
  std::vector<std::uint8_t> decisions;  // 1 = anomaly
  // Training anomaly fraction of the assigned cluster; the score swept by rho.
  std::vector<double> scores;
};

struct PipelineBundle {
  static constexpr std::uint32_t kFormatVersion = 1;

  data::VocabularyEncoder encoder;
  embedding::EmbeddingModel model;
  pca::PcaModel pca;
  cluster::GmmModel gmm;
  cluster::ClusterLabeling labeling;
  nlohmann::json config;  // effective configuration snapshot

  // Throws when component dimensions do not chain.
  void validate() const;

  Matrix embed(const data::EncodedDataset& ds) const;
  Matrix project(const data::EncodedDataset& ds) const;
  ClassifyResult classify(const Matrix& points) const;
  ClassifyResult classify(std::span<const data::AlarmRecord> records) const;

  std::string serialize() const;
  static PipelineBundle deserialize(std::string_view bytes);
  void save(const std::string& path) const;
  static PipelineBundle load(const std::string& path);
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct TrainOutput {
  PipelineBundle bundle;
  Matrix points;  // training rows in principal-component space
  std::vector<std::uint8_t> labels;
  std::vector<std::size_t> assignments;
  std::vector<selection::FeatureScore> selection;  // empty unless selection ran
  std::vector<double> loss_trace;
  double anomaly_weight = 1.0;
  std::vector<StageTiming> timings;
};

data::VocabularyEncoder fit_encoder(std::span<const data::AlarmRecord> records,
                                    const PipelineConfig& config,
                                    std::vector<data::Feature> features);

// Scores every candidate column against the label and keeps the top k.
std::vector<selection::FeatureScore> select_features(std::span<const data::AlarmRecord> records,
                                                     const PipelineConfig& config, int k);

TrainOutput train(std::span<const data::AlarmRecord> records, const PipelineConfig& config);

struct SemcadEvaluation {
  eval::ClassReport report;             // at the bundle's rho
  std::vector<eval::PrPoint> rho_curve;  // threshold = minimum training cluster fraction flagged
  ClassifyResult result;
};

SemcadEvaluation evaluate_semcad(const PipelineBundle& bundle,
                                 std::span<const data::AlarmRecord> records);

// A tree baseline with the encoder it was trained against.
struct BaselineModel {
  static constexpr int kFormatVersion = 1;

  std::string method;  // "rf" or "gbt"
  data::VocabularyEncoder encoder;
  trees::ForestModel forest;
  trees::BoostedModel boost;
  double threshold = 0.5;
  double target_precision = 0.6;

  std::vector<double> score(std::span<const data::AlarmRecord> records) const;
  double score(std::span<const std::int32_t> codes) const;

  nlohmann::json to_json() const;
  static BaselineModel from_json(const nlohmann::json& j);
};

BaselineModel train_baseline(std::span<const data::AlarmRecord> records, std::string_view method,
                             const PipelineConfig& config);

struct BaselineEvaluation {
  eval::TunedThreshold tuned;
  std::vector<eval::PrPoint> curve;
  std::vector<double> scores;
};

BaselineEvaluation evaluate_baseline(const BaselineModel& model,
                                     std::span<const data::AlarmRecord> records,
                                     double target_precision);

std::string scatter_csv(const Matrix& points, std::span<const std::uint8_t> labels);
std::string cluster_csv(const Matrix& points, std::span<const std::uint8_t> labels,
                        std::span<const std::size_t> clusters,
                        const cluster::ClusterLabeling& labeling);
std::string scatter_svg(const Matrix& points, std::span<const std::uint8_t> labels);

}  // namespace semcad::pipeline
