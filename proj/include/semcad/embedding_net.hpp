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

// Supervised entity-embedding network.
//
// Each categorical column owns an embedding table whose row 0 is the UNKNOWN
// entity. A row's embedding is the concatenation of its looked-up table rows
// (in column order); a stack of dense layers maps it to a single logit that
// is trained with class-weighted binary cross-entropy. After training the
// concatenated embedding is used on its own as the numeric representation of
// an alarm.
//
// All parameters live in one contiguous vector. Layout:
//   embedding tables in column order, each (cardinality x dim) row-major;
//   then each dense layer: kernel (in x out) row-major, then bias (out).
// This is also the on-disk blob layout.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "semcad/common.hpp"
#include "semcad/data_model.hpp"

namespace semcad::embedding {

enum class Activation { kRelu, kIdentity };
enum class Optimizer { kAdam, kSgd };

struct TrainConfig {
  int epochs = 30;
  int batch_size = 256;
  double learning_rate = 1e-3;
  Optimizer optimizer = Optimizer::kAdam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Loss weight of the anomaly class; unset means N_normal / N_anomaly.
  std::optional<double> anomaly_weight;
  // Probability of replacing a training cell with the UNKNOWN code.
  double unknown_probability = 0.02;
  // Embedding tables start uniform in +-embedding_init; a value <= 0 uses
  // +-1/sqrt(rows) like the dense layers.
  double embedding_init = 0.05;
  std::vector<int> hidden = {128, 32};
  // Explicit per-column widths; empty selects min(50, ceil(card / 2)).
  std::vector<int> embedding_dims;
  std::uint64_t seed = 42;

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

int default_embedding_dim(int cardinality);

struct Tensor {
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t size() const noexcept { return rows * cols; }
};

struct DenseLayer {
  Tensor kernel;  // in x out
  Tensor bias;    // 1 x out
  Activation activation = Activation::kRelu;
};

struct ForwardResult {
  double logit = 0.0;
  std::vector<double> embedding;
};

class EmbeddingModel {
 public:
  static constexpr int kFormatVersion = 1;

  static EmbeddingModel build(std::vector<int> cardinalities, const TrainConfig& config);

  std::size_t embedding_width() const noexcept { return width_; }
  const std::vector<int>& cardinalities() const noexcept { return cardinalities_; }
  const std::vector<int>& embedding_dims() const noexcept { return dims_; }
  const std::vector<Tensor>& embedding_tables() const noexcept { return tables_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> view(const Tensor& t) noexcept { return {params_.data() + t.offset, t.size()}; }
  std::span<const double> view(const Tensor& t) const noexcept {
    return {params_.data() + t.offset, t.size()};
  }

  ForwardResult forward(std::span<const std::int32_t> codes) const;
  void embed_into(std::span<const std::int32_t> codes, std::span<double> out) const;
  double logit(std::span<const std::int32_t> codes) const;

  // Metadata JSON (shapes and activations); weights go to the blob.
  nlohmann::json to_json() const;
  static EmbeddingModel from_json(const nlohmann::json& j, std::vector<double> parameters);

  friend bool operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
    return a.cardinalities_ == b.cardinalities_ && a.dims_ == b.dims_ &&
           a.hidden_ == b.hidden_ && a.params_ == b.params_;
  }

 private:
  void check_codes(std::span<const std::int32_t> codes) const;

  std::vector<int> cardinalities_;
  std::vector<int> dims_;
  std::vector<int> hidden_;
  std::size_t width_ = 0;
  std::vector<Tensor> tables_;
  std::vector<DenseLayer> layers_;
  std::vector<double> params_;
};

double sigmoid(double z);
// Binary cross-entropy of sigmoid(logit) against label, computed stably.
double logistic_loss(double logit, int label);

// Mean over rows of w_i * bce_i, where w_i = anomaly_weight for label 1.
double weighted_loss(const EmbeddingModel& model, const data::EncodedDataset& ds,
                     double anomaly_weight);

// Loss over the given rows and its gradient with respect to every parameter
// (same layout as EmbeddingModel::parameters()). `grad` is overwritten.
double loss_and_gradient(const EmbeddingModel& model, const data::EncodedDataset& ds,
                         std::span<const std::size_t> rows, double anomaly_weight,
                         std::span<double> grad);

struct TrainResult {
  EmbeddingModel model;
  std::vector<double> loss_trace;  // mean training loss per epoch
  double anomaly_weight = 1.0;
};

TrainResult train(EmbeddingModel model, const data::EncodedDataset& ds, const TrainConfig& config);

// N x D matrix of concatenated embeddings.
Matrix embed_dataset(const EmbeddingModel& model, const data::EncodedDataset& ds);

// Parameter blob: magic "SEMCADW1", u32 format_version, u64 count, f64 values (LE).
void write_parameter_blob(std::ostream& out, std::span<const double> values);
std::vector<double> read_parameter_blob(std::istream& in);

void save_model(const EmbeddingModel& model, const std::string& json_path,
                const std::string& blob_path);
EmbeddingModel load_model(const std::string& json_path, const std::string& blob_path);

}  // namespace semcad::embedding
