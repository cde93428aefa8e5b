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

#include "semcad/embedding_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace semcad::embedding {
namespace {

constexpr const char* kStage = "embedding";
constexpr char kBlobMagic[8] = {'S', 'E', 'M', 'C', 'A', 'D', 'W', '1'};

const char* activation_name(Activation a) { return a == Activation::kRelu ? "relu" : "identity"; }

Activation activation_from_name(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "identity") return Activation::kIdentity;
  throw Error("io", "unknown activation '" + s + "'");
}

// Scratch buffers for one row's forward and backward pass.
struct Workspace {
  std::vector<std::vector<double>> pre;   // pre-activation per layer
  std::vector<std::vector<double>> post;  // post-activation per layer; post[0] = embedding
  std::vector<double> delta;
  std::vector<double> delta_prev;

  explicit Workspace(const EmbeddingModel& m) {
    post.emplace_back(m.embedding_width());
    for (const auto& layer : m.layers()) {
      pre.emplace_back(layer.kernel.cols);
      post.emplace_back(layer.kernel.cols);
    }
  }
};

void gather(const EmbeddingModel& m, std::span<const std::int32_t> codes, std::span<double> out) {
  std::size_t pos = 0;
  const auto& tables = m.embedding_tables();
  for (std::size_t f = 0; f < tables.size(); ++f) {
    const auto table = m.view(tables[f]);
    const std::size_t d = tables[f].cols;
    const double* src = table.data() + static_cast<std::size_t>(codes[f]) * d;
    std::copy(src, src + d, out.data() + pos);
    pos += d;
  }
}

double run_dense(const EmbeddingModel& m, Workspace& ws) {
  const auto& layers = m.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    const auto kernel = m.view(layer.kernel);
    const auto bias = m.view(layer.bias);
    const std::vector<double>& in = ws.post[l];
    std::vector<double>& z = ws.pre[l];
    const std::size_t out_w = layer.kernel.cols;
    std::copy(bias.begin(), bias.end(), z.begin());
    double* __restrict zp = z.data();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double a = in[i];
      if (a == 0.0) continue;
      const double* __restrict k = kernel.data() + i * out_w;
      for (std::size_t o = 0; o < out_w; ++o) zp[o] += a * k[o];
    }
    std::vector<double>& act = ws.post[l + 1];
    if (layer.activation == Activation::kRelu) {
      for (std::size_t o = 0; o < out_w; ++o) act[o] = z[o] > 0.0 ? z[o] : 0.0;
    } else {
      std::copy(z.begin(), z.end(), act.begin());
    }
  }
  return ws.post.back()[0];
}

// Activations for a block of rows, stored row-major per layer. Processing
// rows in blocks keeps each kernel row hot in cache across the block; every
// parameter still accumulates its per-row terms in row order.
struct BlockWorkspace {
  static constexpr std::size_t kRows = 32;
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;  // post[0] = embeddings
  std::vector<double> delta;
  std::vector<double> delta_prev;

  explicit BlockWorkspace(const EmbeddingModel& m) {
    post.emplace_back(kRows * m.embedding_width());
    for (const auto& layer : m.layers()) {
      pre.emplace_back(kRows * layer.kernel.cols);
      post.emplace_back(kRows * layer.kernel.cols);
    }
  }
};

void block_forward(const EmbeddingModel& m, BlockWorkspace& ws, std::size_t n) {
  const auto& layers = m.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    const auto kernel = m.view(layer.kernel);
    const auto bias = m.view(layer.bias);
    const std::size_t in_w = layer.kernel.rows, out_w = layer.kernel.cols;
    const double* in = ws.post[l].data();
    double* __restrict z = ws.pre[l].data();
    for (std::size_t r = 0; r < n; ++r) std::copy(bias.begin(), bias.end(), z + r * out_w);
    for (std::size_t i = 0; i < in_w; ++i) {
      const double* __restrict k = kernel.data() + i * out_w;
      for (std::size_t r = 0; r < n; ++r) {
        const double a = in[r * in_w + i];
        if (a == 0.0) continue;
        double* __restrict zr = z + r * out_w;
        for (std::size_t o = 0; o < out_w; ++o) zr[o] += a * k[o];
      }
    }
    double* act = ws.post[l + 1].data();
    if (layer.activation == Activation::kRelu) {
      for (std::size_t q = 0; q < n * out_w; ++q) act[q] = z[q] > 0.0 ? z[q] : 0.0;
    } else {
      std::copy(z, z + n * out_w, act);
    }
  }
}

// Accumulates d(loss)/d(params) for the block given d(loss)/d(logit) per row.
void block_backward(const EmbeddingModel& m, const data::EncodedDataset& ds,
                    std::span<const std::size_t> rows, BlockWorkspace& ws,
                    std::span<const double> dlogit, std::span<double> grad) {
  const std::size_t n = rows.size();
  const auto& layers = m.layers();
  ws.delta.assign(dlogit.begin(), dlogit.end());
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    const std::size_t in_w = layer.kernel.rows, out_w = layer.kernel.cols;
    double* __restrict delta = ws.delta.data();
    if (layer.activation == Activation::kRelu) {
      const double* z = ws.pre[l].data();
      for (std::size_t q = 0; q < n * out_w; ++q) {
        if (!(z[q] > 0.0)) delta[q] = 0.0;
      }
    }
    double* __restrict gb = grad.data() + layer.bias.offset;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t o = 0; o < out_w; ++o) gb[o] += delta[r * out_w + o];
    }
    double* gk = grad.data() + layer.kernel.offset;
    const double* in = ws.post[l].data();
    for (std::size_t i = 0; i < in_w; ++i) {
      double* __restrict row = gk + i * out_w;
      for (std::size_t r = 0; r < n; ++r) {
        const double a = in[r * in_w + i];
        if (a == 0.0) continue;
        const double* __restrict dr = delta + r * out_w;
        for (std::size_t o = 0; o < out_w; ++o) row[o] += a * dr[o];
      }
    }
    const auto kernel = m.view(layer.kernel);
    ws.delta_prev.assign(n * in_w, 0.0);
    for (std::size_t i = 0; i < in_w; ++i) {
      const double* k = kernel.data() + i * out_w;
      for (std::size_t r = 0; r < n; ++r) {
        const double* dr = delta + r * out_w;
        // Four fixed partial sums keep the order deterministic while letting
        // the loop vectorize.
        double s[4] = {0.0, 0.0, 0.0, 0.0};
        std::size_t o = 0;
        for (; o + 4 <= out_w; o += 4) {
          for (std::size_t t = 0; t < 4; ++t) s[t] += k[o + t] * dr[o + t];
        }
        for (; o < out_w; ++o) s[0] += k[o] * dr[o];
        ws.delta_prev[r * in_w + i] = (s[0] + s[1]) + (s[2] + s[3]);
      }
    }
    std::swap(ws.delta, ws.delta_prev);
  }
  // ws.delta now holds d(loss)/d(embedding); scatter into the looked-up rows.
  const auto& tables = m.embedding_tables();
  const std::size_t width = m.embedding_width();
  for (std::size_t r = 0; r < n; ++r) {
    const auto codes = ds.row(rows[r]);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < tables.size(); ++f) {
      const std::size_t d = tables[f].cols;
      double* g = grad.data() + tables[f].offset + static_cast<std::size_t>(codes[f]) * d;
      for (std::size_t k = 0; k < d; ++k) g[k] += ws.delta[r * width + pos + k];
      pos += d;
    }
  }
}

double resolve_anomaly_weight(const TrainConfig& config, const data::EncodedDataset& ds) {
  if (config.anomaly_weight) return *config.anomaly_weight;
  const auto positives = static_cast<double>(std::count(ds.labels.begin(), ds.labels.end(), 1));
  return (static_cast<double>(ds.rows) - positives) / positives;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs <= 0 || batch_size <= 0 || !(learning_rate > 0.0)) {
    throw Error(kStage, "epochs, batch size and learning rate must be positive");
  }
  if (!(unknown_probability >= 0.0 && unknown_probability <= 0.5)) {
    throw Error(kStage, "unknown substitution probability must lie in [0, 0.5]");
  }
  if (!std::isfinite(embedding_init)) throw Error(kStage, "embedding_init must be finite");
  if (anomaly_weight && !(*anomaly_weight > 0.0)) throw Error(kStage, "anomaly weight must be positive");
  for (int h : hidden) {
    if (h <= 0) throw Error(kStage, "hidden layer widths must be positive");
  }
  for (int d : embedding_dims) {
    if (d <= 0) throw Error(kStage, "embedding widths must be positive");
  }
}

nlohmann::json TrainConfig::to_json() const {
  nlohmann::json j = {{"epochs", epochs},
                      {"batch_size", batch_size},
                      {"learning_rate", learning_rate},
                      {"optimizer", optimizer == Optimizer::kAdam ? "adam" : "sgd"},
                      {"adam_beta1", adam_beta1},
                      {"adam_beta2", adam_beta2},
                      {"adam_epsilon", adam_epsilon},
                      {"unknown_probability", unknown_probability},
                      {"embedding_init", embedding_init},
                      {"hidden", hidden},
                      {"embedding_dims", embedding_dims},
                      {"seed", seed}};
  j["anomaly_weight"] = anomaly_weight ? nlohmann::json(*anomaly_weight) : nlohmann::json();
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  const std::string opt = j.value("optimizer", std::string("adam"));
  if (opt != "adam" && opt != "sgd") throw Error(kStage, "unknown optimizer '" + opt + "'");
  c.optimizer = opt == "adam" ? Optimizer::kAdam : Optimizer::kSgd;
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.adam_epsilon = j.value("adam_epsilon", c.adam_epsilon);
  c.unknown_probability = j.value("unknown_probability", c.unknown_probability);
  c.embedding_init = j.value("embedding_init", c.embedding_init);
  c.hidden = j.value("hidden", c.hidden);
  c.embedding_dims = j.value("embedding_dims", c.embedding_dims);
  c.seed = j.value("seed", c.seed);
  if (j.contains("anomaly_weight") && !j.at("anomaly_weight").is_null()) {
    c.anomaly_weight = j.at("anomaly_weight").get<double>();
  }
  return c;
}

int default_embedding_dim(int cardinality) { return std::min(50, (cardinality + 1) / 2); }

EmbeddingModel EmbeddingModel::build(std::vector<int> cardinalities, const TrainConfig& config) {
  config.validate();
  if (cardinalities.empty()) throw Error(kStage, "no categorical columns");
  for (int c : cardinalities) {
    if (c <= 0) throw Error(kStage, "zero cardinality column");
  }
  if (!config.embedding_dims.empty() && config.embedding_dims.size() != cardinalities.size()) {
    throw Error(kStage, "embedding_dims has " + std::to_string(config.embedding_dims.size()) +
                            " entries for " + std::to_string(cardinalities.size()) + " columns");
  }

  EmbeddingModel m;
  m.cardinalities_ = std::move(cardinalities);
  m.hidden_ = config.hidden;
  std::size_t offset = 0;
  for (std::size_t f = 0; f < m.cardinalities_.size(); ++f) {
    const int d = config.embedding_dims.empty() ? default_embedding_dim(m.cardinalities_[f])
                                                : config.embedding_dims[f];
    m.dims_.push_back(d);
    Tensor t{offset, static_cast<std::size_t>(m.cardinalities_[f]), static_cast<std::size_t>(d)};
    offset += t.size();
    m.tables_.push_back(t);
    m.width_ += static_cast<std::size_t>(d);
  }
  std::size_t in = m.width_;
  std::vector<int> widths = config.hidden;
  widths.push_back(1);
  for (std::size_t l = 0; l < widths.size(); ++l) {
    DenseLayer layer;
    const auto out = static_cast<std::size_t>(widths[l]);
    layer.kernel = {offset, in, out};
    offset += layer.kernel.size();
    layer.bias = {offset, 1, out};
    offset += layer.bias.size();
    layer.activation = l + 1 == widths.size() ? Activation::kIdentity : Activation::kRelu;
    m.layers_.push_back(layer);
    in = out;
  }
  m.params_.assign(offset, 0.0);

  // Dense kernels: uniform(+-1/sqrt(fan_in)). Biases start at zero.
  Rng rng(config.seed);
  for (const auto& t : m.tables_) {
    const double bound = config.embedding_init > 0.0
                             ? config.embedding_init
                             : 1.0 / std::sqrt(static_cast<double>(t.rows));
    for (double& w : m.view(t)) w = rng.uniform(-bound, bound);
  }
  for (const auto& layer : m.layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.kernel.rows));
    for (double& w : m.view(layer.kernel)) w = rng.uniform(-bound, bound);
  }
  return m;
}

void EmbeddingModel::check_codes(std::span<const std::int32_t> codes) const {
  if (codes.size() != cardinalities_.size()) {
    throw Error(kStage, "row has " + std::to_string(codes.size()) + " codes, model expects " +
                            std::to_string(cardinalities_.size()));
  }
  for (std::size_t f = 0; f < codes.size(); ++f) {
    if (codes[f] < 0 || codes[f] >= cardinalities_[f]) {
      throw Error(kStage, "code " + std::to_string(codes[f]) + " out of range for column " +
                              std::to_string(f));
    }
  }
}

ForwardResult EmbeddingModel::forward(std::span<const std::int32_t> codes) const {
  check_codes(codes);
  Workspace ws(*this);
  gather(*this, codes, ws.post[0]);
  ForwardResult r;
  r.logit = run_dense(*this, ws);
  r.embedding = std::move(ws.post[0]);
  return r;
}

void EmbeddingModel::embed_into(std::span<const std::int32_t> codes, std::span<double> out) const {
  check_codes(codes);
  if (out.size() != width_) throw Error(kStage, "embedding output has the wrong width");
  gather(*this, codes, out);
}

double EmbeddingModel::logit(std::span<const std::int32_t> codes) const {
  return forward(codes).logit;
}

nlohmann::json EmbeddingModel::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : layers_) {
    layers.push_back({{"in", l.kernel.rows},
                      {"out", l.kernel.cols},
                      {"activation", activation_name(l.activation)}});
  }
  return {{"format_version", kFormatVersion},
          {"cardinalities", cardinalities_},
          {"embedding_dims", dims_},
          {"embedding_width", width_},
          {"hidden", hidden_},
          {"layers", std::move(layers)},
          {"parameter_count", params_.size()}};
}

EmbeddingModel EmbeddingModel::from_json(const nlohmann::json& j, std::vector<double> parameters) {
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw Error("io", "unsupported embedding model format_version " + j.at("format_version").dump());
  }
  TrainConfig shape;
  shape.hidden = j.at("hidden").get<std::vector<int>>();
  shape.embedding_dims = j.at("embedding_dims").get<std::vector<int>>();
  EmbeddingModel m = build(j.at("cardinalities").get<std::vector<int>>(), shape);
  if (parameters.size() != m.params_.size()) {
    throw Error("io", "embedding blob holds " + std::to_string(parameters.size()) +
                          " values, model needs " + std::to_string(m.params_.size()));
  }
  const auto& layers = j.at("layers");
  if (layers.size() != m.layers_.size()) throw Error("io", "embedding layer count mismatch");
  for (std::size_t l = 0; l < m.layers_.size(); ++l) {
    m.layers_[l].activation = activation_from_name(layers[l].at("activation").get<std::string>());
  }
  m.params_ = std::move(parameters);
  return m;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logistic_loss(double logit, int label) {
  return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

double weighted_loss(const EmbeddingModel& model, const data::EncodedDataset& ds,
                     double anomaly_weight) {
  if (ds.rows == 0) throw Error(kStage, "loss of an empty dataset");
  Workspace ws(model);
  double total = 0.0;
  for (std::size_t r = 0; r < ds.rows; ++r) {
    const auto codes = ds.row(r);
    gather(model, codes, ws.post[0]);
    const double z = run_dense(model, ws);
    const double w = ds.labels[r] ? anomaly_weight : 1.0;
    total += w * logistic_loss(z, ds.labels[r]);
  }
  return total / static_cast<double>(ds.rows);
}

double loss_and_gradient(const EmbeddingModel& model, const data::EncodedDataset& ds,
                         std::span<const std::size_t> rows, double anomaly_weight,
                         std::span<double> grad) {
  if (grad.size() != model.parameters().size()) throw Error(kStage, "gradient buffer size mismatch");
  if (rows.empty()) throw Error(kStage, "gradient over zero rows");
  std::fill(grad.begin(), grad.end(), 0.0);
  BlockWorkspace ws(model);
  const std::size_t width = model.embedding_width();
  const double scale = 1.0 / static_cast<double>(rows.size());
  double total = 0.0;
  std::vector<double> dlogit(BlockWorkspace::kRows);
  for (std::size_t start = 0; start < rows.size(); start += BlockWorkspace::kRows) {
    const auto block = rows.subspan(start, std::min(BlockWorkspace::kRows, rows.size() - start));
    for (std::size_t r = 0; r < block.size(); ++r) {
      gather(model, ds.row(block[r]), std::span<double>(ws.post[0]).subspan(r * width, width));
    }
    block_forward(model, ws, block.size());
    for (std::size_t r = 0; r < block.size(); ++r) {
      const double z = ws.post.back()[r];
      const int y = ds.labels[block[r]];
      const double w = y ? anomaly_weight : 1.0;
      total += w * logistic_loss(z, y);
      dlogit[r] = w * (sigmoid(z) - y) * scale;
    }
    block_backward(model, ds, block, ws, std::span<const double>(dlogit).first(block.size()), grad);
  }
  return total * scale;
}

TrainResult train(EmbeddingModel model, const data::EncodedDataset& ds, const TrainConfig& config) {
  config.validate();
  if (ds.rows == 0) throw Error(kStage, "training dataset is empty");
  if (ds.cardinalities != model.cardinalities()) {
    throw Error(kStage, "dataset cardinalities do not match the model");
  }
  const auto positives = std::count(ds.labels.begin(), ds.labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(ds.rows)) {
    throw Error(kStage, "training data must contain both labels");
  }

  TrainResult result{std::move(model), {}, resolve_anomaly_weight(config, ds)};
  EmbeddingModel& m = result.model;
  const std::size_t n_params = m.parameters().size();
  const std::size_t cols = ds.cols();

  Rng rng(config.seed);
  std::vector<std::size_t> order(ds.rows);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  // The batch is copied into a scratch dataset so UNKNOWN substitution never
  // touches the caller's codes.
  data::EncodedDataset batch;
  batch.cardinalities = ds.cardinalities;
  std::vector<std::size_t> batch_rows;

  std::vector<double> grad(n_params), m1(n_params, 0.0), m2(n_params, 0.0);
  long step = 0;
  const auto batch_size = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < ds.rows; start += batch_size) {
      const std::size_t end = std::min(ds.rows, start + batch_size);
      batch.rows = end - start;
      batch.codes.resize(batch.rows * cols);
      batch.labels.resize(batch.rows);
      batch_rows.resize(batch.rows);
      for (std::size_t i = 0; i < batch.rows; ++i) {
        const auto src = ds.row(order[start + i]);
        for (std::size_t c = 0; c < cols; ++c) {
          batch.codes[i * cols + c] =
              config.unknown_probability > 0.0 && rng.bernoulli(config.unknown_probability)
                  ? data::VocabularyEncoder::kUnknown
                  : src[c];
        }
        batch.labels[i] = ds.labels[order[start + i]];
        batch_rows[i] = i;
      }

      const double loss = loss_and_gradient(m, batch, batch_rows, result.anomaly_weight, grad);
      if (!std::isfinite(loss)) {
        throw Error(kStage, "non-finite loss at epoch " + std::to_string(epoch + 1) + ", step " +
                                std::to_string(step + 1));
      }
      epoch_loss += loss * static_cast<double>(batch.rows);

      ++step;
      auto params = m.parameters();
      if (config.optimizer == Optimizer::kAdam) {
        const double b1 = config.adam_beta1, b2 = config.adam_beta2;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
        const double lr = config.learning_rate;
        for (std::size_t p = 0; p < n_params; ++p) {
          m1[p] = b1 * m1[p] + (1.0 - b1) * grad[p];
          m2[p] = b2 * m2[p] + (1.0 - b2) * grad[p] * grad[p];
          params[p] -= lr * (m1[p] / c1) / (std::sqrt(m2[p] / c2) + config.adam_epsilon);
        }
      } else {
        for (std::size_t p = 0; p < n_params; ++p) params[p] -= config.learning_rate * grad[p];
      }
    }
    for (double p : m.parameters()) {
      if (!std::isfinite(p)) {
        throw Error(kStage, "non-finite parameter after epoch " + std::to_string(epoch + 1));
      }
    }
    result.loss_trace.push_back(epoch_loss / static_cast<double>(ds.rows));
  }
  return result;
}

Matrix embed_dataset(const EmbeddingModel& model, const data::EncodedDataset& ds) {
  Matrix out(ds.rows, model.embedding_width());
  for (std::size_t r = 0; r < ds.rows; ++r) model.embed_into(ds.row(r), out.row(r));
  return out;
}

void write_parameter_blob(std::ostream& out, std::span<const double> values) {
  out.write(kBlobMagic, sizeof(kBlobMagic));
  write_u32(out, EmbeddingModel::kFormatVersion);
  write_u64(out, values.size());
  for (double v : values) write_f64(out, v);
}

std::vector<double> read_parameter_blob(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kBlobMagic, sizeof(magic)) != 0) {
    throw Error("io", "bad parameter blob magic");
  }
  const std::uint32_t version = read_u32(in);
  if (version != static_cast<std::uint32_t>(EmbeddingModel::kFormatVersion)) {
    throw Error("io", "unsupported parameter blob version " + std::to_string(version));
  }
  const std::uint64_t count = read_u64(in);
  std::vector<double> values(count);
  for (auto& v : values) v = read_f64(in);
  return values;
}

void save_model(const EmbeddingModel& model, const std::string& json_path,
                const std::string& blob_path) {
  write_file(json_path, model.to_json().dump(2) + "\n");
  std::ostringstream blob;
  write_parameter_blob(blob, model.parameters());
  write_file(blob_path, blob.str());
}

EmbeddingModel load_model(const std::string& json_path, const std::string& blob_path) {
  const auto meta = nlohmann::json::parse(read_file(json_path));
  std::istringstream blob(read_file(blob_path));
  return EmbeddingModel::from_json(meta, read_parameter_blob(blob));
}

}  // namespace semcad::embedding
