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

#include "semcad/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "semcad/common.hpp"

namespace semcad::pipeline {
namespace {

constexpr char kBundleMagic[8] = {'S', 'E', 'M', 'C', 'A', 'D', 'B', '1'};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

std::vector<data::Feature> parse_features(const std::vector<std::string>& names) {
  std::vector<data::Feature> out;
  for (const auto& name : names) {
    auto f = data::feature_from_name(name);
    if (!f) throw Error("config", "unknown feature '" + name + "'");
    if (std::find(out.begin(), out.end(), *f) != out.end()) {
      throw Error("config", "feature '" + name + "' listed twice");
    }
    out.push_back(*f);
  }
  return out;
}

}  // namespace

std::uint64_t PipelineConfig::stage_seed(std::string_view stage) const {
  return derive_seed(seed, stage);
}

std::vector<data::Feature> PipelineConfig::feature_list() const {
  if (features.empty()) return data::default_features();
  return parse_features(features);
}

void PipelineConfig::validate() const {
  feature_list();
  if (severity_scale.empty()) throw Error("config", "severity scale is empty");
  if (select_features && select_k < 1) throw Error("config", "select_k must be positive");
  embedding.validate();
  if (pca_rule.kind == pca::ComponentRule::Kind::kFixed && pca_rule.components < 1) {
    throw Error("config", "PCA needs at least one component");
  }
  if (pca_rule.kind == pca::ComponentRule::Kind::kVarianceThreshold &&
      !(pca_rule.threshold > 0.0 && pca_rule.threshold <= 1.0)) {
    throw Error("config", "PCA variance threshold must lie in (0, 1]");
  }
  if (clusters < 1) throw Error("config", "clusters must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw Error("config", "rho must lie in (0, 1)");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("config", "train_fraction must lie in (0, 1)");
  }
  if (!(target_precision > 0.0 && target_precision <= 1.0)) {
    throw Error("config", "target_precision must lie in (0, 1]");
  }
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json feats = nlohmann::json::array();
  for (auto f : feature_list()) feats.push_back(std::string(data::feature_name(f)));
  nlohmann::json pca_json = {{"standardize", standardize}};
  if (pca_rule.kind == pca::ComponentRule::Kind::kFixed) {
    pca_json["components"] = pca_rule.components;
  } else {
    pca_json["variance_threshold"] = pca_rule.threshold;
  }
  return {
      {"seed", seed},
      {"features", std::move(feats)},
      {"severity_scale", severity_scale},
      {"alarm_type_mapping", mapping.to_json()},
      {"csv_schema", schema.to_json()},
      {"feature_selection", {{"enabled", select_features}, {"k", select_k}}},
      {"embedding", embedding.to_json()},
      {"pca", std::move(pca_json)},
      {"gmm",
       {{"clusters", clusters}, {"reg", gmm.reg}, {"tol", gmm.tol}, {"max_iter", gmm.max_iter}}},
      {"labeling",
       {{"rho", rho}, {"rule", label_rule == cluster::LabelRule::kFraction ? "fraction" : "odds"}}},
      {"split",
       {{"mode", temporal_split ? "temporal" : "random"}, {"train_fraction", train_fraction}}},
      {"target_precision", target_precision},
      {"rf", forest.to_json()},
      {"gbt", boost.to_json()},
  };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  PipelineConfig c;
  try {
    if (!j.is_object()) throw Error("config", "configuration must be a JSON object");
    read_key(j, "seed", c.seed);
    read_key(j, "features", c.features);
    read_key(j, "severity_scale", c.severity_scale);
    if (j.contains("alarm_type_mapping")) {
      const auto& m = j.at("alarm_type_mapping");
      c.mapping = m.is_string() ? data::AlarmTypeMapping::load(m.get<std::string>())
                                : data::AlarmTypeMapping::from_json(m);
    }
    if (j.contains("csv_schema")) c.schema = data::CsvSchema::from_json(j.at("csv_schema"));
    if (j.contains("feature_selection")) {
      const auto& fs = j.at("feature_selection");
      read_key(fs, "enabled", c.select_features);
      read_key(fs, "k", c.select_k);
    }
    if (j.contains("embedding")) c.embedding = embedding::TrainConfig::from_json(j.at("embedding"));
    if (j.contains("pca")) {
      const auto& p = j.at("pca");
      read_key(p, "standardize", c.standardize);
      if (p.contains("variance_threshold") && !p.at("variance_threshold").is_null()) {
        c.pca_rule = pca::ComponentRule::variance(p.at("variance_threshold").get<double>());
      } else if (p.contains("components")) {
        c.pca_rule = pca::ComponentRule::fixed(p.at("components").get<int>());
      }
    }
    if (j.contains("gmm")) {
      const auto& g = j.at("gmm");
      read_key(g, "clusters", c.clusters);
      read_key(g, "reg", c.gmm.reg);
      read_key(g, "tol", c.gmm.tol);
      read_key(g, "max_iter", c.gmm.max_iter);
    }
    if (j.contains("labeling")) {
      const auto& l = j.at("labeling");
      read_key(l, "rho", c.rho);
      if (l.contains("rule")) {
        const auto rule = l.at("rule").get<std::string>();
        if (rule == "fraction") {
          c.label_rule = cluster::LabelRule::kFraction;
        } else if (rule == "odds") {
          c.label_rule = cluster::LabelRule::kOdds;
        } else {
          throw Error("config", "unknown labeling rule '" + rule + "'");
        }
      }
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      if (s.contains("mode")) {
        const auto mode = s.at("mode").get<std::string>();
        if (mode != "temporal" && mode != "random") {
          throw Error("config", "unknown split mode '" + mode + "'");
        }
        c.temporal_split = mode == "temporal";
      }
      read_key(s, "train_fraction", c.train_fraction);
    }
    read_key(j, "target_precision", c.target_precision);
    if (j.contains("rf")) c.forest = trees::ForestConfig::from_json(j.at("rf"));
    if (j.contains("gbt")) c.boost = trees::BoostConfig::from_json(j.at("gbt"));
  } catch (const nlohmann::json::exception& e) {
    throw Error("config", std::string("invalid configuration: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Bundle

void PipelineBundle::validate() const {
  const auto cards = encoder.cardinalities();
  if (cards != model.cardinalities()) {
    throw Error("bundle", "encoder cardinalities do not match the embedding model");
  }
  if (model.embedding_width() != pca.input_dim()) {
    throw Error("bundle", "embedding width " + std::to_string(model.embedding_width()) +
                              " does not match PCA input " + std::to_string(pca.input_dim()));
  }
  if (pca.output_dim() != gmm.dim()) {
    throw Error("bundle", "PCA output " + std::to_string(pca.output_dim()) +
                              " does not match GMM dimension " + std::to_string(gmm.dim()));
  }
  if (labeling.clusters.size() != gmm.components()) {
    throw Error("bundle", "cluster labeling does not match the GMM component count");
  }
}

Matrix PipelineBundle::embed(const data::EncodedDataset& ds) const {
  return embedding::embed_dataset(model, ds);
}

Matrix PipelineBundle::project(const data::EncodedDataset& ds) const {
  return pca::transform(pca, embed(ds));
}

ClassifyResult PipelineBundle::classify(const Matrix& points) const {
  ClassifyResult out;
  out.clusters.reserve(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const std::size_t k = cluster::assign(gmm, points.row(i));
    out.clusters.push_back(k);
    out.decisions.push_back(labeling.clusters[k].is_anomaly_cluster ? 1 : 0);
    out.scores.push_back(labeling.clusters[k].anomaly_fraction);
  }
  return out;
}

ClassifyResult PipelineBundle::classify(std::span<const data::AlarmRecord> records) const {
  if (records.empty()) return {};
  return classify(project(data::transform(records, encoder)));
}

std::string PipelineBundle::serialize() const {
  validate();
  const auto params = model.parameters();
  const auto pca_blob = pca.blob_values();
  const nlohmann::json meta = {
      {"format_version", kFormatVersion},
      {"encoder", encoder.to_json()},
      {"embedding", model.to_json()},
      {"embedding_parameter_count", params.size()},
      {"pca", pca.to_json()},
      {"pca_value_count", pca_blob.size()},
      {"gmm", gmm.to_json()},
      {"labeling", labeling.to_json()},
      {"config", config},
  };
  const std::string text = meta.dump();

  std::ostringstream out(std::ios::binary);
  out.write(kBundleMagic, sizeof(kBundleMagic));
  write_u32(out, kFormatVersion);
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  write_u64(out, params.size() + pca_blob.size());
  for (double v : params) write_f64(out, v);
  for (double v : pca_blob) write_f64(out, v);
  return std::move(out).str();
}

PipelineBundle PipelineBundle::deserialize(std::string_view bytes) {
  if (bytes.size() < sizeof(kBundleMagic) ||
      std::memcmp(bytes.data(), kBundleMagic, sizeof(kBundleMagic)) != 0) {
    throw Error("bundle", "not a SEMC-AD bundle (bad magic)");
  }
  std::istringstream in(std::string(bytes), std::ios::binary);
  in.seekg(sizeof(kBundleMagic));
  try {
    const auto version = read_u32(in);
    if (version != kFormatVersion) {
      throw Error("bundle", "unsupported bundle format_version " + std::to_string(version) +
                                " (expected " + std::to_string(kFormatVersion) + ")");
    }
    const auto len = read_u64(in);
    if (len > bytes.size()) throw Error("bundle", "truncated bundle");
    std::string text(len, '\0');
    in.read(text.data(), static_cast<std::streamsize>(len));
    if (!in) throw Error("bundle", "truncated bundle");
    const auto meta = nlohmann::json::parse(text);
    const auto count = read_u64(in);
    const auto n_params = meta.at("embedding_parameter_count").get<std::size_t>();
    const auto n_pca = meta.at("pca_value_count").get<std::size_t>();
    if (count != n_params + n_pca || count > bytes.size() / 8) {
      throw Error("bundle", "parameter blob has the wrong length");
    }
    std::vector<double> values(count);
    for (auto& v : values) v = read_f64(in);

    PipelineBundle b;
    b.encoder = data::VocabularyEncoder::from_json(meta.at("encoder"));
    b.model = embedding::EmbeddingModel::from_json(
        meta.at("embedding"), std::vector<double>(values.begin(), values.begin() + n_params));
    b.pca = pca::PcaModel::from_json(meta.at("pca"),
                                     std::span<const double>(values).subspan(n_params, n_pca));
    b.gmm = cluster::GmmModel::from_json(meta.at("gmm"));
    b.labeling = cluster::ClusterLabeling::from_json(meta.at("labeling"));
    b.config = meta.at("config");
    b.validate();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bundle", std::string("corrupt bundle metadata: ") + e.what());
  } catch (const Error& e) {
    if (e.stage() == "bundle") throw;
    throw Error("bundle", e.what());
  }
}

void PipelineBundle::save(const std::string& path) const { write_file(path, serialize()); }

PipelineBundle PipelineBundle::load(const std::string& path) {
  return deserialize(read_file(path));
}

// ---------------------------------------------------------------------------
// Training

data::VocabularyEncoder fit_encoder(std::span<const data::AlarmRecord> records,
                                    const PipelineConfig& config,
                                    std::vector<data::Feature> features) {
  return data::VocabularyEncoder::fit(records, config.mapping, config.severity_scale,
                                      std::move(features));
}

std::vector<selection::FeatureScore> select_features(std::span<const data::AlarmRecord> records,
                                                     const PipelineConfig& config, int k) {
  const auto candidates = data::candidate_features();
  if (k > static_cast<int>(candidates.size())) {
    throw Error("select-features", "k = " + std::to_string(k) + " exceeds the " +
                                       std::to_string(candidates.size()) + " candidate features");
  }
  const auto enc = fit_encoder(records, config, candidates);
  return selection::rank_features(data::transform(records, enc), k);
}

TrainOutput train(std::span<const data::AlarmRecord> records, const PipelineConfig& config) {
  config.validate();
  if (records.empty()) throw Error("preprocess", "training set is empty");
  TrainOutput out;
  Stopwatch clock;

  auto features = config.feature_list();
  auto enc = fit_encoder(records, config, features);
  auto ds = data::transform(records, enc);
  out.timings.push_back({"preprocess", clock.lap()});

  if (config.select_features) {
    out.selection = select_features(records, config, config.select_k);
    features.clear();
    for (const auto& s : out.selection) {
      if (s.selected) features.push_back(*data::feature_from_name(s.feature));
    }
    enc = fit_encoder(records, config, features);
    ds = data::transform(records, enc);
    out.timings.push_back({"select-features", clock.lap()});
  }
  out.labels = ds.labels;

  auto emb_config = config.embedding;
  emb_config.seed = config.stage_seed("embedding");
  auto model = embedding::EmbeddingModel::build(ds.cardinalities, emb_config);
  auto trained = embedding::train(std::move(model), ds, emb_config);
  out.loss_trace = std::move(trained.loss_trace);
  out.anomaly_weight = trained.anomaly_weight;
  out.timings.push_back({"embedding", clock.lap()});

  const Matrix embedded = embedding::embed_dataset(trained.model, ds);
  auto pca_model = pca::fit(embedded, config.pca_rule, config.standardize);
  out.points = pca::transform(pca_model, embedded);
  out.timings.push_back({"pca", clock.lap()});

  if (static_cast<std::size_t>(config.clusters) > out.points.rows()) {
    throw Error("clustering", "more clusters than training rows");
  }
  auto gmm = cluster::gmm_fit(out.points, config.clusters, config.stage_seed("gmm"), config.gmm);
  out.timings.push_back({"clustering", clock.lap()});

  auto labeling = cluster::label_clusters(gmm, out.points, ds.labels, config.rho, config.label_rule);
  out.assignments.reserve(out.points.rows());
  for (std::size_t i = 0; i < out.points.rows(); ++i) {
    out.assignments.push_back(cluster::assign(gmm, out.points.row(i)));
  }
  out.timings.push_back({"labeling", clock.lap()});

  PipelineConfig effective = config;
  effective.features.clear();
  for (auto f : features) effective.features.emplace_back(data::feature_name(f));
  out.bundle.encoder = std::move(enc);
  out.bundle.model = std::move(trained.model);
  out.bundle.pca = std::move(pca_model);
  out.bundle.gmm = std::move(gmm);
  out.bundle.labeling = std::move(labeling);
  out.bundle.config = effective.to_json();
  out.bundle.validate();
  return out;
}

SemcadEvaluation evaluate_semcad(const PipelineBundle& bundle,
                                 std::span<const data::AlarmRecord> records) {
  if (records.empty()) throw Error("evaluate", "evaluation set is empty");
  SemcadEvaluation out;
  const auto ds = data::transform(records, bundle.encoder);
  out.result = bundle.classify(bundle.project(ds));
  out.report = eval::precision_recall(out.result.decisions, ds.labels, "SEMC-AD", bundle.labeling.rho);
  if (std::find(ds.labels.begin(), ds.labels.end(), 1) != ds.labels.end()) {
    out.rho_curve = eval::pr_curve(out.result.scores, ds.labels);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Baselines

double BaselineModel::score(std::span<const std::int32_t> codes) const {
  return method == "rf" ? trees::rf_predict(forest, codes) : trees::gbt_predict(boost, codes);
}

std::vector<double> BaselineModel::score(std::span<const data::AlarmRecord> records) const {
  std::vector<double> out;
  if (records.empty()) return out;
  const auto ds = data::transform(records, encoder);
  out.reserve(ds.rows);
  for (std::size_t i = 0; i < ds.rows; ++i) out.push_back(score(ds.row(i)));
  return out;
}

nlohmann::json BaselineModel::to_json() const {
  return {{"format_version", kFormatVersion},
          {"method", method},
          {"encoder", encoder.to_json()},
          {"model", method == "rf" ? forest.to_json() : boost.to_json()},
          {"threshold", threshold},
          {"target_precision", target_precision}};
}

BaselineModel BaselineModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw Error("baseline", "unsupported baseline format_version " +
                                  j.at("format_version").dump());
    }
    BaselineModel m;
    m.method = j.at("method").get<std::string>();
    m.encoder = data::VocabularyEncoder::from_json(j.at("encoder"));
    if (m.method == "rf") {
      m.forest = trees::ForestModel::from_json(j.at("model"));
    } else if (m.method == "gbt") {
      m.boost = trees::BoostedModel::from_json(j.at("model"));
    } else {
      throw Error("baseline", "unknown baseline method '" + m.method + "'");
    }
    m.threshold = j.at("threshold").get<double>();
    m.target_precision = j.at("target_precision").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error("baseline", std::string("corrupt baseline model: ") + e.what());
  }
}

BaselineModel train_baseline(std::span<const data::AlarmRecord> records, std::string_view method,
                             const PipelineConfig& config) {
  if (method != "rf" && method != "gbt") {
    throw Error("baseline", "unknown baseline method '" + std::string(method) + "' (use rf or gbt)");
  }
  config.validate();
  if (records.empty()) throw Error("baseline", "training set is empty");
  BaselineModel m;
  m.method = std::string(method);
  m.target_precision = config.target_precision;
  m.encoder = fit_encoder(records, config, config.feature_list());
  const auto ds = data::transform(records, m.encoder);
  if (m.method == "rf") {
    auto fc = config.forest;
    fc.seed = config.stage_seed("rf");
    m.forest = trees::rf_fit(ds, fc);
  } else {
    m.boost = trees::gbt_fit(ds, config.boost);
  }
  return m;
}

BaselineEvaluation evaluate_baseline(const BaselineModel& model,
                                     std::span<const data::AlarmRecord> records,
                                     double target_precision) {
  if (records.empty()) throw Error("evaluate", "evaluation set is empty");
  BaselineEvaluation out;
  out.scores = model.score(records);
  std::vector<std::uint8_t> labels;
  labels.reserve(records.size());
  for (const auto& r : records) labels.push_back(static_cast<std::uint8_t>(r.label));
  out.curve = eval::pr_curve(out.scores, labels);
  out.tuned = eval::tune_threshold(out.scores, labels, target_precision,
                                   model.method == "rf" ? "RF" : "GBT");
  return out;
}

// ---------------------------------------------------------------------------
// Plot data

namespace {
double coord(const Matrix& points, std::size_t i, std::size_t c) {
  return c < points.cols() ? points(i, c) : 0.0;
}
}  // namespace

std::string scatter_csv(const Matrix& points, std::span<const std::uint8_t> labels) {
  std::string out = "pc1,pc2,label\n";
  for (std::size_t i = 0; i < points.rows(); ++i) {
    out += format_double(coord(points, i, 0)) + "," + format_double(coord(points, i, 1)) + "," +
           std::to_string(labels[i]) + "\n";
  }
  return out;
}

std::string cluster_csv(const Matrix& points, std::span<const std::uint8_t> labels,
                        std::span<const std::size_t> clusters,
                        const cluster::ClusterLabeling& labeling) {
  std::string out = "pc1,pc2,label,cluster,flagged\n";
  for (std::size_t i = 0; i < points.rows(); ++i) {
    out += format_double(coord(points, i, 0)) + "," + format_double(coord(points, i, 1)) + "," +
           std::to_string(labels[i]) + "," + std::to_string(clusters[i]) + "," +
           (labeling.clusters[clusters[i]].is_anomaly_cluster ? "1" : "0") + "\n";
  }
  return out;
}

std::string scatter_svg(const Matrix& points, std::span<const std::uint8_t> labels) {
  constexpr double kSize = 600.0, kMargin = 20.0;
  double lo[2] = {0.0, 0.0}, hi[2] = {1.0, 1.0};
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < points.rows(); ++i) {
      const double v = coord(points, i, c);
      if (i == 0 || v < lo[c]) lo[c] = v;
      if (i == 0 || v > hi[c]) hi[c] = v;
    }
    if (hi[c] - lo[c] < 1e-12) hi[c] = lo[c] + 1.0;
  }
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\">\n"
      "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  char buf[128];
  // Normals first so anomalies stay visible on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (labels[i] != pass) continue;
      const double x = kMargin + (coord(points, i, 0) - lo[0]) / (hi[0] - lo[0]) * (kSize - 2 * kMargin);
      const double y = kSize - kMargin - (coord(points, i, 1) - lo[1]) / (hi[1] - lo[1]) * (kSize - 2 * kMargin);
      std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\" fill=\"%s\"/>\n", x,
                    y, pass ? "#d62728" : "#1f77b4");
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace semcad::pipeline
