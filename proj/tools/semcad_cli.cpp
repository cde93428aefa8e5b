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

// semcad: batch command-line front end.
//
// Configuration precedence is flags > config file > built-in defaults. The
// config file comes from --config or, failing that, $SEMCAD_CONFIG. Failures
// print one line, `stage: message`, and exit nonzero.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "semcad/common.hpp"
#include "semcad/pipeline.hpp"
#include "semcad/synth.hpp"

namespace {

using namespace semcad;
using nlohmann::json;

constexpr const char* kConfigEnv = "SEMCAD_CONFIG";

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

json load_config_json(const Globals& g) {
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env != nullptr) path = env;
  }
  if (path.empty()) return json::object();
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error("config", "cannot parse '" + path + "': " + e.what());
  }
}

pipeline::PipelineConfig pipeline_config(const Globals& g, const json& raw) {
  auto c = pipeline::PipelineConfig::from_json(raw);
  if (g.seed) c.seed = *g.seed;
  return c;
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

bool is_bundle(const std::string& path) {
  const std::string bytes = read_file(path);
  return bytes.size() >= 8 && std::memcmp(bytes.data(), "SEMCADB1", 8) == 0;
}

std::vector<std::uint8_t> labels_of(std::span<const data::AlarmRecord> records) {
  std::vector<std::uint8_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(static_cast<std::uint8_t>(r.label));
  return out;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::optional<std::size_t> rows;
  std::optional<double> anomaly_rate;
  std::optional<int> signatures;
  std::optional<double> strength;
};

int run_synth(const Globals& g, const SynthArgs& a) {
  const json raw = load_config_json(g);
  synth::SynthConfig c = raw.contains("synth") ? synth::SynthConfig::from_json(raw.at("synth"))
                                               : synth::SynthConfig{};
  if (a.rows) c.rows = *a.rows;
  if (a.anomaly_rate) c.anomaly_rate = *a.anomaly_rate;
  if (a.signatures) c.signatures = *a.signatures;
  if (a.strength) c.strength = *a.strength;
  if (g.seed) c.seed = *g.seed;
  const auto records = synth::generate(c);
  write_file(a.out, data::write_alarm_csv(records));
  write_json(a.out + ".config.json", {{"synth", c.to_json()}});
  std::size_t anomalies = 0;
  for (const auto& r : records) anomalies += r.label;
  std::printf("wrote %zu rows (%zu anomalies) to %s\n", records.size(), anomalies, a.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
  std::string input;
  std::string train_out;
  std::string test_out;
  std::string encoder_out;
  std::optional<std::string> split;
  std::optional<double> train_fraction;
};

int run_preprocess(const Globals& g, const PreprocessArgs& a) {
  json raw = load_config_json(g);
  auto c = pipeline_config(g, raw);
  if (a.split) c.temporal_split = *a.split == "temporal";
  if (a.train_fraction) c.train_fraction = *a.train_fraction;
  c.validate();
  auto records = data::ingest_csv(a.input, c.schema);
  const std::size_t total = records.size();
  auto [train, test] = c.temporal_split
                           ? data::split_temporal(std::move(records), c.train_fraction)
                           : data::split_random(std::move(records), c.train_fraction,
                                                c.stage_seed("split"));
  write_file(a.train_out, data::write_alarm_csv(train));
  write_file(a.test_out, data::write_alarm_csv(test));
  if (!a.encoder_out.empty()) {
    if (train.empty()) throw Error("preprocess", "training split is empty");
    const auto enc = pipeline::fit_encoder(train, c, c.feature_list());
    write_json(a.encoder_out, {{"encoder", enc.to_json()}, {"config", c.to_json()}});
  }
  std::printf("%zu rows -> %zu train, %zu test (%s split)\n", total, train.size(), test.size(),
              c.temporal_split ? "temporal" : "random");
  return 0;
}

// ---------------------------------------------------------------------------

struct SelectArgs {
  std::string input;
  std::string out;
  std::optional<int> k;
};

int run_select(const Globals& g, const SelectArgs& a) {
  auto c = pipeline_config(g, load_config_json(g));
  const int k = a.k.value_or(c.select_k);
  const auto records = data::ingest_csv(a.input, c.schema);
  if (records.empty()) throw Error("select-features", "input has no rows");
  const auto scores = pipeline::select_features(records, c, k);
  const std::string csv = selection::scores_to_csv(scores);
  if (a.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(a.out, csv);
    for (const auto& s : scores) {
      std::printf("%-18s U=%.6f chi2=%.3f dof=%d%s\n", s.feature.c_str(), s.theils_u,
                  s.chi_square, s.dof, s.selected ? "  [selected]" : "");
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string bundle;
  std::string spectrum_out;
  std::string scatter_out;
  std::string clusters_out;
  std::string svg_out;
  std::optional<int> epochs;
  std::optional<int> clusters;
  std::optional<double> rho;
  std::optional<int> components;
  std::optional<double> variance_threshold;
  bool no_standardize = false;
  bool select = false;
  std::optional<int> k;
};

int run_train(const Globals& g, const TrainArgs& a) {
  auto c = pipeline_config(g, load_config_json(g));
  if (a.epochs) c.embedding.epochs = *a.epochs;
  if (a.clusters) c.clusters = *a.clusters;
  if (a.rho) c.rho = *a.rho;
  if (a.components) c.pca_rule = pca::ComponentRule::fixed(*a.components);
  if (a.variance_threshold) c.pca_rule = pca::ComponentRule::variance(*a.variance_threshold);
  if (a.no_standardize) c.standardize = false;
  if (a.select) c.select_features = true;
  if (a.k) c.select_k = *a.k;
  c.validate();

  const auto records = data::ingest_csv(a.input, c.schema);
  auto out = pipeline::train(records, c);
  out.bundle.save(a.bundle);

  const std::string stem = std::filesystem::path(a.bundle).replace_extension().string();
  write_file(a.spectrum_out.empty() ? stem + ".spectrum.csv" : a.spectrum_out,
             pca::spectrum_to_csv(pca::variance_spectrum(
                 out.bundle.pca, std::min<std::size_t>(50, out.bundle.pca.input_dim()))));
  write_file(a.scatter_out.empty() ? stem + ".scatter.csv" : a.scatter_out,
             pipeline::scatter_csv(out.points, out.labels));
  write_file(a.clusters_out.empty() ? stem + ".clusters.csv" : a.clusters_out,
             pipeline::cluster_csv(out.points, out.labels, out.assignments, out.bundle.labeling));
  if (!a.svg_out.empty()) write_file(a.svg_out, pipeline::scatter_svg(out.points, out.labels));

  std::printf("embedding width D = %zu, anomaly weight %.4g, final loss %.6f\n",
              out.bundle.model.embedding_width(), out.anomaly_weight,
              out.loss_trace.empty() ? 0.0 : out.loss_trace.back());
  for (std::size_t k = 0; k < out.bundle.labeling.clusters.size(); ++k) {
    const auto& s = out.bundle.labeling.clusters[k];
    std::printf("cluster %zu: %zu anomalies, %zu normals, fraction %.4f%s\n", k, s.anomalies,
                s.normals, s.anomaly_fraction, s.is_anomaly_cluster ? "  [anomaly]" : "");
  }
  double total = 0.0;
  for (const auto& t : out.timings) {
    std::printf("stage %-16s %8.3f s\n", t.stage.c_str(), t.seconds);
    total += t.seconds;
  }
  std::printf("stage %-16s %8.3f s\n", "total", total);
  std::printf("wrote %s\n", a.bundle.c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string bundle;
  std::string input;
  std::string out;
};

int run_classify(const Globals&, const ClassifyArgs& a) {
  const auto bundle = pipeline::PipelineBundle::load(a.bundle);
  data::CsvSchema schema;
  if (bundle.config.contains("csv_schema")) {
    schema = data::CsvSchema::from_json(bundle.config.at("csv_schema"));
  }
  const auto records = data::ingest_csv(a.input, schema, {.require_label = false});
  const auto result = bundle.classify(records);
  std::string csv = "row_id,cluster,decision\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    csv += std::to_string(i + 1) + "," + std::to_string(result.clusters[i]) + "," +
           (result.decisions[i] ? "anomaly" : "normal") + "\n";
  }
  if (a.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(a.out, csv);
    std::size_t flagged = 0;
    for (auto d : result.decisions) flagged += d;
    std::printf("classified %zu rows, %zu anomalies\n", records.size(), flagged);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string model;
  std::string input;
  std::string report_out;
  std::string curve_out;
  double target_precision = 0.6;
};

json semcad_report(const pipeline::PipelineBundle& bundle, std::span<const data::AlarmRecord> records,
                   double target_precision, std::vector<eval::PrPoint>& curve, std::string& text) {
  const auto ev = pipeline::evaluate_semcad(bundle, records);
  curve = ev.rho_curve;
  text = eval::report_to_text(ev.report);
  json j = {{"method", "SEMC-AD"},
            {"report", ev.report.to_json()},
            {"target_precision", target_precision},
            {"config", bundle.config}};
  json sweep = json::array();
  for (const auto& p : curve) {
    sweep.push_back({{"min_cluster_fraction", p.threshold},
                     {"precision", p.precision},
                     {"recall", p.recall}});
  }
  j["rho_sweep"] = std::move(sweep);
  return j;
}

int run_evaluate(const Globals&, const EvaluateArgs& a) {
  std::vector<eval::PrPoint> curve;
  std::string text;
  json report;
  if (is_bundle(a.model)) {
    const auto bundle = pipeline::PipelineBundle::load(a.model);
    data::CsvSchema schema;
    if (bundle.config.contains("csv_schema")) {
      schema = data::CsvSchema::from_json(bundle.config.at("csv_schema"));
    }
    const auto records = data::ingest_csv(a.input, schema);
    report = semcad_report(bundle, records, a.target_precision, curve, text);
  } else {
    json j;
    try {
      j = json::parse(read_file(a.model));
    } catch (const json::exception& e) {
      throw Error("evaluate", "model file is neither a bundle nor a baseline JSON: " +
                                  std::string(e.what()));
    }
    const auto model = pipeline::BaselineModel::from_json(j.at("model"));
    data::CsvSchema schema;
    pipeline::PipelineConfig config;
    if (j.contains("config")) {
      config = pipeline::PipelineConfig::from_json(j.at("config"));
      schema = config.schema;
    }
    const auto records = data::ingest_csv(a.input, schema);
    const auto ev = pipeline::evaluate_baseline(model, records, a.target_precision);
    curve = ev.curve;
    text = eval::report_to_text(ev.tuned.report);
    report = {{"method", model.method},
              {"report", ev.tuned.report.to_json()},
              {"threshold", ev.tuned.threshold},
              {"target_precision", a.target_precision},
              {"config", j.value("config", json::object())}};
  }
  std::fputs(text.c_str(), stdout);
  if (!a.report_out.empty()) write_json(a.report_out, report);
  if (!a.curve_out.empty()) write_file(a.curve_out, eval::pr_curve_to_csv(curve));
  return 0;
}

// ---------------------------------------------------------------------------

struct BaselineArgs {
  std::string method;
  std::string train;
  std::string test;
  std::string model_out;
  std::string report_out;
  std::string curve_out;
  std::optional<double> target_precision;
  // Forest
  std::optional<int> trees;
  std::optional<int> max_depth;
  std::optional<int> min_leaf;
  std::optional<int> features_per_split;
  std::optional<double> anomaly_weight;
  bool no_bootstrap = false;
  // Boosting
  std::optional<int> rounds;
  std::optional<double> learning_rate;
  std::optional<double> lambda;
};

int run_baseline(const Globals& g, const BaselineArgs& a) {
  auto c = pipeline_config(g, load_config_json(g));
  if (a.target_precision) c.target_precision = *a.target_precision;
  // --max-depth and --min-leaf apply to whichever method runs.
  if (a.trees) c.forest.trees = *a.trees;
  if (a.features_per_split) c.forest.features_per_split = *a.features_per_split;
  if (a.anomaly_weight) c.forest.anomaly_weight = *a.anomaly_weight;
  if (a.no_bootstrap) c.forest.bootstrap = false;
  if (a.rounds) c.boost.rounds = *a.rounds;
  if (a.learning_rate) c.boost.learning_rate = *a.learning_rate;
  if (a.lambda) c.boost.lambda = *a.lambda;
  if (a.max_depth) (a.method == "rf" ? c.forest.max_depth : c.boost.max_depth) = *a.max_depth;
  if (a.min_leaf) {
    (a.method == "rf" ? c.forest.min_samples_leaf : c.boost.min_samples_leaf) = *a.min_leaf;
  }
  c.validate();
  const auto train = data::ingest_csv(a.train, c.schema);
  const auto test = data::ingest_csv(a.test, c.schema);
  auto model = pipeline::train_baseline(train, a.method, c);
  const auto ev = pipeline::evaluate_baseline(model, test, c.target_precision);
  model.threshold = ev.tuned.threshold;

  const json cfg = c.to_json();
  if (!a.model_out.empty()) write_json(a.model_out, {{"model", model.to_json()}, {"config", cfg}});
  const json report = {{"method", a.method},
                       {"report", ev.tuned.report.to_json()},
                       {"threshold", ev.tuned.threshold},
                       {"target_precision", c.target_precision},
                       {"hyperparameters", a.method == "rf" ? c.forest.to_json() : c.boost.to_json()},
                       {"config", cfg}};
  if (!a.report_out.empty()) write_json(a.report_out, report);
  if (!a.curve_out.empty()) write_file(a.curve_out, eval::pr_curve_to_csv(ev.curve));
  std::fputs(eval::report_to_text(ev.tuned.report).c_str(), stdout);
  std::printf("threshold %s for target precision %s\n", format_double(ev.tuned.threshold).c_str(),
              format_double(c.target_precision).c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct CurveArgs {
  std::string model;
  std::string input;
  std::string out;
};

int run_pr_curve(const Globals&, const CurveArgs& a) {
  std::vector<eval::PrPoint> curve;
  if (is_bundle(a.model)) {
    const auto bundle = pipeline::PipelineBundle::load(a.model);
    data::CsvSchema schema;
    if (bundle.config.contains("csv_schema")) {
      schema = data::CsvSchema::from_json(bundle.config.at("csv_schema"));
    }
    const auto records = data::ingest_csv(a.input, schema);
    curve = pipeline::evaluate_semcad(bundle, records).rho_curve;
    if (curve.empty()) throw Error("evaluate", "PR curve needs at least one positive label");
  } else {
    const json j = json::parse(read_file(a.model));
    const auto model = pipeline::BaselineModel::from_json(j.at("model"));
    data::CsvSchema schema;
    if (j.contains("config")) schema = pipeline::PipelineConfig::from_json(j.at("config")).schema;
    const auto records = data::ingest_csv(a.input, schema);
    curve = eval::pr_curve(model.score(records), labels_of(records));
  }
  const std::string csv = eval::pr_curve_to_csv(curve);
  if (a.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(a.out, csv);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string bundle;
  std::string out;
  std::size_t k = 50;
};

int run_spectrum(const Globals&, const SpectrumArgs& a) {
  const auto bundle = pipeline::PipelineBundle::load(a.bundle);
  const std::size_t k = std::min(a.k, bundle.pca.input_dim());
  const std::string csv = pca::spectrum_to_csv(pca::variance_spectrum(bundle.pca, k));
  if (a.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(a.out, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SEMC-AD: embedding + PCA + GMM anomaly detection for alarm logs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path,
                 std::string("JSON configuration file (default: $") + kConfigEnv + ")");
  app.add_option("--seed", g.seed, "Master seed; every stage derives its own from it");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled alarm log");
  synth_cmd->add_option("--out,-o", synth_args.out, "Output CSV")->required();
  synth_cmd->add_option("--rows", synth_args.rows, "Number of rows");
  synth_cmd->add_option("--anomaly-rate", synth_args.anomaly_rate, "Anomaly fraction in (0, 0.5)");
  synth_cmd->add_option("--signatures", synth_args.signatures, "Number of planted signatures");
  synth_cmd->add_option("--strength", synth_args.strength, "Signature strength in [0, 1]");

  PreprocessArgs pre_args;
  auto* pre_cmd = app.add_subcommand("preprocess", "Validate a CSV and split it into train/test");
  pre_cmd->add_option("--input,-i", pre_args.input, "Labeled input CSV")->required();
  pre_cmd->add_option("--train-out", pre_args.train_out, "Training split CSV")->required();
  pre_cmd->add_option("--test-out", pre_args.test_out, "Test split CSV")->required();
  pre_cmd->add_option("--encoder-out", pre_args.encoder_out, "Write the fitted vocabulary as JSON");
  pre_cmd->add_option("--split", pre_args.split, "temporal or random")
      ->check(CLI::IsMember({"temporal", "random"}));
  pre_cmd->add_option("--train-fraction", pre_args.train_fraction, "Share of rows used to train");

  SelectArgs sel_args;
  auto* sel_cmd = app.add_subcommand("select-features", "Rank candidate features against the label");
  sel_cmd->add_option("--input,-i", sel_args.input, "Labeled input CSV")->required();
  sel_cmd->add_option("--out,-o", sel_args.out, "Scores CSV (default: stdout)");
  sel_cmd->add_option("--k", sel_args.k, "Number of features to keep");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a SEMC-AD bundle");
  train_cmd->add_option("--input,-i", train_args.input, "Labeled training CSV")->required();
  train_cmd->add_option("--bundle,-o", train_args.bundle, "Output bundle file")->required();
  train_cmd->add_option("--spectrum-out", train_args.spectrum_out, "Variance spectrum CSV");
  train_cmd->add_option("--scatter-out", train_args.scatter_out, "pc1,pc2,label CSV");
  train_cmd->add_option("--clusters-out", train_args.clusters_out, "Cluster assignment CSV");
  train_cmd->add_option("--svg-out", train_args.svg_out, "Scatter plot as SVG");
  train_cmd->add_option("--epochs", train_args.epochs, "Embedding training epochs");
  train_cmd->add_option("--clusters", train_args.clusters, "Number of GMM components");
  train_cmd->add_option("--rho", train_args.rho, "Anomaly-cluster threshold in (0, 1)");
  auto* comp_opt = train_cmd->add_option("--pca-components", train_args.components,
                                         "Fixed number of principal components");
  train_cmd
      ->add_option("--variance-threshold", train_args.variance_threshold,
                   "Keep the fewest components reaching this variance share")
      ->excludes(comp_opt);
  train_cmd->add_flag("--no-standardize", train_args.no_standardize,
                      "Run PCA on centered but unscaled embeddings");
  train_cmd->add_flag("--select-features", train_args.select,
                      "Choose features by Theil's U before training");
  train_cmd->add_option("--k", train_args.k, "Features kept by --select-features");

  ClassifyArgs cls_args;
  auto* cls_cmd = app.add_subcommand("classify", "Classify alarm rows with a bundle");
  cls_cmd->add_option("--bundle,-b", cls_args.bundle, "Bundle file")->required();
  cls_cmd->add_option("--input,-i", cls_args.input, "Input CSV (label optional)")->required();
  cls_cmd->add_option("--out,-o", cls_args.out, "Decisions CSV (default: stdout)");

  EvaluateArgs ev_args;
  auto* ev_cmd = app.add_subcommand("evaluate", "Report precision and recall on a labeled CSV");
  ev_cmd->add_option("--model,-m", ev_args.model, "Bundle or baseline model file")->required();
  ev_cmd->add_option("--input,-i", ev_args.input, "Labeled CSV")->required();
  ev_cmd->add_option("--target-precision", ev_args.target_precision,
                     "Anomaly precision the baseline threshold must reach")
      ->capture_default_str();
  ev_cmd->add_option("--report-out", ev_args.report_out, "JSON report");
  ev_cmd->add_option("--curve-out", ev_args.curve_out, "PR curve CSV");

  BaselineArgs base_args;
  auto* base_cmd = app.add_subcommand("baseline", "Train and evaluate a tree baseline");
  base_cmd->add_option("--method", base_args.method, "rf or gbt")
      ->required()
      ->check(CLI::IsMember({"rf", "gbt"}));
  base_cmd->add_option("--train", base_args.train, "Labeled training CSV")->required();
  base_cmd->add_option("--test", base_args.test, "Labeled test CSV")->required();
  base_cmd->add_option("--model-out", base_args.model_out, "Model JSON");
  base_cmd->add_option("--report-out", base_args.report_out, "JSON report");
  base_cmd->add_option("--curve-out", base_args.curve_out, "PR curve CSV");
  base_cmd->add_option("--target-precision", base_args.target_precision,
                       "Anomaly precision to tune for (default 0.6)");
  base_cmd->add_option("--trees", base_args.trees, "rf: number of trees (default 200)");
  base_cmd->add_option("--max-depth", base_args.max_depth, "Tree depth limit (rf 12, gbt 4)");
  base_cmd->add_option("--min-leaf", base_args.min_leaf, "Minimum rows per leaf (rf 5, gbt 1)");
  base_cmd->add_option("--features-per-split", base_args.features_per_split,
                       "rf: candidate features per node; 0 = ceil(sqrt(F))");
  base_cmd->add_option("--anomaly-weight", base_args.anomaly_weight,
                       "rf: class weight of anomalies in Gini counts (default 1)");
  base_cmd->add_flag("--no-bootstrap", base_args.no_bootstrap, "rf: grow every tree on all rows");
  base_cmd->add_option("--rounds", base_args.rounds, "gbt: boosting rounds (default 200)");
  base_cmd->add_option("--learning-rate", base_args.learning_rate, "gbt: shrinkage (default 0.1)");
  base_cmd->add_option("--lambda", base_args.lambda, "gbt: L2 leaf penalty (default 1)");

  CurveArgs curve_args;
  auto* curve_cmd = app.add_subcommand("pr-curve", "Emit the precision-recall curve of a model");
  curve_cmd->add_option("--model,-m", curve_args.model, "Bundle or baseline model file")->required();
  curve_cmd->add_option("--input,-i", curve_args.input, "Labeled CSV")->required();
  curve_cmd->add_option("--out,-o", curve_args.out, "PR curve CSV (default: stdout)");

  SpectrumArgs spec_args;
  auto* spec_cmd = app.add_subcommand("spectrum", "Emit the PCA variance spectrum of a bundle");
  spec_cmd->add_option("--bundle,-b", spec_args.bundle, "Bundle file")->required();
  spec_cmd->add_option("--k", spec_args.k, "Number of leading components")->capture_default_str();
  spec_cmd->add_option("--out,-o", spec_args.out, "Spectrum CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::fprintf(stderr, "usage: %s\n", msg.c_str());
    return 2;
  }

  try {
    if (*synth_cmd) return run_synth(g, synth_args);
    if (*pre_cmd) return run_preprocess(g, pre_args);
    if (*sel_cmd) return run_select(g, sel_args);
    if (*train_cmd) return run_train(g, train_args);
    if (*cls_cmd) return run_classify(g, cls_args);
    if (*ev_cmd) return run_evaluate(g, ev_args);
    if (*base_cmd) return run_baseline(g, base_args);
    if (*curve_cmd) return run_pr_curve(g, curve_args);
    if (*spec_cmd) return run_spectrum(g, spec_args);
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::fprintf(stderr, "%s: %s\n", e.stage().c_str(), msg.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal: %s\n", e.what());
    return 1;
  }
  return 0;
}
