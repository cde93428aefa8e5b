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

// K-means (used to seed EM and for comparison), full-covariance Gaussian
// mixtures, cluster labeling by anomaly share, and the new-point decision rule.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "semcad/common.hpp"

namespace semcad::cluster {

struct KMeansModel {
  Matrix centroids;  // K x n
  std::uint64_t seed = 0;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> inertia_trace;  // after each assignment step
};

KMeansModel kmeans_fit(const Matrix& points, int k, std::uint64_t seed, int max_iter = 300);
std::size_t kmeans_assign(const KMeansModel& model, std::span<const double> point);

struct GmmOptions {
  double reg = 1e-6;
  double tol = 1e-6;
  int max_iter = 200;
};

class GmmModel {
 public:
  static constexpr int kFormatVersion = 1;

  GmmModel() = default;
  GmmModel(std::vector<double> weights, Matrix means, std::vector<Matrix> covariances);

  std::size_t components() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return means_.cols(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Matrix& means() const noexcept { return means_; }
  const std::vector<Matrix>& covariances() const noexcept { return covariances_; }

  // log(pi_k) + log N(x; mu_k, Sigma_k) for every k.
  std::vector<double> log_weighted_densities(std::span<const double> x) const;
  // Mean per-point log-likelihood.
  double mean_log_likelihood(const Matrix& points) const;

  std::uint64_t seed = 0;
  double reg = 1e-6;
  double log_likelihood = 0.0;  // mean per point, at the final parameters
  int iterations = 0;
  // Mean log-likelihood before each M-step and at the final parameters. Not persisted.
  std::vector<double> log_likelihood_trace;

  nlohmann::json to_json() const;
  static GmmModel from_json(const nlohmann::json& j);

 private:
  void factorize();

  std::vector<double> weights_;
  Matrix means_;
  std::vector<Matrix> covariances_;
  std::vector<Matrix> cholesky_;
  std::vector<double> log_det_;
};

GmmModel gmm_fit(const Matrix& points, int k, std::uint64_t seed, GmmOptions options = {});

std::vector<double> responsibilities(const GmmModel& model, std::span<const double> point);
// Argmax responsibility; ties go to the lowest index.
std::size_t assign(const GmmModel& model, std::span<const double> point);

// Cholesky factor (lower) of a symmetric matrix; false if not positive definite.
bool cholesky(const Matrix& a, Matrix& lower);

enum class LabelRule {
  kFraction,  // anomalies / (anomalies + normals) > rho
  kOdds,      // anomalies / normals > rho
};

struct ClusterStats {
  std::size_t anomalies = 0;
  std::size_t normals = 0;
  double anomaly_fraction = 0.0;
  bool is_anomaly_cluster = false;
};

struct ClusterLabeling {
  std::vector<ClusterStats> clusters;
  double rho = 0.9;
  LabelRule rule = LabelRule::kFraction;

  // Same counts, flags recomputed for another threshold.
  ClusterLabeling with_threshold(double new_rho) const;
  std::size_t flagged_count() const;

  nlohmann::json to_json() const;
  static ClusterLabeling from_json(const nlohmann::json& j);
};

bool flag_cluster(const ClusterStats& stats, double rho, LabelRule rule);

ClusterLabeling label_clusters(const GmmModel& model, const Matrix& points,
                               std::span<const std::uint8_t> labels, double rho = 0.9,
                               LabelRule rule = LabelRule::kFraction);

enum class Decision { kNormal = 0, kAnomaly = 1 };

Decision classify(const GmmModel& model, const ClusterLabeling& labeling,
                  std::span<const double> point);
std::vector<Decision> classify_batch(const GmmModel& model, const ClusterLabeling& labeling,
                                     const Matrix& points);

}  // namespace semcad::cluster
