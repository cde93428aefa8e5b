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

#include "semcad/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semcad/pca.hpp"

namespace semcad::cluster {
namespace {

constexpr const char* kStage = "gmm";

void check_finite(const Matrix& points, const char* stage) {
  for (double v : points.data()) {
    if (!std::isfinite(v)) throw Error(stage, "non-finite input point");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(const Matrix& centroids, std::span<const double> p, double* dist = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centroids.rows(); ++k) {
    const double d = squared_distance(centroids.row(k), p);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Raises every eigenvalue to at least `floor`, then symmetrizes.
Matrix eigen_floor(const Matrix& a, double floor) {
  const auto eig = pca::symmetric_eigen(a);
  const std::size_t n = a.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = std::max(eig.values[k], floor);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out(i, j) += lambda * eig.vectors(k, i) * eig.vectors(k, j);
    }
  }
  return out;
}

Matrix sample_covariance(const Matrix& points, std::span<const double> mean,
                         std::span<const double> weights, double total_weight) {
  const std::size_t n = points.cols();
  Matrix cov(n, n);
  for (std::size_t r = 0; r < points.rows(); ++r) {
    const double w = weights.empty() ? 1.0 : weights[r];
    if (w == 0.0) continue;
    const auto p = points.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const double di = w * (p[i] - mean[i]);
      for (std::size_t j = i; j < n; ++j) cov(i, j) += di * (p[j] - mean[j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cov(i, j) /= total_weight;
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

void add_ridge(Matrix& cov, double reg) {
  for (std::size_t i = 0; i < cov.rows(); ++i) cov(i, i) += reg;
}

}  // namespace

// ---------------------------------------------------------------------------
// K-means

KMeansModel kmeans_fit(const Matrix& points, int k, std::uint64_t seed, int max_iter) {
  if (k < 1) throw Error("kmeans", "K must be at least 1");
  const std::size_t m = points.rows();
  const auto kk = static_cast<std::size_t>(k);
  if (m < kk) throw Error("kmeans", "fewer points (" + std::to_string(m) + ") than clusters");
  check_finite(points, "kmeans");

  KMeansModel model;
  model.seed = seed;
  model.centroids = Matrix(kk, points.cols());
  Rng rng(seed);

  // k-means++ seeding.
  std::vector<double> d2(m, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.below(m));
  std::copy(points.row(first).begin(), points.row(first).end(), model.centroids.row(0).begin());
  for (std::size_t c = 1; c < kk; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), model.centroids.row(c - 1)));
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = m - 1;
      for (std::size_t i = 0; i < m; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(m));
    }
    std::copy(points.row(pick).begin(), points.row(pick).end(), model.centroids.row(c).begin());
  }

  std::vector<std::size_t> assignment(m, kk);
  std::vector<double> dist(m);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t a = nearest(model.centroids, points.row(i), &dist[i]);
      changed |= a != assignment[i];
      assignment[i] = a;
      inertia += dist[i];
    }
    model.inertia_trace.push_back(inertia);
    model.inertia = inertia;
    model.iterations = iter + 1;
    if (!changed) break;

    Matrix sums(kk, points.cols());
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t i = 0; i < m; ++i) {
      auto dst = sums.row(assignment[i]);
      const auto p = points.row(i);
      for (std::size_t j = 0; j < p.size(); ++j) dst[j] += p[j];
      ++counts[assignment[i]];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        const auto far = static_cast<std::size_t>(
            std::max_element(dist.begin(), dist.end()) - dist.begin());
        std::copy(points.row(far).begin(), points.row(far).end(), model.centroids.row(c).begin());
        dist[far] = 0.0;
        continue;
      }
      for (std::size_t j = 0; j < points.cols(); ++j) {
        model.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
      }
    }
  }
  return model;
}

std::size_t kmeans_assign(const KMeansModel& model, std::span<const double> point) {
  if (point.size() != model.centroids.cols()) throw Error("kmeans", "point dimension mismatch");
  return nearest(model.centroids, point);
}

// ---------------------------------------------------------------------------
// Gaussian mixture

bool cholesky(const Matrix& a, Matrix& lower) {
  const std::size_t n = a.rows();
  lower = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = a(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= lower(j, k) * lower(j, k);
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    lower(j, j) = std::sqrt(s);
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = a(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= lower(i, k) * lower(j, k);
      lower(i, j) = t / lower(j, j);
    }
  }
  return true;
}

GmmModel::GmmModel(std::vector<double> weights, Matrix means, std::vector<Matrix> covariances)
    : weights_(std::move(weights)), means_(std::move(means)), covariances_(std::move(covariances)) {
  if (weights_.size() != means_.rows() || weights_.size() != covariances_.size()) {
    throw Error(kStage, "mixture component counts disagree");
  }
  factorize();
}

void GmmModel::factorize() {
  cholesky_.assign(covariances_.size(), Matrix());
  log_det_.assign(covariances_.size(), 0.0);
  for (std::size_t k = 0; k < covariances_.size(); ++k) {
    Matrix& cov = covariances_[k];
    if (cov.rows() != dim() || cov.cols() != dim()) throw Error(kStage, "covariance shape mismatch");
    if (!cholesky(cov, cholesky_[k])) {
      cov = eigen_floor(cov, std::max(reg, 1e-12));
      if (!cholesky(cov, cholesky_[k])) {
        throw Error(kStage, "covariance of component " + std::to_string(k) +
                                " is not positive definite after repair");
      }
    }
    double ld = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) ld += 2.0 * std::log(cholesky_[k](i, i));
    log_det_[k] = ld;
  }
}

std::vector<double> GmmModel::log_weighted_densities(std::span<const double> x) const {
  const std::size_t n = dim();
  if (x.size() != n) {
    throw Error(kStage, "point has dimension " + std::to_string(x.size()) + ", model expects " +
                            std::to_string(n));
  }
  const double log_2pi = std::log(2.0 * M_PI);
  std::vector<double> out(components());
  std::vector<double> y(n);
  for (std::size_t k = 0; k < components(); ++k) {
    // Solve L y = x - mu by forward substitution.
    const Matrix& l = cholesky_[k];
    double maha = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i] - means_(k, i);
      for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * y[j];
      y[i] = s / l(i, i);
      maha += y[i] * y[i];
    }
    out[k] = std::log(weights_[k]) - 0.5 * (static_cast<double>(n) * log_2pi + log_det_[k] + maha);
  }
  return out;
}

double GmmModel::mean_log_likelihood(const Matrix& points) const {
  double total = 0.0;
  for (std::size_t r = 0; r < points.rows(); ++r) {
    total += log_sum_exp(log_weighted_densities(points.row(r)));
  }
  return total / static_cast<double>(points.rows());
}

GmmModel gmm_fit(const Matrix& points, int k, std::uint64_t seed, GmmOptions options) {
  const std::size_t m = points.rows();
  const std::size_t n = points.cols();
  if (k < 1) throw Error(kStage, "K must be at least 1");
  const auto kk = static_cast<std::size_t>(k);
  if (m < kk) throw Error(kStage, "fewer points (" + std::to_string(m) + ") than components");
  if (n < 1) throw Error(kStage, "points have zero dimension");
  if (!(options.reg >= 0.0) || !(options.tol >= 0.0) || options.max_iter < 1) {
    throw Error(kStage, "invalid EM options");
  }
  check_finite(points, kStage);

  // Initialization from k-means: centroids, within-cluster covariances, shares.
  const KMeansModel km = kmeans_fit(points, k, seed);
  std::vector<std::size_t> assignment(m);
  std::vector<std::size_t> counts(kk, 0);
  for (std::size_t i = 0; i < m; ++i) {
    assignment[i] = kmeans_assign(km, points.row(i));
    ++counts[assignment[i]];
  }
  std::vector<double> overall_mean(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) overall_mean[j] += points(i, j) / static_cast<double>(m);
  }
  const Matrix overall_cov = sample_covariance(points, overall_mean, {}, static_cast<double>(m));

  std::vector<double> weights(kk);
  Matrix means(kk, n);
  std::vector<Matrix> covs(kk);
  for (std::size_t c = 0; c < kk; ++c) {
    std::vector<double> member(m, 0.0);
    std::vector<double> mean(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (assignment[i] != c) continue;
      member[i] = 1.0;
      for (std::size_t j = 0; j < n; ++j) mean[j] += points(i, j);
    }
    const double count = static_cast<double>(counts[c]);
    weights[c] = std::max(count, 1.0) / static_cast<double>(m);
    if (counts[c] > 0) {
      for (double& v : mean) v /= count;
    } else {
      mean.assign(km.centroids.row(c).begin(), km.centroids.row(c).end());
    }
    std::copy(mean.begin(), mean.end(), means.row(c).begin());
    // Clusters too small for a covariance estimate borrow the global one.
    covs[c] = counts[c] >= 2 ? sample_covariance(points, mean, member, count) : overall_cov;
    add_ridge(covs[c], options.reg);
  }
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;

  GmmModel model(std::move(weights), std::move(means), std::move(covs));
  model.seed = seed;
  model.reg = options.reg;

  Matrix resp(m, kk);
  for (int iter = 0;; ++iter) {
    // E-step.
    double ll = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      auto logp = model.log_weighted_densities(points.row(i));
      const double lse = log_sum_exp(logp);
      ll += lse;
      for (std::size_t c = 0; c < kk; ++c) resp(i, c) = std::exp(logp[c] - lse);
    }
    ll /= static_cast<double>(m);
    if (!std::isfinite(ll)) throw Error(kStage, "non-finite log-likelihood");
    model.log_likelihood_trace.push_back(ll);
    model.log_likelihood = ll;
    const auto& trace = model.log_likelihood_trace;
    if (trace.size() >= 2 && trace[trace.size() - 1] - trace[trace.size() - 2] < options.tol) break;
    if (iter >= options.max_iter) break;

    // M-step.
    std::vector<double> nk(kk, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < kk; ++c) nk[c] += resp(i, c);
    }
    std::vector<double> new_weights(kk);
    Matrix new_means(kk, n);
    std::vector<Matrix> new_covs(kk);
    for (std::size_t c = 0; c < kk; ++c) {
      if (nk[c] < 1e-10) {
        // A starved component keeps its shape with a negligible weight.
        new_weights[c] = 1e-10;
        std::copy(model.means().row(c).begin(), model.means().row(c).end(),
                  new_means.row(c).begin());
        new_covs[c] = model.covariances()[c];
        continue;
      }
      new_weights[c] = nk[c] / static_cast<double>(m);
      auto mu = new_means.row(c);
      for (std::size_t i = 0; i < m; ++i) {
        const double r = resp(i, c);
        const auto p = points.row(i);
        for (std::size_t j = 0; j < n; ++j) mu[j] += r * p[j];
      }
      for (double& v : mu) v /= nk[c];
      std::vector<double> rc(m);
      for (std::size_t i = 0; i < m; ++i) rc[i] = resp(i, c);
      new_covs[c] = sample_covariance(points, mu, rc, nk[c]);
      add_ridge(new_covs[c], options.reg);
    }
    double total = 0.0;
    for (double w : new_weights) total += w;
    for (double& w : new_weights) w /= total;

    auto trace_so_far = std::move(model.log_likelihood_trace);
    model = GmmModel(std::move(new_weights), std::move(new_means), std::move(new_covs));
    model.seed = seed;
    model.reg = options.reg;
    model.log_likelihood_trace = std::move(trace_so_far);
    model.iterations = iter + 1;
  }
  return model;
}

std::vector<double> responsibilities(const GmmModel& model, std::span<const double> point) {
  auto logp = model.log_weighted_densities(point);
  const double lse = log_sum_exp(logp);
  for (double& v : logp) v = std::exp(v - lse);
  return logp;
}

std::size_t assign(const GmmModel& model, std::span<const double> point) {
  const auto logp = model.log_weighted_densities(point);
  return static_cast<std::size_t>(std::max_element(logp.begin(), logp.end()) - logp.begin());
}

nlohmann::json GmmModel::to_json() const {
  nlohmann::json covs = nlohmann::json::array();
  for (const auto& c : covariances_) covs.push_back(c.data());
  return {{"format_version", kFormatVersion},
          {"components", components()},
          {"dim", dim()},
          {"seed", seed},
          {"reg", reg},
          {"log_likelihood", log_likelihood},
          {"iterations", iterations},
          {"weights", weights_},
          {"means", means_.data()},
          {"covariances", std::move(covs)}};
}

GmmModel GmmModel::from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw Error("io", "unsupported GMM format_version " + j.at("format_version").dump());
  }
  const auto k = j.at("components").get<std::size_t>();
  const auto n = j.at("dim").get<std::size_t>();
  std::vector<Matrix> covs;
  for (const auto& c : j.at("covariances")) covs.emplace_back(n, n, c.get<std::vector<double>>());
  GmmModel m(j.at("weights").get<std::vector<double>>(),
             Matrix(k, n, j.at("means").get<std::vector<double>>()), std::move(covs));
  m.seed = j.at("seed").get<std::uint64_t>();
  m.reg = j.at("reg").get<double>();
  m.log_likelihood = j.at("log_likelihood").get<double>();
  m.iterations = j.at("iterations").get<int>();
  return m;
}

// ---------------------------------------------------------------------------
// Labeling and decisions

bool flag_cluster(const ClusterStats& s, double rho, LabelRule rule) {
  if (s.anomalies == 0) return false;
  if (rule == LabelRule::kFraction) return s.anomaly_fraction > rho;
  if (s.normals == 0) return true;
  return static_cast<double>(s.anomalies) / static_cast<double>(s.normals) > rho;
}

ClusterLabeling ClusterLabeling::with_threshold(double new_rho) const {
  ClusterLabeling out = *this;
  out.rho = new_rho;
  for (auto& c : out.clusters) c.is_anomaly_cluster = flag_cluster(c, new_rho, rule);
  return out;
}

std::size_t ClusterLabeling::flagged_count() const {
  return static_cast<std::size_t>(std::count_if(clusters.begin(), clusters.end(),
                                                [](const ClusterStats& c) { return c.is_anomaly_cluster; }));
}

nlohmann::json ClusterLabeling::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : clusters) {
    arr.push_back({{"anomalies", c.anomalies},
                   {"normals", c.normals},
                   {"anomaly_fraction", c.anomaly_fraction},
                   {"flagged", c.is_anomaly_cluster}});
  }
  return {{"rho", rho},
          {"rule", rule == LabelRule::kFraction ? "fraction" : "odds"},
          {"clusters", std::move(arr)}};
}

ClusterLabeling ClusterLabeling::from_json(const nlohmann::json& j) {
  ClusterLabeling l;
  l.rho = j.at("rho").get<double>();
  l.rule = j.at("rule").get<std::string>() == "odds" ? LabelRule::kOdds : LabelRule::kFraction;
  for (const auto& c : j.at("clusters")) {
    ClusterStats s;
    s.anomalies = c.at("anomalies").get<std::size_t>();
    s.normals = c.at("normals").get<std::size_t>();
    s.anomaly_fraction = c.at("anomaly_fraction").get<double>();
    s.is_anomaly_cluster = c.at("flagged").get<bool>();
    l.clusters.push_back(s);
  }
  return l;
}

ClusterLabeling label_clusters(const GmmModel& model, const Matrix& points,
                               std::span<const std::uint8_t> labels, double rho, LabelRule rule) {
  if (points.rows() != labels.size()) {
    throw Error("labeling", "point count " + std::to_string(points.rows()) +
                                " differs from label count " + std::to_string(labels.size()));
  }
  if (labels.empty()) throw Error("labeling", "no points to label clusters with");
  if (!(rho > 0.0 && rho < 1.0) && rule == LabelRule::kFraction) {
    throw Error("labeling", "rho must lie in (0, 1)");
  }
  ClusterLabeling out;
  out.rho = rho;
  out.rule = rule;
  out.clusters.resize(model.components());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& c = out.clusters[assign(model, points.row(i))];
    if (labels[i]) {
      ++c.anomalies;
    } else {
      ++c.normals;
    }
  }
  for (auto& c : out.clusters) {
    const std::size_t total = c.anomalies + c.normals;
    c.anomaly_fraction = total ? static_cast<double>(c.anomalies) / static_cast<double>(total) : 0.0;
    c.is_anomaly_cluster = flag_cluster(c, rho, rule);
  }
  return out;
}

Decision classify(const GmmModel& model, const ClusterLabeling& labeling,
                  std::span<const double> point) {
  if (labeling.clusters.size() != model.components()) {
    throw Error("classify", "labeling does not match the mixture");
  }
  return labeling.clusters[assign(model, point)].is_anomaly_cluster ? Decision::kAnomaly
                                                                     : Decision::kNormal;
}

std::vector<Decision> classify_batch(const GmmModel& model, const ClusterLabeling& labeling,
                                     const Matrix& points) {
  std::vector<Decision> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = classify(model, labeling, points.row(i));
  return out;
}

}  // namespace semcad::cluster
