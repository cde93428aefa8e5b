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

#include "semcad/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semcad::pca {
namespace {

constexpr const char* kStage = "pca";

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& input, double tolerance, int max_sweeps) {
  const std::size_t n = input.rows();
  if (n != input.cols()) throw Error(kStage, "eigendecomposition of a non-square matrix");
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double norm = frobenius_norm(a);

  EigenDecomposition out;
  for (; out.sweeps < max_sweeps; ++out.sweeps) {
    if (off_diagonal_norm(a) <= tolerance * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = a(k, p), y = a(k, q);
          a(k, p) = c * x - s * y;
          a(k, q) = s * x + c * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double x = a(p, k), y = a(q, k);
          a(p, k) = c * x - s * y;
          a(q, k) = s * x + c * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = v(k, p), y = v(k, q);
          v(k, p) = c * x - s * y;
          v(k, q) = s * x + c * y;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t src = order[r];
    out.values[r] = a(src, src);
    // Sign convention: the entry of largest magnitude is positive.
    std::size_t arg = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (std::abs(v(k, src)) > std::abs(v(arg, src))) arg = k;
    }
    const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = sign * v(k, src);
  }
  return out;
}

PcaModel fit(const Matrix& data, ComponentRule rule, bool standardize) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n < 2) throw Error(kStage, "PCA needs at least 2 rows");
  if (d < 1) throw Error(kStage, "PCA needs at least 1 column");
  for (double x : data.data()) {
    if (!std::isfinite(x)) throw Error(kStage, "non-finite input value");
  }
  if (rule.kind == ComponentRule::Kind::kFixed &&
      (rule.components < 1 || static_cast<std::size_t>(rule.components) > d)) {
    throw Error(kStage, "component count must lie in [1, " + std::to_string(d) + "]");
  }
  if (rule.kind == ComponentRule::Kind::kVarianceThreshold &&
      !(rule.threshold > 0.0 && rule.threshold <= 1.0)) {
    throw Error(kStage, "variance threshold must lie in (0, 1]");
  }

  PcaModel model;
  model.standardized = standardize;
  model.mean.assign(d, 0.0);
  model.scale.assign(d, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.row(r);
    for (std::size_t c = 0; c < d; ++c) model.mean[c] += row[c];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);
  if (standardize) {
    std::vector<double> ss(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = data.row(r);
      for (std::size_t c = 0; c < d; ++c) {
        const double dev = row[c] - model.mean[c];
        ss[c] += dev * dev;
      }
    }
    for (std::size_t c = 0; c < d; ++c) {
      const double sigma = std::sqrt(ss[c] / static_cast<double>(n - 1));
      // Rounding leaves constant columns with sigma ~ 1e-17 rather than 0.
      model.scale[c] = sigma > 1e-12 * std::max(1.0, std::abs(model.mean[c])) ? sigma : 1.0;
    }
  }

  const Matrix z = pca::standardize(model, data);
  Matrix cov(d, d);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = z.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double zi = row[i];
      if (zi == 0.0) continue;
      double* dst = &cov(i, 0);
      for (std::size_t j = i; j < d; ++j) dst[j] += zi * row[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) *= inv;
      cov(j, i) = cov(i, j);
    }
  }

  const EigenDecomposition eig = symmetric_eigen(cov);
  std::vector<double> values = eig.values;
  for (double& v : values) v = std::max(v, 0.0);
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (!(total > 0.0)) throw Error(kStage, "data has zero variance");
  model.explained_variance_ratio.resize(d);
  for (std::size_t i = 0; i < d; ++i) model.explained_variance_ratio[i] = values[i] / total;

  std::size_t keep = 0;
  if (rule.kind == ComponentRule::Kind::kFixed) {
    keep = static_cast<std::size_t>(rule.components);
  } else {
    double cumulative = 0.0;
    while (keep < d) {
      cumulative += model.explained_variance_ratio[keep++];
      if (cumulative >= rule.threshold) break;
    }
  }
  model.components = Matrix(keep, d);
  for (std::size_t i = 0; i < keep; ++i) {
    std::copy(eig.vectors.row(i).begin(), eig.vectors.row(i).end(), model.components.row(i).begin());
  }
  model.eigenvalues.assign(values.begin(), values.begin() + static_cast<long>(keep));
  return model;
}

Matrix standardize(const PcaModel& model, const Matrix& data) {
  if (data.cols() != model.input_dim()) {
    throw Error(kStage, "input has " + std::to_string(data.cols()) + " columns, model expects " +
                            std::to_string(model.input_dim()));
  }
  Matrix z(data.rows(), data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto src = data.row(r);
    auto dst = z.row(r);
    for (std::size_t c = 0; c < data.cols(); ++c) dst[c] = (src[c] - model.mean[c]) / model.scale[c];
  }
  return z;
}

std::vector<double> transform(const PcaModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw Error(kStage, "input has " + std::to_string(x.size()) + " columns, model expects " +
                            std::to_string(model.input_dim()));
  }
  std::vector<double> z(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) z[c] = (x[c] - model.mean[c]) / model.scale[c];
  return multiply(model.components, z);
}

Matrix transform(const PcaModel& model, const Matrix& data) {
  if (data.cols() != model.input_dim()) {
    throw Error(kStage, "input has " + std::to_string(data.cols()) + " columns, model expects " +
                            std::to_string(model.input_dim()));
  }
  Matrix out(data.rows(), model.output_dim());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto projected = transform(model, data.row(r));
    std::copy(projected.begin(), projected.end(), out.row(r).begin());
  }
  return out;
}

std::vector<double> variance_spectrum(const PcaModel& model, std::size_t first_k) {
  if (first_k > model.explained_variance_ratio.size()) {
    throw Error(kStage, "spectrum length " + std::to_string(first_k) + " exceeds dimension " +
                            std::to_string(model.explained_variance_ratio.size()));
  }
  return {model.explained_variance_ratio.begin(),
          model.explained_variance_ratio.begin() + static_cast<long>(first_k)};
}

std::string spectrum_to_csv(std::span<const double> ratios) {
  std::string out = "component_index,variance_ratio\n";
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_double(ratios[i]) + "\n";
  }
  return out;
}

nlohmann::json PcaModel::to_json() const {
  return {{"format_version", kFormatVersion},
          {"input_dim", input_dim()},
          {"components", output_dim()},
          {"standardized", standardized}};
}

std::vector<double> PcaModel::blob_values() const {
  std::vector<double> out;
  out.insert(out.end(), mean.begin(), mean.end());
  out.insert(out.end(), scale.begin(), scale.end());
  out.insert(out.end(), components.data().begin(), components.data().end());
  out.insert(out.end(), eigenvalues.begin(), eigenvalues.end());
  out.insert(out.end(), explained_variance_ratio.begin(), explained_variance_ratio.end());
  return out;
}

PcaModel PcaModel::from_json(const nlohmann::json& j, std::span<const double> blob) {
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw Error("io", "unsupported PCA format_version " + j.at("format_version").dump());
  }
  const auto d = j.at("input_dim").get<std::size_t>();
  const auto n = j.at("components").get<std::size_t>();
  if (blob.size() != 3 * d + n * d + n) throw Error("io", "PCA blob has the wrong length");
  PcaModel m;
  m.standardized = j.at("standardized").get<bool>();
  auto take = [&](std::size_t count) {
    std::vector<double> v(blob.begin(), blob.begin() + static_cast<long>(count));
    blob = blob.subspan(count);
    return v;
  };
  m.mean = take(d);
  m.scale = take(d);
  m.components = Matrix(n, d, take(n * d));
  m.eigenvalues = take(n);
  m.explained_variance_ratio = take(d);
  return m;
}

}  // namespace semcad::pca
