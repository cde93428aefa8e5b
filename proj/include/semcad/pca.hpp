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

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"
#include "semcad/common.hpp"

namespace semcad::pca {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // row i is the unit eigenvector of values[i]
  int sweeps = 0;
};

// Cyclic Jacobi rotations on a symmetric matrix. Stops once the off-diagonal
// Frobenius norm falls below `tolerance` times the matrix norm.
EigenDecomposition symmetric_eigen(const Matrix& a, double tolerance = 1e-12,
                                   int max_sweeps = 100);

struct ComponentRule {
  enum class Kind { kFixed, kVarianceThreshold };
  Kind kind = Kind::kFixed;
  int components = 2;
  double threshold = 0.9;

  static ComponentRule fixed(int n) { return {Kind::kFixed, n, 0.9}; }
  static ComponentRule variance(double tau) { return {Kind::kVarianceThreshold, 0, tau}; }
};

struct PcaModel {
  static constexpr int kFormatVersion = 1;

  std::vector<double> mean;
  std::vector<double> scale;  // per-column standard deviation, 1 where sigma = 0 or unscaled
  Matrix components;          // n x D, orthonormal rows
  std::vector<double> eigenvalues;                // length n, descending
  std::vector<double> explained_variance_ratio;  // length D
  bool standardized = true;

  std::size_t input_dim() const noexcept { return mean.size(); }
  std::size_t output_dim() const noexcept { return components.rows(); }

  // Shapes and flags as JSON; the numeric arrays go to the blob, in order:
  // mean, scale, components (row-major), eigenvalues, explained ratios.
  nlohmann::json to_json() const;
  std::vector<double> blob_values() const;
  static PcaModel from_json(const nlohmann::json& j, std::span<const double> blob);
};

PcaModel fit(const Matrix& data, ComponentRule rule = {}, bool standardize = true);

std::vector<double> transform(const PcaModel& model, std::span<const double> x);
Matrix transform(const PcaModel& model, const Matrix& data);

// First k explained-variance ratios.
std::vector<double> variance_spectrum(const PcaModel& model, std::size_t first_k);
std::string spectrum_to_csv(std::span<const double> ratios);

// Column-standardized copy of `data` using the model's mean and scale.
Matrix standardize(const PcaModel& model, const Matrix& data);

}  // namespace semcad::pca
