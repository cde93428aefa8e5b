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

#include <string>
#include <vector>

#include "semcad/data_model.hpp"

namespace semcad::selection {

// r x c table of observed counts. Rows index the conditioning variable (the
// feature), columns the target (the label).
class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols) : counts_(rows, cols) {}
  explicit ContingencyTable(const std::vector<std::vector<double>>& counts);

  // Feature codes against the binary label; rows are the feature's codes.
  static ContingencyTable from_column(const data::EncodedDataset& ds, std::size_t column);

  std::size_t rows() const noexcept { return counts_.rows(); }
  std::size_t cols() const noexcept { return counts_.cols(); }
  double& at(std::size_t r, std::size_t c) { return counts_(r, c); }
  double at(std::size_t r, std::size_t c) const { return counts_(r, c); }
  double total() const;
  ContingencyTable transposed() const;

 private:
  Matrix counts_;
};

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

// Pearson's statistic; cells with zero expected count are skipped and the
// degrees of freedom count only rows/columns with nonzero marginals.
ChiSquare chi_square(const ContingencyTable& table);

// Uncertainty coefficient U(col | row) = (H(col) - H(col | row)) / H(col),
// natural-log entropies. Returns 1 when H(col) = 0.
double theils_u(const ContingencyTable& table);

struct FeatureScore {
  std::string feature;
  std::size_t column = 0;
  double chi_square = 0.0;
  int dof = 0;
  double theils_u = 0.0;
  bool label_constant = false;
  bool selected = false;
};

// Sorted by U(label | feature) descending, then chi-square descending, then name.
std::vector<FeatureScore> rank_features(const data::EncodedDataset& ds, int k);

std::string scores_to_csv(const std::vector<FeatureScore>& scores);

}  // namespace semcad::selection
