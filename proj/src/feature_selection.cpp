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

#include "semcad/feature_selection.hpp"

#include <algorithm>
#include <cmath>

namespace semcad::selection {
namespace {

constexpr const char* kStage = "select-features";

std::vector<double> row_sums(const ContingencyTable& t) {
  std::vector<double> s(t.rows(), 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) s[i] += t.at(i, j);
  }
  return s;
}

std::vector<double> col_sums(const ContingencyTable& t) {
  std::vector<double> s(t.cols(), 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) s[j] += t.at(i, j);
  }
  return s;
}

double entropy(const std::vector<double>& counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

ContingencyTable::ContingencyTable(const std::vector<std::vector<double>>& counts)
    : counts_(counts.size(), counts.empty() ? 0 : counts.front().size()) {
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != cols()) throw Error(kStage, "ragged contingency table");
    for (std::size_t j = 0; j < cols(); ++j) {
      if (counts[i][j] < 0.0) throw Error(kStage, "negative contingency count");
      counts_(i, j) = counts[i][j];
    }
  }
}

ContingencyTable ContingencyTable::from_column(const data::EncodedDataset& ds,
                                               std::size_t column) {
  ContingencyTable t(static_cast<std::size_t>(ds.cardinalities.at(column)), 2);
  for (std::size_t r = 0; r < ds.rows; ++r) {
    t.at(static_cast<std::size_t>(ds.code(r, column)), ds.labels[r]) += 1.0;
  }
  return t;
}

double ContingencyTable::total() const {
  double n = 0.0;
  for (double c : counts_.data()) n += c;
  return n;
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable t(cols(), rows());
  t.counts_ = counts_.transposed();
  return t;
}

ChiSquare chi_square(const ContingencyTable& table) {
  const double n = table.total();
  if (!(n > 0.0)) throw Error(kStage, "chi-square of an all-zero table");
  const auto rs = row_sums(table);
  const auto cs = col_sums(table);

  ChiSquare out;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const double expected = rs[i] * cs[j] / n;
      if (expected > 0.0) {
        const double diff = table.at(i, j) - expected;
        out.statistic += diff * diff / expected;
      }
    }
  }
  const auto nonzero = [](const std::vector<double>& v) {
    return static_cast<int>(std::count_if(v.begin(), v.end(), [](double x) { return x > 0.0; }));
  };
  const int r = nonzero(rs);
  const int c = nonzero(cs);
  if (r < 2 || c < 2) return {0.0, 0};
  out.dof = (r - 1) * (c - 1);
  return out;
}

double theils_u(const ContingencyTable& table) {
  const double n = table.total();
  if (table.rows() == 0 || table.cols() == 0 || !(n > 0.0)) {
    throw Error(kStage, "Theil's U of an empty table");
  }
  const auto rs = row_sums(table);
  const double h_y = entropy(col_sums(table), n);
  if (h_y <= 0.0) return 1.0;

  double h_y_given_x = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (rs[i] <= 0.0) continue;
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const double c = table.at(i, j);
      if (c > 0.0) h_y_given_x -= (c / n) * std::log(c / rs[i]);
    }
  }
  return std::clamp((h_y - h_y_given_x) / h_y, 0.0, 1.0);
}

std::vector<FeatureScore> rank_features(const data::EncodedDataset& ds, int k) {
  if (k <= 0) throw Error(kStage, "k must be positive");
  if (static_cast<std::size_t>(k) > ds.cols()) {
    throw Error(kStage, "k = " + std::to_string(k) + " exceeds the feature count " +
                            std::to_string(ds.cols()));
  }
  if (ds.rows == 0) throw Error(kStage, "cannot rank features on an empty dataset");

  std::vector<FeatureScore> scores;
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    const auto table = ContingencyTable::from_column(ds, c);
    const auto chi = chi_square(table);
    FeatureScore s;
    s.feature = ds.feature_names[c];
    s.column = c;
    s.chi_square = chi.statistic;
    s.dof = chi.dof;
    s.theils_u = theils_u(table);
    const auto cs = col_sums(table);
    s.label_constant = std::count_if(cs.begin(), cs.end(), [](double x) { return x > 0; }) < 2;
    scores.push_back(std::move(s));
  }
  std::sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.theils_u != b.theils_u) return a.theils_u > b.theils_u;
    if (a.chi_square != b.chi_square) return a.chi_square > b.chi_square;
    return a.feature < b.feature;
  });
  for (int i = 0; i < k; ++i) scores[static_cast<std::size_t>(i)].selected = true;
  return scores;
}

std::string scores_to_csv(const std::vector<FeatureScore>& scores) {
  std::string out = "feature,theils_u,chi2,dof,selected\n";
  for (const auto& s : scores) {
    out += csv_escape(s.feature) + "," + format_double(s.theils_u) + "," +
           format_double(s.chi_square) + "," + std::to_string(s.dof) + "," +
           (s.selected ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace semcad::selection
