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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace semcad::eval {

// Metrics for one class. A ratio whose denominator is zero is left empty.
struct ClassMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::size_t support = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

struct ClassReport {
  std::string method;
  std::optional<double> threshold;
  std::array<ClassMetrics, 2> classes;  // index 0 = normal, 1 = anomaly
  std::size_t total = 0;

  const ClassMetrics& anomaly() const { return classes[1]; }
  nlohmann::json to_json() const;
};

ClassReport precision_recall(std::span<const std::uint8_t> predictions,
                             std::span<const std::uint8_t> labels, std::string method = {},
                             std::optional<double> threshold = std::nullopt);

// A score at or above the threshold predicts the anomaly class.
std::vector<std::uint8_t> apply_threshold(std::span<const double> scores, double threshold);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// One point per distinct score, thresholds descending.
std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const std::uint8_t> labels);
std::string pr_curve_to_csv(std::span<const PrPoint> curve);

struct TunedThreshold {
  double threshold = 0.0;
  ClassReport report;
};

// Highest anomaly recall among thresholds reaching the target anomaly
// precision; ties go to the lower threshold.
TunedThreshold tune_threshold(std::span<const double> scores, std::span<const std::uint8_t> labels,
                              double target_precision, std::string method = {});

struct Comparison {
  std::vector<ClassReport> reports;
  // improvement[a][b] = (recall_a - recall_b) / recall_b on the anomaly class.
  std::vector<std::vector<std::optional<double>>> improvement;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

Comparison compare_methods(std::vector<ClassReport> reports);

std::string report_to_text(const ClassReport& report);

}  // namespace semcad::eval
