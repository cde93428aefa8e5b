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

#include "semcad/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "semcad/common.hpp"

namespace semcad::eval {
namespace {

constexpr const char* kStage = "evaluate";

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f %%", 100.0 * *v);
  return buf;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(kStage, "length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
  if (a == 0) throw Error(kStage, "empty input");
}

}  // namespace

ClassReport precision_recall(std::span<const std::uint8_t> predictions,
                             std::span<const std::uint8_t> labels, std::string method,
                             std::optional<double> threshold) {
  check_lengths(predictions.size(), labels.size());
  // confusion[label][prediction]
  std::size_t confusion[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1 || predictions[i] > 1) throw Error(kStage, "labels must be binary");
    ++confusion[labels[i]][predictions[i]];
  }
  ClassReport report;
  report.method = std::move(method);
  report.threshold = threshold;
  report.total = labels.size();
  for (int c = 0; c < 2; ++c) {
    ClassMetrics& m = report.classes[c];
    m.true_positives = confusion[c][c];
    m.false_positives = confusion[1 - c][c];
    m.false_negatives = confusion[c][1 - c];
    m.support = confusion[c][0] + confusion[c][1];
    m.precision = ratio(m.true_positives, m.true_positives + m.false_positives);
    m.recall = ratio(m.true_positives, m.support);
  }
  return report;
}

std::vector<std::uint8_t> apply_threshold(std::span<const double> scores, double threshold) {
  std::vector<std::uint8_t> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1 : 0;
  return out;
}

std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_lengths(scores.size(), labels.size());
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0) throw Error(kStage, "PR curve needs at least one positive label");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<PrPoint> curve;
  std::size_t tp = 0, predicted = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    // Equal scores share one threshold.
    while (i < order.size() && scores[order[i]] == t) {
      tp += labels[order[i]];
      ++predicted;
      ++i;
    }
    curve.push_back({t, static_cast<double>(tp) / static_cast<double>(predicted),
                     static_cast<double>(tp) / static_cast<double>(positives)});
  }
  return curve;
}

std::string pr_curve_to_csv(std::span<const PrPoint> curve) {
  std::string out = "threshold,precision,recall\n";
  for (const auto& p : curve) {
    out += format_double(p.threshold) + "," + format_double(p.precision) + "," +
           format_double(p.recall) + "\n";
  }
  return out;
}

TunedThreshold tune_threshold(std::span<const double> scores, std::span<const std::uint8_t> labels,
                              double target_precision, std::string method) {
  if (!(target_precision > 0.0 && target_precision <= 1.0)) {
    throw Error(kStage, "target precision must lie in (0, 1]");
  }
  const auto curve = pr_curve(scores, labels);
  const PrPoint* best = nullptr;
  double max_precision = 0.0;
  for (const auto& p : curve) {
    max_precision = std::max(max_precision, p.precision);
    if (p.precision < target_precision) continue;
    // Thresholds descend, so >= keeps the lower threshold on recall ties.
    if (!best || p.recall >= best->recall) best = &p;
  }
  if (!best) {
    throw Error(kStage, "target precision " + format_double(target_precision) +
                            " is unachievable; maximum achievable precision is " +
                            format_double(max_precision));
  }
  TunedThreshold out;
  out.threshold = best->threshold;
  out.report = precision_recall(apply_threshold(scores, best->threshold), labels, std::move(method),
                                best->threshold);
  return out;
}

nlohmann::json ClassReport::to_json() const {
  nlohmann::json classes_json = nlohmann::json::array();
  for (int c = 0; c < 2; ++c) {
    const auto& m = classes[c];
    classes_json.push_back({{"class", c},
                            {"precision", optional_json(m.precision)},
                            {"recall", optional_json(m.recall)},
                            {"support", m.support},
                            {"true_positives", m.true_positives},
                            {"false_positives", m.false_positives},
                            {"false_negatives", m.false_negatives}});
  }
  return {{"method", method},
          {"threshold", optional_json(threshold)},
          {"total", total},
          {"classes", std::move(classes_json)}};
}

std::string report_to_text(const ClassReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %-6s %-12s %-12s %s\n", "Method", "Class", "Precision",
                "Recall", "Support");
  out += line;
  for (int c = 0; c < 2; ++c) {
    const auto& m = report.classes[c];
    std::snprintf(line, sizeof(line), "%-16s %-6d %-12s %-12s %zu\n",
                  c == 0 ? report.method.c_str() : "", c, percent(m.precision).c_str(),
                  percent(m.recall).c_str(), m.support);
    out += line;
  }
  return out;
}

Comparison compare_methods(std::vector<ClassReport> reports) {
  if (reports.size() < 2) throw Error(kStage, "comparison needs at least two reports");
  Comparison out;
  out.reports = std::move(reports);
  const std::size_t n = out.reports.size();
  out.improvement.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto ra = out.reports[a].anomaly().recall;
      const auto rb = out.reports[b].anomaly().recall;
      if (ra && rb && *rb > 0.0) out.improvement[a][b] = (*ra - *rb) / *rb;
    }
  }
  return out;
}

std::string Comparison::to_text() const {
  std::string out;
  char line[200];
  std::snprintf(line, sizeof(line), "%-16s %-6s %-12s %-12s %s\n", "Method", "Class", "Precision",
                "Recall", "Support");
  out += line;
  for (const auto& r : reports) {
    for (int c = 0; c < 2; ++c) {
      const auto& m = r.classes[c];
      std::snprintf(line, sizeof(line), "%-16s %-6d %-12s %-12s %zu\n",
                    c == 0 ? r.method.c_str() : "", c, percent(m.precision).c_str(),
                    percent(m.recall).c_str(), m.support);
      out += line;
    }
  }
  out += "\nAnomaly recall improvement (row over column):\n";
  for (std::size_t a = 0; a < reports.size(); ++a) {
    for (std::size_t b = 0; b < reports.size(); ++b) {
      if (a == b) continue;
      std::snprintf(line, sizeof(line), "  %s over %s: %s\n", reports[a].method.c_str(),
                    reports[b].method.c_str(), percent(improvement[a][b]).c_str());
      out += line;
    }
  }
  return out;
}

nlohmann::json Comparison::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) rows.push_back(r.to_json());
  nlohmann::json imp = nlohmann::json::array();
  for (std::size_t a = 0; a < reports.size(); ++a) {
    for (std::size_t b = 0; b < reports.size(); ++b) {
      if (a == b) continue;
      imp.push_back({{"method", reports[a].method},
                     {"baseline", reports[b].method},
                     {"relative_recall_improvement", optional_json(improvement[a][b])}});
    }
  }
  return {{"reports", std::move(rows)}, {"improvements", std::move(imp)}};
}

}  // namespace semcad::eval
