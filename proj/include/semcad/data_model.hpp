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

// Alarm-log records, CSV ingestion and the categorical preprocessing chain:
// alarm-type mapping, time-feature extraction, ordinal severity encoding and
// per-feature label encoding with a reserved UNKNOWN code.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "semcad/common.hpp"

namespace semcad::data {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct AlarmRecord {
  Timestamp report_time = 0;
  std::optional<Timestamp> clear_time;
  std::string severity;
  std::string alarm_type;
  std::string site_code;
  std::string city;
  std::string domain;
  std::string segment_name;
  std::string management_system;
  std::string port_type;
  std::string equipment_type;
  int label = 0;

  friend bool operator==(const AlarmRecord&, const AlarmRecord&) = default;
};

struct TimeFeatures {
  int hour = 1;     // [1, 24]: UTC hour + 1
  int day = 1;      // [1, 31]
  int weekday = 1;  // [1, 7], Monday = 1
  int month = 1;    // [1, 12]
  int season = 1;   // [1, 4], Dec-Feb = 1
  int year = 1970;

  friend bool operator==(const TimeFeatures&, const TimeFeatures&) = default;
};

TimeFeatures extract_time_features(Timestamp report_time);
inline TimeFeatures extract_time_features(const AlarmRecord& record) {
  return extract_time_features(record.report_time);
}

// Accepts `YYYY-MM-DD[T ]HH:MM:SS[.fff](Z|+HH:MM|-HH:MM)`; a missing zone is UTC.
std::optional<Timestamp> parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp t);

// Every categorical feature the encoder knows how to extract. The first ten
// form the default model schema; the remaining time features are candidates
// for feature selection only.
enum class Feature {
  kSeverity,
  kAlarmType,
  kSiteCode,
  kCity,
  kDomain,
  kSegmentName,
  kManagementSystem,
  kPortType,
  kEquipmentType,
  kHour,
  kDay,
  kWeekday,
  kMonth,
  kSeason,
  kYear,
};

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);
const std::vector<Feature>& default_features();
const std::vector<Feature>& candidate_features();

// Raw string value of a feature after alarm-type mapping has been applied.
std::string feature_value(const AlarmRecord& record, Feature f);

// Logical field name -> CSV header name. Unmapped fields use their logical name.
class CsvSchema {
 public:
  static const std::vector<std::string>& logical_fields();

  const std::string& column(const std::string& logical) const;
  void set(const std::string& logical, std::string csv_column);

  static CsvSchema from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::map<std::string, std::string> overrides_;
};

struct IngestOptions {
  // When false the label column may be absent and every label reads as 0.
  bool require_label = true;
};

std::vector<AlarmRecord> parse_alarm_csv(std::string_view text, const CsvSchema& schema = {},
                                         IngestOptions options = {});
std::vector<AlarmRecord> ingest_csv(const std::string& path, const CsvSchema& schema = {},
                                    IngestOptions options = {});
// Writes the default schema with RFC 3339 timestamps.
std::string write_alarm_csv(std::span<const AlarmRecord> records);

// Canonicalizes vendor-specific alarm type names. First matching rule wins.
class AlarmTypeMapping {
 public:
  struct Rule {
    std::string pattern;
    bool prefix = false;  // case-insensitive prefix match when true, exact otherwise
    std::string category;

    friend bool operator==(const Rule&, const Rule&) = default;
  };

  AlarmTypeMapping() = default;
  explicit AlarmTypeMapping(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  // One `pattern => category` per line; `prefix:` marks a prefix rule;
  // blank lines and lines starting with '#' are ignored.
  static AlarmTypeMapping parse(std::string_view text);
  static AlarmTypeMapping load(const std::string& path);

  std::string apply(std::string_view alarm_type) const;
  const std::vector<Rule>& rules() const noexcept { return rules_; }

  nlohmann::json to_json() const;
  static AlarmTypeMapping from_json(const nlohmann::json& j);

 private:
  std::vector<Rule> rules_;
};

// Six-level intensity scale used when no scale is configured (X.733 names).
const std::vector<std::string>& default_severity_scale();

struct EncodedDataset {
  std::vector<std::string> feature_names;
  // Number of distinct codes per column, UNKNOWN included; codes lie in [0, card).
  std::vector<int> cardinalities;
  std::size_t rows = 0;
  std::vector<std::int32_t> codes;  // row-major, rows x cols
  std::vector<std::uint8_t> labels;

  std::size_t cols() const noexcept { return cardinalities.size(); }
  std::span<const std::int32_t> row(std::size_t r) const {
    return {codes.data() + r * cols(), cols()};
  }
  std::int32_t code(std::size_t r, std::size_t f) const { return codes[r * cols() + f]; }

  EncodedDataset select_rows(std::span<const std::size_t> indices) const;
  EncodedDataset select_columns(std::span<const std::size_t> columns) const;
};

class VocabularyEncoder {
 public:
  static constexpr std::int32_t kUnknown = 0;
  static constexpr int kFormatVersion = 1;

  enum class Kind { kOrdinal, kVocabulary, kRange };

  struct FeatureVocab {
    Feature feature = Feature::kSeverity;
    Kind kind = Kind::kVocabulary;
    std::vector<std::string> values;  // code i + 1 -> values[i]
    int range_max = 0;                // kRange: codes are the integer value itself
    std::unordered_map<std::string, std::int32_t> index;

    int cardinality() const;  // including UNKNOWN
  };

  static VocabularyEncoder fit(std::span<const AlarmRecord> records, AlarmTypeMapping mapping,
                               std::vector<std::string> severity_scale,
                               std::vector<Feature> features = default_features());

  std::int32_t encode(std::size_t column, std::string_view value) const;
  std::optional<std::string> decode(std::size_t column, std::int32_t code) const;
  void encode_record(const AlarmRecord& record, std::span<std::int32_t> out) const;

  std::size_t feature_count() const noexcept { return vocabs_.size(); }
  const std::vector<FeatureVocab>& vocabs() const noexcept { return vocabs_; }
  std::vector<Feature> features() const;
  std::vector<std::string> feature_names() const;
  std::vector<int> cardinalities() const;
  const std::vector<std::string>& severity_scale() const noexcept { return severity_scale_; }
  const AlarmTypeMapping& mapping() const noexcept { return mapping_; }

  nlohmann::json to_json() const;
  static VocabularyEncoder from_json(const nlohmann::json& j);

 private:
  std::vector<FeatureVocab> vocabs_;
  std::vector<std::string> severity_scale_;
  AlarmTypeMapping mapping_;
};

EncodedDataset transform(std::span<const AlarmRecord> records, const VocabularyEncoder& encoder);

// Stable sort by report_time; the earliest `train_fraction` of rows trains.
std::pair<std::vector<AlarmRecord>, std::vector<AlarmRecord>> split_temporal(
    std::vector<AlarmRecord> records, double train_fraction);
std::pair<std::vector<AlarmRecord>, std::vector<AlarmRecord>> split_random(
    std::vector<AlarmRecord> records, double train_fraction, std::uint64_t seed);

}  // namespace semcad::data
