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

#include "semcad/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <sstream>

namespace semcad::data {
namespace {

constexpr const char* kStage = "preprocess";

struct FeatureInfo {
  Feature feature;
  std::string_view name;
};

constexpr FeatureInfo kFeatureInfo[] = {
    {Feature::kSeverity, "severity"},
    {Feature::kAlarmType, "alarm_type"},
    {Feature::kSiteCode, "site_code"},
    {Feature::kCity, "city"},
    {Feature::kDomain, "domain"},
    {Feature::kSegmentName, "segment_name"},
    {Feature::kManagementSystem, "management_system"},
    {Feature::kPortType, "port_type"},
    {Feature::kEquipmentType, "equipment_type"},
    {Feature::kHour, "hour"},
    {Feature::kDay, "day"},
    {Feature::kWeekday, "weekday"},
    {Feature::kMonth, "month"},
    {Feature::kSeason, "season"},
    {Feature::kYear, "year"},
};

// Integer-valued time features encode as their own value.
int range_max(Feature f) {
  switch (f) {
    case Feature::kHour: return 24;
    case Feature::kDay: return 31;
    case Feature::kWeekday: return 7;
    case Feature::kMonth: return 12;
    case Feature::kSeason: return 4;
    default: return 0;
  }
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool is_integer_text(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

TimeFeatures extract_time_features(Timestamp report_time) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{report_time}};
  const sys_days day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const auto since_midnight = tp - day_point;

  TimeFeatures tf;
  tf.hour = static_cast<int>(duration_cast<hours>(since_midnight).count()) + 1;
  tf.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
  tf.weekday = static_cast<int>(weekday{day_point}.iso_encoding());
  tf.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  tf.season = (tf.month % 12) / 3 + 1;
  tf.year = static_cast<int>(ymd.year());
  return tf;
}

std::optional<Timestamp> parse_rfc3339(std::string_view text) {
  // YYYY-MM-DD
  if (text.size() < 19) return std::nullopt;
  int y, mo, d, h, mi, s;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
      !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
      !parse_int(text.substr(14, 2), mi) || !parse_int(text.substr(17, 2), s)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || s > 60) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  std::string_view rest = text.substr(19);
  if (!rest.empty() && rest[0] == '.') {
    std::size_t i = 1;
    while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
    if (i == 1) return std::nullopt;
    rest.remove_prefix(i);  // fractional seconds are truncated
  }
  long offset = 0;
  if (rest == "Z" || rest == "z" || rest.empty()) {
    offset = 0;
  } else if ((rest[0] == '+' || rest[0] == '-') && rest.size() == 6 && rest[3] == ':') {
    int oh, om;
    if (!parse_int(rest.substr(1, 2), oh) || !parse_int(rest.substr(4, 2), om)) {
      return std::nullopt;
    }
    offset = (oh * 3600L + om * 60L) * (rest[0] == '-' ? -1 : 1);
  } else {
    return std::nullopt;
  }
  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days_since_epoch) * 86400 + h * 3600L + mi * 60L + s - offset;
}

std::string format_rfc3339(Timestamp t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const sys_days dp = floor<days>(tp);
  const year_month_day ymd{dp};
  const hh_mm_ss hms{tp - dp};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string_view feature_name(Feature f) {
  for (const auto& info : kFeatureInfo) {
    if (info.feature == f) return info.name;
  }
  return "?";
}

std::optional<Feature> feature_from_name(std::string_view name) {
  for (const auto& info : kFeatureInfo) {
    if (info.name == name) return info.feature;
  }
  return std::nullopt;
}

const std::vector<Feature>& default_features() {
  static const std::vector<Feature> kDefault = {
      Feature::kSeverity,     Feature::kAlarmType,         Feature::kSiteCode,
      Feature::kCity,         Feature::kDomain,            Feature::kSegmentName,
      Feature::kManagementSystem, Feature::kPortType,      Feature::kEquipmentType,
      Feature::kHour};
  return kDefault;
}

const std::vector<Feature>& candidate_features() {
  static const std::vector<Feature> kAll = [] {
    std::vector<Feature> v;
    for (const auto& info : kFeatureInfo) v.push_back(info.feature);
    return v;
  }();
  return kAll;
}

std::string feature_value(const AlarmRecord& r, Feature f) {
  switch (f) {
    case Feature::kSeverity: return r.severity;
    case Feature::kAlarmType: return r.alarm_type;
    case Feature::kSiteCode: return r.site_code;
    case Feature::kCity: return r.city;
    case Feature::kDomain: return r.domain;
    case Feature::kSegmentName: return r.segment_name;
    case Feature::kManagementSystem: return r.management_system;
    case Feature::kPortType: return r.port_type;
    case Feature::kEquipmentType: return r.equipment_type;
    default: break;
  }
  const TimeFeatures tf = extract_time_features(r.report_time);
  switch (f) {
    case Feature::kHour: return std::to_string(tf.hour);
    case Feature::kDay: return std::to_string(tf.day);
    case Feature::kWeekday: return std::to_string(tf.weekday);
    case Feature::kMonth: return std::to_string(tf.month);
    case Feature::kSeason: return std::to_string(tf.season);
    case Feature::kYear: return std::to_string(tf.year);
    default: return {};
  }
}

// ---------------------------------------------------------------------------
// CSV ingestion

const std::vector<std::string>& CsvSchema::logical_fields() {
  static const std::vector<std::string> kFields = {
      "report_time", "clear_time", "severity",          "alarm_type", "site_code",
      "city",        "domain",     "segment_name",      "management_system",
      "port_type",   "equipment_type", "label"};
  return kFields;
}

const std::string& CsvSchema::column(const std::string& logical) const {
  auto it = overrides_.find(logical);
  return it == overrides_.end() ? logical : it->second;
}

void CsvSchema::set(const std::string& logical, std::string csv_column) {
  const auto& fields = logical_fields();
  if (std::find(fields.begin(), fields.end(), logical) == fields.end()) {
    throw Error(kStage, "unknown schema field '" + logical + "'");
  }
  overrides_[logical] = std::move(csv_column);
}

CsvSchema CsvSchema::from_json(const nlohmann::json& j) {
  CsvSchema schema;
  if (!j.is_object()) throw Error(kStage, "schema must be a JSON object");
  for (const auto& [key, value] : j.items()) schema.set(key, value.get<std::string>());
  return schema;
}

nlohmann::json CsvSchema::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& field : logical_fields()) j[field] = column(field);
  return j;
}

std::vector<AlarmRecord> parse_alarm_csv(std::string_view text, const CsvSchema& schema,
                                         IngestOptions options) {
  const CsvTable table = parse_csv(text);

  auto require = [&](const std::string& logical) {
    const int idx = table.column(schema.column(logical));
    if (idx < 0) {
      throw Error(kStage, "missing column '" + schema.column(logical) + "' (field " + logical + ")");
    }
    return static_cast<std::size_t>(idx);
  };

  const std::size_t report_col = require("report_time");
  const int clear_idx = table.column(schema.column("clear_time"));
  const std::size_t sev = require("severity");
  const std::size_t at = require("alarm_type");
  const std::size_t site = require("site_code");
  const std::size_t city = require("city");
  const std::size_t dom = require("domain");
  const std::size_t seg = require("segment_name");
  const std::size_t mgmt = require("management_system");
  const std::size_t port = require("port_type");
  const std::size_t equip = require("equipment_type");
  const int label_idx = table.column(schema.column("label"));
  if (options.require_label && label_idx < 0) require("label");

  // Timestamp columns hold either integer epoch seconds or RFC 3339 text;
  // the first non-empty value decides for the whole column.
  auto detect_epoch = [&](int col) {
    if (col < 0) return false;
    for (const auto& row : table.rows) {
      if (static_cast<std::size_t>(col) < row.size() && !trim(row[col]).empty()) {
        return is_integer_text(trim(row[col]));
      }
    }
    return false;
  };
  const bool report_epoch = detect_epoch(static_cast<int>(report_col));
  const bool clear_epoch = detect_epoch(clear_idx);

  auto parse_time = [](const std::string& raw, bool epoch) -> std::optional<Timestamp> {
    const std::string v = trim(raw);
    if (epoch) {
      Timestamp t;
      if (!v.empty() && v[0] == '+') return parse_int(std::string_view(v).substr(1), t)
                                                ? std::optional<Timestamp>(t)
                                                : std::nullopt;
      return parse_int(std::string_view(v), t) ? std::optional<Timestamp>(t) : std::nullopt;
    }
    return parse_rfc3339(v);
  };

  std::vector<AlarmRecord> records;
  records.reserve(table.rows.size());
  std::vector<std::string> problems;
  std::size_t problem_count = 0;
  auto report = [&](std::size_t row_number, const std::string& msg) {
    ++problem_count;
    if (problems.size() < 10) problems.push_back("row " + std::to_string(row_number) + ": " + msg);
  };

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_number = r + 1;
    if (row.size() != table.header.size()) {
      report(row_number, "expected " + std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(row.size()));
      continue;
    }
    AlarmRecord rec;
    bool ok = true;
    if (auto t = parse_time(row[report_col], report_epoch)) {
      rec.report_time = *t;
    } else {
      report(row_number, "malformed report_time '" + row[report_col] + "'");
      ok = false;
    }
    if (clear_idx >= 0 && !trim(row[clear_idx]).empty()) {
      if (auto t = parse_time(row[clear_idx], clear_epoch)) {
        rec.clear_time = *t;
        if (ok && *t < rec.report_time) {
          report(row_number, "clear_time precedes report_time");
          ok = false;
        }
      } else {
        report(row_number, "malformed clear_time '" + row[clear_idx] + "'");
        ok = false;
      }
    }
    if (label_idx >= 0) {
      const std::string v = trim(row[label_idx]);
      if (v == "0" || v == "1") {
        rec.label = v == "1" ? 1 : 0;
      } else if (options.require_label || !v.empty()) {
        report(row_number, "label '" + v + "' is not 0 or 1");
        ok = false;
      }
    }
    rec.severity = trim(row[sev]);
    rec.alarm_type = trim(row[at]);
    rec.site_code = trim(row[site]);
    rec.city = trim(row[city]);
    rec.domain = trim(row[dom]);
    rec.segment_name = trim(row[seg]);
    rec.management_system = trim(row[mgmt]);
    rec.port_type = trim(row[port]);
    rec.equipment_type = trim(row[equip]);
    if (ok) records.push_back(std::move(rec));
  }

  if (problem_count > 0) {
    std::ostringstream msg;
    msg << problem_count << " invalid row(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg << (i ? "; " : "") << problems[i];
    if (problem_count > problems.size()) msg << "; ...";
    throw Error(kStage, msg.str());
  }
  return records;
}

std::vector<AlarmRecord> ingest_csv(const std::string& path, const CsvSchema& schema,
                                    IngestOptions options) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(kStage, "input file '" + path + "' does not exist");
  }
  return parse_alarm_csv(read_file(path), schema, options);
}

std::string write_alarm_csv(std::span<const AlarmRecord> records) {
  std::string out;
  const auto& fields = CsvSchema::logical_fields();
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
  out += '\n';
  for (const auto& r : records) {
    out += format_rfc3339(r.report_time);
    out += ',';
    if (r.clear_time) out += format_rfc3339(*r.clear_time);
    for (const std::string* v :
         {&r.severity, &r.alarm_type, &r.site_code, &r.city, &r.domain, &r.segment_name,
          &r.management_system, &r.port_type, &r.equipment_type}) {
      out += ',';
      out += csv_escape(*v);
    }
    out += ',';
    out += r.label ? '1' : '0';
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alarm type mapping

AlarmTypeMapping AlarmTypeMapping::parse(std::string_view text) {
  std::vector<Rule> rules;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t arrow = line.find("=>");
    if (arrow == std::string::npos) {
      throw Error(kStage, "mapping line " + std::to_string(line_no) + ": expected 'pattern => category'");
    }
    Rule rule;
    rule.pattern = trim(std::string_view(line).substr(0, arrow));
    rule.category = trim(std::string_view(line).substr(arrow + 2));
    if (rule.pattern.rfind("prefix:", 0) == 0) {
      rule.prefix = true;
      rule.pattern = trim(std::string_view(rule.pattern).substr(7));
    }
    if (rule.pattern.empty()) {
      throw Error(kStage, "mapping line " + std::to_string(line_no) + ": empty pattern");
    }
    rules.push_back(std::move(rule));
  }
  return AlarmTypeMapping(std::move(rules));
}

AlarmTypeMapping AlarmTypeMapping::load(const std::string& path) {
  return parse(read_file(path));
}

std::string AlarmTypeMapping::apply(std::string_view alarm_type) const {
  for (const auto& rule : rules_) {
    if (rule.prefix) {
      if (alarm_type.size() >= rule.pattern.size() &&
          to_lower(alarm_type.substr(0, rule.pattern.size())) == to_lower(rule.pattern)) {
        return rule.category;
      }
    } else if (alarm_type == rule.pattern) {
      return rule.category;
    }
  }
  return std::string(alarm_type);
}

nlohmann::json AlarmTypeMapping::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rule : rules_) {
    arr.push_back({{"pattern", rule.pattern}, {"prefix", rule.prefix}, {"category", rule.category}});
  }
  return arr;
}

AlarmTypeMapping AlarmTypeMapping::from_json(const nlohmann::json& j) {
  std::vector<Rule> rules;
  for (const auto& item : j) {
    rules.push_back({item.at("pattern").get<std::string>(), item.at("prefix").get<bool>(),
                     item.at("category").get<std::string>()});
  }
  return AlarmTypeMapping(std::move(rules));
}

// ---------------------------------------------------------------------------
// Encoding

const std::vector<std::string>& default_severity_scale() {
  static const std::vector<std::string> kScale = {"cleared", "indeterminate", "warning",
                                                  "minor",   "major",         "critical"};
  return kScale;
}

int VocabularyEncoder::FeatureVocab::cardinality() const {
  if (kind == Kind::kRange) return range_max + 1;
  return static_cast<int>(values.size()) + 1;
}

VocabularyEncoder VocabularyEncoder::fit(std::span<const AlarmRecord> records,
                                         AlarmTypeMapping mapping,
                                         std::vector<std::string> severity_scale,
                                         std::vector<Feature> features) {
  if (severity_scale.empty()) throw Error(kStage, "severity scale is empty");
  if (features.empty()) throw Error(kStage, "no features configured");

  VocabularyEncoder enc;
  enc.severity_scale_ = std::move(severity_scale);
  enc.mapping_ = std::move(mapping);

  for (Feature f : features) {
    FeatureVocab vocab;
    vocab.feature = f;
    if (f == Feature::kSeverity) {
      vocab.kind = Kind::kOrdinal;
      vocab.values = enc.severity_scale_;
    } else if (range_max(f) > 0) {
      vocab.kind = Kind::kRange;
      vocab.range_max = range_max(f);
    } else {
      vocab.kind = Kind::kVocabulary;
    }
    for (std::size_t i = 0; i < vocab.values.size(); ++i) {
      if (!vocab.index.emplace(vocab.values[i], static_cast<std::int32_t>(i + 1)).second) {
        throw Error(kStage, "duplicate severity level '" + vocab.values[i] + "'");
      }
    }
    enc.vocabs_.push_back(std::move(vocab));
  }

  for (std::size_t r = 0; r < records.size(); ++r) {
    for (auto& vocab : enc.vocabs_) {
      std::string value = vocab.feature == Feature::kAlarmType
                              ? enc.mapping_.apply(records[r].alarm_type)
                              : feature_value(records[r], vocab.feature);
      switch (vocab.kind) {
        case Kind::kOrdinal:
          if (!vocab.index.contains(value)) {
            throw Error(kStage, "record " + std::to_string(r + 1) + ": severity '" + value +
                                    "' is not in the severity scale");
          }
          break;
        case Kind::kRange:
          break;
        case Kind::kVocabulary:
          if (!vocab.index.contains(value)) {
            vocab.values.push_back(value);
            vocab.index.emplace(std::move(value), static_cast<std::int32_t>(vocab.values.size()));
          }
          break;
      }
    }
  }
  return enc;
}

std::int32_t VocabularyEncoder::encode(std::size_t column, std::string_view value) const {
  const FeatureVocab& vocab = vocabs_.at(column);
  if (vocab.kind == Kind::kRange) {
    int v;
    if (parse_int(value, v) && v >= 1 && v <= vocab.range_max) return v;
    return kUnknown;
  }
  auto it = vocab.index.find(std::string(value));
  return it == vocab.index.end() ? kUnknown : it->second;
}

std::optional<std::string> VocabularyEncoder::decode(std::size_t column, std::int32_t code) const {
  const FeatureVocab& vocab = vocabs_.at(column);
  if (code <= 0 || code >= vocab.cardinality()) return std::nullopt;
  if (vocab.kind == Kind::kRange) return std::to_string(code);
  return vocab.values[static_cast<std::size_t>(code - 1)];
}

void VocabularyEncoder::encode_record(const AlarmRecord& record,
                                      std::span<std::int32_t> out) const {
  for (std::size_t c = 0; c < vocabs_.size(); ++c) {
    const Feature f = vocabs_[c].feature;
    out[c] = f == Feature::kAlarmType ? encode(c, mapping_.apply(record.alarm_type))
                                      : encode(c, feature_value(record, f));
  }
}

std::vector<Feature> VocabularyEncoder::features() const {
  std::vector<Feature> out;
  for (const auto& v : vocabs_) out.push_back(v.feature);
  return out;
}

std::vector<std::string> VocabularyEncoder::feature_names() const {
  std::vector<std::string> out;
  for (const auto& v : vocabs_) out.emplace_back(feature_name(v.feature));
  return out;
}

std::vector<int> VocabularyEncoder::cardinalities() const {
  std::vector<int> out;
  for (const auto& v : vocabs_) out.push_back(v.cardinality());
  return out;
}

nlohmann::json VocabularyEncoder::to_json() const {
  nlohmann::json feats = nlohmann::json::array();
  for (const auto& v : vocabs_) {
    nlohmann::json f;
    f["name"] = feature_name(v.feature);
    switch (v.kind) {
      case Kind::kOrdinal: f["kind"] = "ordinal"; break;
      case Kind::kVocabulary: f["kind"] = "vocabulary"; break;
      case Kind::kRange: f["kind"] = "range"; break;
    }
    if (v.kind == Kind::kRange) {
      f["range_max"] = v.range_max;
    } else {
      f["values"] = v.values;
    }
    feats.push_back(std::move(f));
  }
  return {{"format_version", kFormatVersion},
          {"features", std::move(feats)},
          {"severity_scale", severity_scale_},
          {"mapping", mapping_.to_json()}};
}

VocabularyEncoder VocabularyEncoder::from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw Error("io", "unsupported encoder format_version " + j.at("format_version").dump());
  }
  VocabularyEncoder enc;
  enc.severity_scale_ = j.at("severity_scale").get<std::vector<std::string>>();
  enc.mapping_ = AlarmTypeMapping::from_json(j.at("mapping"));
  for (const auto& f : j.at("features")) {
    FeatureVocab vocab;
    const auto feature = feature_from_name(f.at("name").get<std::string>());
    if (!feature) throw Error("io", "unknown feature " + f.at("name").dump());
    vocab.feature = *feature;
    const std::string kind = f.at("kind").get<std::string>();
    if (kind == "range") {
      vocab.kind = Kind::kRange;
      vocab.range_max = f.at("range_max").get<int>();
    } else {
      vocab.kind = kind == "ordinal" ? Kind::kOrdinal : Kind::kVocabulary;
      vocab.values = f.at("values").get<std::vector<std::string>>();
      for (std::size_t i = 0; i < vocab.values.size(); ++i) {
        vocab.index.emplace(vocab.values[i], static_cast<std::int32_t>(i + 1));
      }
    }
    enc.vocabs_.push_back(std::move(vocab));
  }
  return enc;
}

EncodedDataset transform(std::span<const AlarmRecord> records, const VocabularyEncoder& encoder) {
  EncodedDataset ds;
  ds.feature_names = encoder.feature_names();
  ds.cardinalities = encoder.cardinalities();
  ds.rows = records.size();
  ds.codes.resize(records.size() * ds.cols());
  ds.labels.resize(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    encoder.encode_record(records[r], std::span(ds.codes).subspan(r * ds.cols(), ds.cols()));
    ds.labels[r] = static_cast<std::uint8_t>(records[r].label);
  }
  return ds;
}

EncodedDataset EncodedDataset::select_rows(std::span<const std::size_t> indices) const {
  EncodedDataset out;
  out.feature_names = feature_names;
  out.cardinalities = cardinalities;
  out.rows = indices.size();
  out.codes.reserve(indices.size() * cols());
  for (std::size_t i : indices) {
    auto r = row(i);
    out.codes.insert(out.codes.end(), r.begin(), r.end());
    out.labels.push_back(labels[i]);
  }
  return out;
}

EncodedDataset EncodedDataset::select_columns(std::span<const std::size_t> columns) const {
  EncodedDataset out;
  for (std::size_t c : columns) {
    out.feature_names.push_back(feature_names.at(c));
    out.cardinalities.push_back(cardinalities.at(c));
  }
  out.rows = rows;
  out.labels = labels;
  out.codes.reserve(rows * columns.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c : columns) out.codes.push_back(code(r, c));
  }
  return out;
}

std::pair<std::vector<AlarmRecord>, std::vector<AlarmRecord>> split_temporal(
    std::vector<AlarmRecord> records, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(kStage, "train fraction must lie in (0, 1)");
  }
  std::stable_sort(records.begin(), records.end(), [](const AlarmRecord& a, const AlarmRecord& b) {
    return a.report_time < b.report_time;
  });
  const auto cut = static_cast<std::size_t>(train_fraction * static_cast<double>(records.size()));
  std::vector<AlarmRecord> test(std::make_move_iterator(records.begin() + cut),
                                std::make_move_iterator(records.end()));
  records.resize(cut);
  return {std::move(records), std::move(test)};
}

std::pair<std::vector<AlarmRecord>, std::vector<AlarmRecord>> split_random(
    std::vector<AlarmRecord> records, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(kStage, "train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  const auto cut = static_cast<std::size_t>(train_fraction * static_cast<double>(records.size()));
  std::sort(order.begin(), order.begin() + cut);
  std::sort(order.begin() + cut, order.end());
  std::vector<AlarmRecord> train, test;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < cut ? train : test).push_back(std::move(records[order[i]]));
  }
  return {std::move(train), std::move(test)};
}

}  // namespace semcad::data
