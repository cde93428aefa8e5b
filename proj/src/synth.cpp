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

#include "semcad/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "semcad/common.hpp"

namespace semcad::synth {
namespace {

constexpr const char* kStage = "synth";

// Draws a rank from a truncated Zipf distribution by inverting the CDF.
class ZipfSampler {
 public:
  ZipfSampler(int n, double exponent) : cdf_(static_cast<std::size_t>(n)) {
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      total += std::pow(static_cast<double>(k + 1), -exponent);
      cdf_[k] = total;
    }
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
  }

  int sample(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
  }

 private:
  std::vector<double> cdf_;
};

struct FieldModel {
  std::string name;
  std::vector<std::string> values;  // values[perm[rank]]
  std::vector<int> perm;
  ZipfSampler zipf;

  const std::string& draw(Rng& rng) const { return values[perm[zipf.sample(rng)]]; }
};

std::string value_name(const std::string& field, int index) {
  static const std::map<std::string, std::string> prefixes = {
      {"alarm_type", "AT"},      {"site_code", "SITE"},        {"city", "CITY"},
      {"domain", "DOM"},         {"segment_name", "SEG"},      {"management_system", "NMS"},
      {"port_type", "PORT"},     {"equipment_type", "EQ"},
  };
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%03d", prefixes.at(field).c_str(), index + 1);
  return buf;
}

std::string& field_ref(data::AlarmRecord& r, const std::string& field) {
  if (field == "severity") return r.severity;
  if (field == "alarm_type") return r.alarm_type;
  if (field == "site_code") return r.site_code;
  if (field == "city") return r.city;
  if (field == "domain") return r.domain;
  if (field == "segment_name") return r.segment_name;
  if (field == "management_system") return r.management_system;
  if (field == "port_type") return r.port_type;
  return r.equipment_type;
}

}  // namespace

const std::vector<std::string>& synth_fields() {
  static const std::vector<std::string> fields = {
      "severity",     "alarm_type",        "site_code", "city",          "domain",
      "segment_name", "management_system", "port_type", "equipment_type"};
  return fields;
}

const std::map<std::string, int>& default_cardinalities() {
  static const std::map<std::string, int> cards = {
      {"severity", 6},       {"alarm_type", 114},       {"site_code", 441},
      {"city", 111},         {"domain", 9},             {"segment_name", 405},
      {"management_system", 12}, {"port_type", 12},     {"equipment_type", 18}};
  return cards;
}

int SynthConfig::cardinality(const std::string& field) const {
  if (auto it = cardinalities.find(field); it != cardinalities.end()) return it->second;
  return default_cardinalities().at(field);
}

void SynthConfig::validate() const {
  if (rows == 0) throw Error(kStage, "rows must be positive");
  if (!(anomaly_rate > 0.0 && anomaly_rate < 0.5)) {
    throw Error(kStage, "anomaly_rate must lie in (0, 0.5)");
  }
  if (!(strength >= 0.0 && strength <= 1.0)) throw Error(kStage, "strength must lie in [0, 1]");
  if (signatures < 1) throw Error(kStage, "signatures must be at least 1");
  if (!(zipf_exponent >= 0.0) || !std::isfinite(zipf_exponent)) {
    throw Error(kStage, "zipf_exponent must be a finite non-negative number");
  }
  if (end <= start) throw Error(kStage, "time window end must be after start");
  for (const auto& [field, card] : cardinalities) {
    if (!default_cardinalities().contains(field)) {
      throw Error(kStage, "unknown field '" + field + "' in cardinalities");
    }
  }
  for (const auto& field : synth_fields()) {
    const int card = cardinality(field);
    if (card < 2) throw Error(kStage, "cardinality of '" + field + "' must be at least 2");
  }
  const auto scale_size = static_cast<int>(data::default_severity_scale().size());
  if (cardinality("severity") > scale_size) {
    throw Error(kStage, "severity cardinality exceeds the " + std::to_string(scale_size) +
                            "-level severity scale");
  }
}

nlohmann::json SynthConfig::to_json() const {
  nlohmann::json cards = nlohmann::json::object();
  for (const auto& field : synth_fields()) cards[field] = cardinality(field);
  return {{"rows", rows},
          {"anomaly_rate", anomaly_rate},
          {"cardinalities", std::move(cards)},
          {"signatures", signatures},
          {"strength", strength},
          {"zipf_exponent", zipf_exponent},
          {"seed", seed},
          {"start", data::format_rfc3339(start)},
          {"end", data::format_rfc3339(end)}};
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
  SynthConfig c;
  try {
    if (j.contains("rows")) c.rows = j.at("rows").get<std::size_t>();
    if (j.contains("anomaly_rate")) c.anomaly_rate = j.at("anomaly_rate").get<double>();
    if (j.contains("cardinalities")) {
      for (const auto& [k, v] : j.at("cardinalities").items()) c.cardinalities[k] = v.get<int>();
    }
    if (j.contains("signatures")) c.signatures = j.at("signatures").get<int>();
    if (j.contains("strength")) c.strength = j.at("strength").get<double>();
    if (j.contains("zipf_exponent")) c.zipf_exponent = j.at("zipf_exponent").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    for (const char* key : {"start", "end"}) {
      if (!j.contains(key)) continue;
      const auto& v = j.at(key);
      data::Timestamp t;
      if (v.is_number_integer()) {
        t = v.get<data::Timestamp>();
      } else {
        auto parsed = data::parse_rfc3339(v.get<std::string>());
        if (!parsed) throw Error(kStage, std::string("malformed ") + key + " timestamp");
        t = *parsed;
      }
      (std::string(key) == "start" ? c.start : c.end) = t;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(kStage, std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

SynthResult generate_with_signatures(const SynthConfig& config) {
  config.validate();

  std::vector<FieldModel> fields;
  for (const auto& name : synth_fields()) {
    const int card = config.cardinality(name);
    FieldModel fm{name, {}, {}, ZipfSampler(card, config.zipf_exponent)};
    for (int i = 0; i < card; ++i) {
      fm.values.push_back(name == "severity" ? data::default_severity_scale()[i]
                                             : value_name(name, i));
    }
    fm.perm.resize(card);
    std::iota(fm.perm.begin(), fm.perm.end(), 0);
    Rng perm_rng(derive_seed(config.seed, "synth-permutation-" + name));
    perm_rng.shuffle(fm.perm);
    fields.push_back(std::move(fm));
  }
  auto field_model = [&](const std::string& name) -> const FieldModel& {
    return *std::find_if(fields.begin(), fields.end(),
                         [&](const FieldModel& f) { return f.name == name; });
  };

  // Signature values are drawn uniformly over the field's values (not from
  // the Zipf background), distinct across signatures while values remain.
  SynthResult result;
  Rng sig_rng(derive_seed(config.seed, "synth-signatures"));
  const std::vector<std::string> sig_fields = {"alarm_type", "equipment_type", "severity"};
  std::map<std::string, std::vector<std::string>> chosen;
  for (int s = 0; s < config.signatures; ++s) {
    Signature sig;
    for (const auto& name : sig_fields) {
      const FieldModel& fm = field_model(name);
      auto& used = chosen[name];
      std::string value = fm.values[sig_rng.below(fm.values.size())];
      const bool can_be_distinct = used.size() < fm.values.size();
      for (int attempt = 0; can_be_distinct && attempt < 1000 &&
                            std::find(used.begin(), used.end(), value) != used.end();
           ++attempt) {
        value = fm.values[sig_rng.below(fm.values.size())];
      }
      used.push_back(value);
      (name == "alarm_type" ? sig.alarm_type
                            : name == "equipment_type" ? sig.equipment_type : sig.severity) = value;
    }
    result.signatures.push_back(std::move(sig));
  }

  const auto anomalies = static_cast<std::size_t>(
      std::llround(static_cast<double>(config.rows) * config.anomaly_rate));
  std::vector<std::uint8_t> is_anomaly(config.rows, 0);
  {
    std::vector<std::size_t> idx(config.rows);
    std::iota(idx.begin(), idx.end(), 0);
    Rng quota_rng(derive_seed(config.seed, "synth-quota"));
    quota_rng.shuffle(idx);
    for (std::size_t i = 0; i < anomalies; ++i) is_anomaly[idx[i]] = 1;
  }

  Rng row_rng(derive_seed(config.seed, "synth-rows"));
  const auto window = static_cast<std::uint64_t>(config.end - config.start);
  auto& records = result.records;
  records.reserve(config.rows);
  for (std::size_t i = 0; i < config.rows; ++i) {
    data::AlarmRecord r;
    r.report_time = config.start + static_cast<data::Timestamp>(row_rng.below(window));
    r.clear_time = r.report_time + 60 + static_cast<data::Timestamp>(row_rng.below(7200));
    for (const auto& fm : fields) field_ref(r, fm.name) = fm.draw(row_rng);
    r.label = is_anomaly[i];
    if (r.label) {
      const auto& sig = result.signatures[row_rng.below(result.signatures.size())];
      if (row_rng.bernoulli(config.strength)) r.alarm_type = sig.alarm_type;
      if (row_rng.bernoulli(config.strength)) r.equipment_type = sig.equipment_type;
      if (row_rng.bernoulli(config.strength)) r.severity = sig.severity;
    }
    records.push_back(std::move(r));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const data::AlarmRecord& a, const data::AlarmRecord& b) {
                     return a.report_time < b.report_time;
                   });
  return result;
}

std::vector<data::AlarmRecord> generate(const SynthConfig& config) {
  return generate_with_signatures(config).records;
}

}  // namespace semcad::synth
