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

// Synthetic alarm logs with planted anomaly signatures.
//
// Normal rows draw every categorical field from a Zipf(1.1) distribution over
// a seeded permutation of that field's values. Anomalous rows pick one of S
// signatures, each a fixed (alarm_type, equipment_type, severity) triple, and
// take each signature field with probability `strength`.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "semcad/data_model.hpp"

namespace semcad::synth {

struct SynthConfig {
  std::size_t rows = 20000;
  double anomaly_rate = 0.03;
  // Field name -> number of distinct values. Missing fields use the defaults.
  std::map<std::string, int> cardinalities;
  int signatures = 4;
  double strength = 0.95;
  double zipf_exponent = 1.1;
  std::uint64_t seed = 42;
  data::Timestamp start = 1596844800;  // 2020-08-08T00:00:00Z
  data::Timestamp end = 1611187200;    // 2021-01-21T00:00:00Z, exclusive

  int cardinality(const std::string& field) const;
  void validate() const;

  nlohmann::json to_json() const;
  static SynthConfig from_json(const nlohmann::json& j);
};

// Categorical fields the generator fills, in CSV order.
const std::vector<std::string>& synth_fields();
const std::map<std::string, int>& default_cardinalities();

// The value a signature plants in one field.
struct Signature {
  std::string alarm_type;
  std::string equipment_type;
  std::string severity;
};

struct SynthResult {
  std::vector<data::AlarmRecord> records;  // sorted by report_time
  std::vector<Signature> signatures;
};

SynthResult generate_with_signatures(const SynthConfig& config);
std::vector<data::AlarmRecord> generate(const SynthConfig& config);

}  // namespace semcad::synth
