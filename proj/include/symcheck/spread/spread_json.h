// Copyright 2026 The Symcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYMCHECK_SPREAD_SPREAD_JSON_H_
#define SYMCHECK_SPREAD_SPREAD_JSON_H_

#include <string_view>
#include <vector>

#include <json.hpp>
#include "symcheck/spread/spread.h"

namespace symcheck::spread {

// Model settings as read from config: {"prior": {...}, "features": [...],
// "grid": G}. Absent parts keep their defaults.
struct SpreadConfig {
  SpreadPrior prior;
  FeatureModel model = FeatureModel::smell_loss();
  std::size_t grid = kDefaultGrid;
};

void to_json(nlohmann::json& j, const SpreadPrior& p);
void from_json(const nlohmann::json& j, SpreadPrior& p);
void to_json(nlohmann::json& j, const FeatureModel& fm);
void from_json(const nlohmann::json& j, FeatureModel& fm);
void to_json(nlohmann::json& j, const SpreadConfig& c);
void from_json(const nlohmann::json& j, SpreadConfig& c);

// {"id", "features": {name: 0|1|null}, "confirmed"}. Features the object
// does not name are MISSING; names unknown to the model are rejected.
Observation observation_from_json(const nlohmann::json& j, const FeatureModel& fm);
nlohmann::json observation_to_json(const Observation& obs, const FeatureModel& fm);

// One observation per non-blank line.
std::vector<Observation> parse_observations(std::string_view jsonl, const FeatureModel& fm);

// Grid arrays are included; quadrature nodes only when asked.
nlohmann::json result_to_json(const PosteriorResult& r, const std::vector<Observation>& obs,
                              bool with_nodes = false);

}  // namespace symcheck::spread

#endif  // SYMCHECK_SPREAD_SPREAD_JSON_H_
