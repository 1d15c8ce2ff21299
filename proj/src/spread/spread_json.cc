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

#include "symcheck/spread/spread_json.h"

#include <sstream>
#include <string>

#include "symcheck/common/errors.h"

namespace symcheck::spread {

using nlohmann::json;

void to_json(json& j, const SpreadPrior& p) {
  j = json{{"pi_t", p.pi_t}, {"alpha", p.alpha}, {"beta", p.beta}};
}

void from_json(const json& j, SpreadPrior& p) {
  p.pi_t = j.value("pi_t", p.pi_t);
  p.alpha = j.value("alpha", p.alpha);
  p.beta = j.value("beta", p.beta);
}

void to_json(json& j, const FeatureModel& fm) {
  j = json::array();
  for (const auto& f : fm.features) {
    j.push_back({{"name", f.name}, {"sensitivity", f.sensitivity}, {"false_alarm", f.false_alarm}});
  }
}

void from_json(const json& j, FeatureModel& fm) {
  if (!j.is_array()) throw ParseError("features must be an array");
  fm.features.clear();
  for (const auto& f : j) {
    fm.features.push_back(Feature{.name = f.at("name").get<std::string>(),
                                  .sensitivity = f.at("sensitivity").get<double>(),
                                  .false_alarm = f.at("false_alarm").get<double>()});
  }
}

void to_json(json& j, const SpreadConfig& c) {
  j = json{{"prior", c.prior}, {"features", c.model}, {"grid", c.grid}};
}

void from_json(const json& j, SpreadConfig& c) {
  if (j.contains("prior")) c.prior = j.at("prior").get<SpreadPrior>();
  if (j.contains("features")) c.model = j.at("features").get<FeatureModel>();
  if (j.contains("grid")) c.grid = j.at("grid").get<std::size_t>();
}

Observation observation_from_json(const json& j, const FeatureModel& fm) {
  try {
    Observation obs;
    obs.subject_id = j.at("id").get<std::string>();
    obs.confirmed = j.value("confirmed", false);
    obs.features.assign(fm.size(), FeatureValue::kMissing);
    if (j.contains("features")) {
      for (const auto& [name, value] : j.at("features").items()) {
        const std::size_t v = fm.index_of(name);
        if (value.is_null()) continue;
        const int x = value.is_boolean() ? static_cast<int>(value.get<bool>()) : value.get<int>();
        if (x != 0 && x != 1) throw ParseError("feature " + name + " must be 0, 1 or null");
        obs.features[v] = x == 1 ? FeatureValue::kPresent : FeatureValue::kAbsent;
      }
    }
    return obs;
  } catch (const NotFound& e) {
    throw ContractViolation(e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad observation: ") + e.what());
  }
}

json observation_to_json(const Observation& obs, const FeatureModel& fm) {
  json features = json::object();
  for (std::size_t v = 0; v < fm.size() && v < obs.features.size(); ++v) {
    if (obs.features[v] == FeatureValue::kMissing) continue;
    features[fm.features[v].name] = obs.features[v] == FeatureValue::kPresent ? 1 : 0;
  }
  return json{{"id", obs.subject_id}, {"features", features}, {"confirmed", obs.confirmed}};
}

std::vector<Observation> parse_observations(std::string_view jsonl, const FeatureModel& fm) {
  std::vector<Observation> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("observations line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(observation_from_json(j, fm));
  }
  return out;
}

json result_to_json(const PosteriorResult& r, const std::vector<Observation>& obs, bool with_nodes) {
  json z = json::array();
  for (std::size_t i = 0; i < r.z_post.size(); ++i) {
    z.push_back({{"id", i < obs.size() ? obs[i].subject_id : std::to_string(i)},
                 {"p_infected", r.z_post[i]}});
  }
  json j{{"p_t1", r.p_t1},
         {"p_t0", r.p_t0},
         {"q_mean", r.q_mean},
         {"q_mean_given_t1", r.q_mean_given_t1},
         {"q_ci", {r.q_ci[0], r.q_ci[1]}},
         {"log_z", r.log_z},
         {"z_post", z},
         {"q_grid", r.q_grid},
         {"q_density", r.q_density}};
  if (with_nodes) {
    j["nodes"] = r.nodes;
    j["node_weights"] = r.node_weights;
    j["node_density"] = r.node_density;
  }
  return j;
}

}  // namespace symcheck::spread
