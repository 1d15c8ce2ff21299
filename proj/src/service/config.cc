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

#include "symcheck/service/config.h"

#include <cstdlib>
#include <set>

#include "symcheck/common/errors.h"

#ifndef SYMCHECK_DATA_DIR
#define SYMCHECK_DATA_DIR "data"
#endif

namespace symcheck::service {

namespace fs = std::filesystem;

void Config::validate() const {
  policy.validate();
  campaign.validate();
  population.validate();
  spread.prior.validate();
  spread.model.validate();
  if (spread.grid < spread::kMinGrid) throw ContractViolation("spread.grid must be >= 64");
  if (retention_days < 1) throw ContractViolation("retention_days must be >= 1");
  for (const auto* p : {&data.script, &data.templates, &data.lexicon}) {
    if (!fs::exists(*p)) throw ContractViolation("data file not found: " + p->string());
  }
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("SYMCHECK_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return SYMCHECK_DATA_DIR;
}

Config default_config() {
  const fs::path dir = default_data_dir();
  Config c;
  c.population.n_subjects = 100;
  c.population.enrolled_at = parse_date("2020-03-02");
  c.population.seed = c.seed;
  c.data = {dir / "script_en.json", dir / "templates_en.json", dir / "seed_lexicon.json"};
  return c;
}

Config parse_config(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::set<std::string> kKeys = {"version",  "seed",       "retention_days", "data",
                                              "policy",   "campaign",   "population",     "spread"};
  for (const auto& [key, value] : j.items()) {
    if (kKeys.count(key) == 0) throw ParseError("unknown config key: " + key);
  }
  Config c = default_config();
  try {
    c.seed = j.value("seed", c.seed);
    c.population.seed = c.seed;
    if (j.contains("policy")) j.at("policy").get_to(c.policy);
    if (j.contains("campaign")) j.at("campaign").get_to(c.campaign);
    if (j.contains("population")) {
      j.at("population").get_to(c.population);
      if (!j.at("population").contains("seed")) c.population.seed = c.seed;
    }
    if (j.contains("spread")) j.at("spread").get_to(c.spread);
    c.retention_days = j.value("retention_days", c.campaign.retention_days);
    c.campaign.retention_days = c.retention_days;
    c.population.window_days = c.campaign.window_days;
    if (j.contains("data")) {
      const auto& d = j.at("data");
      auto resolve = [&](const char* key, fs::path& out) {
        if (d.contains(key)) {
          const fs::path p = d.at(key).get<std::string>();
          out = p.is_absolute() ? p : base_dir / p;
        }
      };
      resolve("script", c.data.script);
      resolve("templates", c.data.templates);
      resolve("lexicon", c.data.lexicon);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

Config load_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

Json config_to_json(const Config& c) {
  return Json{{"seed", c.seed},
              {"retention_days", c.retention_days},
              {"data",
               {{"script", c.data.script.string()},
                {"templates", c.data.templates.string()},
                {"lexicon", c.data.lexicon.string()}}},
              {"policy", c.policy},
              {"campaign", c.campaign},
              {"population", c.population},
              {"spread", c.spread}};
}

}  // namespace symcheck::service
