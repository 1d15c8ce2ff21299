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

#ifndef SYMCHECK_SERVICE_CONFIG_H_
#define SYMCHECK_SERVICE_CONFIG_H_

#include <cstdint>
#include <filesystem>

#include "symcheck/campaign/campaign.h"
#include "symcheck/io/json.h"
#include "symcheck/popsim/popsim.h"
#include "symcheck/spread/spread_json.h"
#include "symcheck/triage/triage.h"

namespace symcheck::service {

struct DataPaths {
  std::filesystem::path script;
  std::filesystem::path templates;
  std::filesystem::path lexicon;
};

struct Config {
  triage::Policy policy;
  campaign::CampaignConfig campaign;
  popsim::PopulationConfig population;
  spread::SpreadConfig spread;
  int retention_days = 30;
  std::uint64_t seed = 7;
  DataPaths data;

  // Throws ContractViolation on out-of-range values or missing data files.
  void validate() const;
};

// $SYMCHECK_DATA_DIR when set, otherwise the source tree's data/.
std::filesystem::path default_data_dir();

Config default_config();

// Relative data paths resolve against base_dir. Unknown top-level keys are
// rejected so typos do not silently fall back to defaults.
Config parse_config(const Json& j, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& path);
Json config_to_json(const Config& config);

}  // namespace symcheck::service

#endif  // SYMCHECK_SERVICE_CONFIG_H_
