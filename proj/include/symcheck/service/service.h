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

#ifndef SYMCHECK_SERVICE_SERVICE_H_
#define SYMCHECK_SERVICE_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "symcheck/campaign/simulator.h"
#include "symcheck/campaign/store.h"
#include "symcheck/service/config.h"

namespace symcheck::service {

using Clock = std::function<Timestamp()>;

// Wall clock truncated to seconds.
Timestamp system_now();

constexpr const char* kEventLogName = "events.jsonl";

// Every operation the HTTP API and the CLI expose, taking and returning the
// JSON bodies of the API. One mutex serializes all calls, so the store has a
// single writer and readers see whole operations.
class Service {
 public:
  // With a store directory the event log there is replayed (if present) and
  // appended to; without one the store lives in memory.
  Service(Config config, std::optional<std::filesystem::path> store_dir = std::nullopt,
          Clock clock = system_now);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // {"status": "ok", "lexicon_version"}
  Json health() const;

  Json register_subject(const Json& body);
  Json get_subject(std::string_view subject_id) const;

  // {"campaign_id"?, "campaign"?, "population"?}; absent parts come from the
  // service config.
  Json create_campaign(const Json& body);
  // {"seed"?}; the default seed derives from the config seed and day index.
  Json run_day(std::string_view campaign_id, const Json& body);

  // Interactive calls: {"subject_id", "already_called_today"?}, then
  // {"text"} per callee turn.
  Json start_session(const Json& body);
  Json utterance(std::string_view session_id, const Json& body);
  Json get_session(std::string_view session_id) const;

  Json escalations(std::optional<std::string_view> status) const;
  Json get_escalation(std::string_view record_id) const;
  // {"verdict", "labels"?, "operator_id"?}
  Json review(std::string_view record_id, const Json& body);

  Json hitl_batch(std::size_t k, std::optional<Date> from = std::nullopt,
                  std::optional<Date> to = std::nullopt) const;
  // {"examples": [{"text", "label"}]} or a bare array of examples.
  Json apply_labels(const Json& body);

  Json metrics(std::optional<Date> from = std::nullopt, std::optional<Date> to = std::nullopt) const;
  campaign::MetricsReport report(Date from, Date to) const;
  void record_report(const campaign::MetricsReport& report, Timestamp ts);

  // {"observations": [...], "prior"?, "features"?, "G"?}
  Json spread_estimate(const Json& body) const;

  Json purge(Timestamp now);

  // Simulation support for the CLI and tests.
  campaign::HitlRound hitl_round_from_truth(std::string_view campaign_id, std::size_t k, Date from,
                                            Date to, Timestamp ts);
  const campaign::CampaignState& campaign_state(std::string_view campaign_id) const;

  const Config& config() const { return config_; }
  const campaign::Store& store() const { return *store_; }
  std::optional<Date> first_day() const;
  std::optional<Date> last_day() const;

 private:
  campaign::CampaignState& state_for(std::string_view campaign_id);
  campaign::CampaignState rebuild_state(const campaign::CampaignInfo& info) const;
  Json create_campaign_locked(std::string campaign_id, campaign::CampaignConfig cc,
                              popsim::PopulationConfig pc, Timestamp ts);
  Timestamp now() const { return clock_(); }

  mutable std::mutex mu_;
  Config config_;
  Clock clock_;
  std::unique_ptr<campaign::JsonlEventLog> log_;
  std::optional<campaign::Store> store_;
  std::unique_ptr<campaign::Simulator> simulator_;
  std::map<std::string, campaign::CampaignState, std::less<>> campaigns_;
  std::map<std::string, dialog::CallSession, std::less<>> active_;
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> labeled_texts_;
  std::uint64_t live_counter_ = 0;
};

}  // namespace symcheck::service

#endif  // SYMCHECK_SERVICE_SERVICE_H_
