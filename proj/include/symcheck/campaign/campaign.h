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

#ifndef SYMCHECK_CAMPAIGN_CAMPAIGN_H_
#define SYMCHECK_CAMPAIGN_CAMPAIGN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symcheck/campaign/subject.h"
#include "symcheck/common/time.h"

namespace symcheck::campaign {

struct CampaignConfig {
  int window_days = 14;
  int am_hour = 10;
  int pm_hour = 16;
  int retry_delay_hours = 1;
  int max_retries = 2;
  int retention_days = 30;
  // Script length the hang-up hazard is calibrated against.
  int nominal_turns = 5;

  void validate() const;
};

enum class Slot { kAm, kPm };
enum class AttemptResult { kCompleted, kHangup, kConnectionFailure };

std::string_view slot_name(Slot slot);
Slot parse_slot(std::string_view name);
std::string_view attempt_result_name(AttemptResult result);
AttemptResult parse_attempt_result(std::string_view name);

struct CallAttempt {
  std::string attempt_id;
  std::string subject_id;
  Timestamp planned_at{};
  Slot slot = Slot::kAm;
  std::optional<AttemptResult> result;
  std::optional<std::string> session_ref;
  std::optional<std::string> retry_of;
  int retry_depth = 0;
};

std::string attempt_id_for(std::string_view subject_id, Date day, Slot slot, int retry_depth);

// Two primary attempts (AM, PM) for every subject active on `day`.
std::vector<CallAttempt> schedule(std::span<const Subject> subjects, Date day,
                                  const CampaignConfig& config);

// Retry of a failed attempt, `retry_delay_hours` later. Empty when the retry
// chain is already max_retries long.
std::optional<CallAttempt> retry_for(const CallAttempt& failed, const CampaignConfig& config);

// Turn-level error accounting for one call.
struct TurnStats {
  std::int64_t turns = 0;
  std::int64_t false_negatives = 0;
  std::int64_t false_positives = 0;
};

// Aggregates kept per calendar day; they survive the retention purge.
struct DayStats {
  std::int64_t turns = 0;
  std::int64_t false_negatives = 0;
  std::int64_t false_positives = 0;
  std::int64_t attempts = 0;
  std::int64_t answered = 0;
  std::int64_t connection_failures = 0;
  std::int64_t completed = 0;
  std::int64_t hangups = 0;
  std::int64_t failed = 0;  // slots whose final retry also failed
  std::int64_t escalations = 0;

  DayStats& operator+=(const DayStats& other);
  bool operator==(const DayStats&) const = default;
};

struct MetricsReport {
  Date from{};
  Date to{};  // inclusive
  std::int64_t total_turns = 0;
  std::int64_t fn_count = 0;
  std::int64_t fp_count = 0;
  double fn_ratio = 0.0;
  double fp_ratio = 0.0;
  // completed + hangups + failed
  std::int64_t calls_total = 0;
  std::int64_t completed = 0;
  std::int64_t hangups = 0;
  std::int64_t failed = 0;
  std::int64_t attempts = 0;
  std::int64_t connection_failures = 0;
  std::int64_t escalations = 0;
  // hangups / answered attempts
  double hangup_rate = 0.0;
  // connection failures / attempts (retries included)
  double failure_rate = 0.0;
};

MetricsReport make_report(Date from, Date to, const DayStats& totals);

// Table-shaped text: one column pair (Count, Ratio) per period.
std::string format_report_table(std::span<const MetricsReport> periods);

}  // namespace symcheck::campaign

#endif  // SYMCHECK_CAMPAIGN_CAMPAIGN_H_
