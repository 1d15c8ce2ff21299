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

#include "symcheck/campaign/campaign.h"

#include <cstdio>
#include <sstream>

#include "symcheck/common/errors.h"

namespace symcheck::campaign {

void CampaignConfig::validate() const {
  if (window_days < 1) throw ContractViolation("window_days must be >= 1");
  if (am_hour < 0 || am_hour > 23 || pm_hour < 0 || pm_hour > 23 || am_hour >= pm_hour) {
    throw ContractViolation("call hours must satisfy 0 <= am_hour < pm_hour <= 23");
  }
  if (retry_delay_hours < 1) throw ContractViolation("retry_delay_hours must be >= 1");
  if (max_retries < 0) throw ContractViolation("max_retries must be >= 0");
  if (am_hour + max_retries * retry_delay_hours >= pm_hour) {
    throw ContractViolation("AM retries must finish before the PM call");
  }
  if (pm_hour + max_retries * retry_delay_hours > 23) {
    throw ContractViolation("PM retries must finish within the day");
  }
  if (retention_days < 1) throw ContractViolation("retention_days must be >= 1");
  if (nominal_turns < 1) throw ContractViolation("nominal_turns must be >= 1");
}

std::string_view slot_name(Slot slot) { return slot == Slot::kAm ? "AM" : "PM"; }

Slot parse_slot(std::string_view name) {
  if (name == "AM") return Slot::kAm;
  if (name == "PM") return Slot::kPm;
  throw ParseError("unknown call slot: " + std::string(name));
}

std::string_view attempt_result_name(AttemptResult result) {
  switch (result) {
    case AttemptResult::kCompleted:
      return "COMPLETED";
    case AttemptResult::kHangup:
      return "HANGUP";
    case AttemptResult::kConnectionFailure:
      return "CONNECTION_FAILURE";
  }
  return "COMPLETED";
}

AttemptResult parse_attempt_result(std::string_view name) {
  if (name == "COMPLETED") return AttemptResult::kCompleted;
  if (name == "HANGUP") return AttemptResult::kHangup;
  if (name == "CONNECTION_FAILURE") return AttemptResult::kConnectionFailure;
  throw ParseError("unknown attempt result: " + std::string(name));
}

std::string attempt_id_for(std::string_view subject_id, Date day, Slot slot, int retry_depth) {
  std::string id = "att-" + format_date(day) + "-" + std::string(subject_id) + "-" +
                   std::string(slot_name(slot));
  if (retry_depth > 0) id += "-r" + std::to_string(retry_depth);
  return id;
}

std::vector<CallAttempt> schedule(std::span<const Subject> subjects, Date day,
                                  const CampaignConfig& config) {
  std::vector<CallAttempt> out;
  for (Slot slot : {Slot::kAm, Slot::kPm}) {
    const int hour = slot == Slot::kAm ? config.am_hour : config.pm_hour;
    for (const auto& subject : subjects) {
      if (!subject.active_on(day)) continue;
      out.push_back(CallAttempt{
          .attempt_id = attempt_id_for(subject.subject_id, day, slot, 0),
          .subject_id = subject.subject_id,
          .planned_at = at_hour(day, hour),
          .slot = slot,
      });
    }
  }
  return out;
}

std::optional<CallAttempt> retry_for(const CallAttempt& failed, const CampaignConfig& config) {
  if (failed.retry_depth >= config.max_retries) return std::nullopt;
  const int depth = failed.retry_depth + 1;
  return CallAttempt{
      .attempt_id =
          attempt_id_for(failed.subject_id, date_of(failed.planned_at), failed.slot, depth),
      .subject_id = failed.subject_id,
      .planned_at = failed.planned_at + std::chrono::hours{config.retry_delay_hours},
      .slot = failed.slot,
      .retry_of = failed.attempt_id,
      .retry_depth = depth,
  };
}

DayStats& DayStats::operator+=(const DayStats& o) {
  turns += o.turns;
  false_negatives += o.false_negatives;
  false_positives += o.false_positives;
  attempts += o.attempts;
  answered += o.answered;
  connection_failures += o.connection_failures;
  completed += o.completed;
  hangups += o.hangups;
  failed += o.failed;
  escalations += o.escalations;
  return *this;
}

MetricsReport make_report(Date from, Date to, const DayStats& t) {
  auto ratio = [](std::int64_t n, std::int64_t d) {
    return d == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(d);
  };
  return MetricsReport{
      .from = from,
      .to = to,
      .total_turns = t.turns,
      .fn_count = t.false_negatives,
      .fp_count = t.false_positives,
      .fn_ratio = ratio(t.false_negatives, t.turns),
      .fp_ratio = ratio(t.false_positives, t.turns),
      .calls_total = t.completed + t.hangups + t.failed,
      .completed = t.completed,
      .hangups = t.hangups,
      .failed = t.failed,
      .attempts = t.attempts,
      .connection_failures = t.connection_failures,
      .escalations = t.escalations,
      .hangup_rate = ratio(t.hangups, t.answered),
      .failure_rate = ratio(t.connection_failures, t.attempts),
  };
}

namespace {

std::string percent(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * r);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_report_table(std::span<const MetricsReport> periods) {
  constexpr std::size_t kLabel = 16;
  constexpr std::size_t kCol = 11;
  std::ostringstream out;
  out << std::string(kLabel, ' ');
  for (const auto& p : periods) {
    out << "  " << pad(format_date(p.from) + ".." + format_date(p.to), 2 * kCol + 1);
  }
  out << '\n' << std::string(kLabel, ' ');
  for (std::size_t i = 0; i < periods.size(); ++i) {
    out << "  " << pad("Count", kCol) << ' ' << pad("Ratio", kCol);
  }
  out << '\n';
  auto row = [&](const char* label, auto count, auto ratio) {
    std::string name = label;
    name.resize(kLabel, ' ');
    out << name;
    for (const auto& p : periods) {
      out << "  " << pad(std::to_string(count(p)), kCol) << ' ' << pad(percent(ratio(p)), kCol);
    }
    out << '\n';
  };
  row("False negative", [](const auto& p) { return p.fn_count; },
      [](const auto& p) { return p.fn_ratio; });
  row("False positive", [](const auto& p) { return p.fp_count; },
      [](const auto& p) { return p.fp_ratio; });
  row("Total turns", [](const auto& p) { return p.total_turns; },
      [](const auto& p) { return p.total_turns > 0 ? 1.0 : 0.0; });
  row("Calls", [](const auto& p) { return p.calls_total; },
      [](const auto& p) { return p.calls_total > 0 ? 1.0 : 0.0; });
  row("Hang-ups", [](const auto& p) { return p.hangups; },
      [](const auto& p) { return p.hangup_rate; });
  row("Conn. failures", [](const auto& p) { return p.connection_failures; },
      [](const auto& p) { return p.failure_rate; });
  return out.str();
}

}  // namespace symcheck::campaign
