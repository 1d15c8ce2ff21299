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

#ifndef SYMCHECK_CAMPAIGN_STORE_H_
#define SYMCHECK_CAMPAIGN_STORE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symcheck/campaign/campaign.h"
#include "symcheck/dialog/dialog.h"
#include "symcheck/io/json.h"
#include "symcheck/nlu/nlu.h"
#include "symcheck/triage/triage.h"

namespace symcheck::campaign {

enum class EventKind { kSessionEvent, kEscalation, kReview, kLabel, kPurge, kReport };

std::string_view event_kind_name(EventKind kind);
EventKind parse_event_kind(std::string_view name);

struct EventRecord {
  std::int64_t seq = 0;
  Timestamp ts{};
  EventKind kind = EventKind::kSessionEvent;
  Json payload;
};

Json event_to_json(const EventRecord& event);
EventRecord event_from_json(const Json& j);

class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void append(const EventRecord& event) = 0;
};

// Append-only JSON-lines file, one event per line, flushed per event.
class JsonlEventLog final : public EventSink {
 public:
  explicit JsonlEventLog(const std::filesystem::path& path);
  void append(const EventRecord& event) override;

  const std::filesystem::path& path() const { return path_; }

  // Reads every event; throws ParseError on a malformed line or a sequence
  // number that does not strictly increase.
  static std::vector<EventRecord> read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// One resolved call attempt as produced by the simulator.
struct CallRecord {
  CallAttempt attempt;
  // Present for answered calls.
  std::optional<dialog::CallSession> session;
  triage::Decision decision;
  TurnStats stats;
  // A connection failure with no retry left.
  bool final_failure = false;
};

struct StoredSession {
  dialog::CallSession session;
  std::optional<triage::Reason> escalation;
  std::optional<std::string> record_id;
  bool live = false;
};

struct CampaignInfo {
  std::string campaign_id;
  Json spec;
  int days_run = 0;
};

// Engine-visible state, built exclusively by applying events. Every mutation
// commits an event (sequence number, timestamp, kind, payload) to the sink
// and then applies it, so replaying a log rebuilds an identical store.
// Not internally synchronized; callers serialize writers.
class Store {
 public:
  // Commits the initial lexicon as the first event.
  Store(nlu::Lexicon lexicon, triage::Policy policy, Timestamp opened_at,
        EventSink* sink = nullptr);

  // Rebuilds a store from a log. The first event must be the lexicon load
  // written by the constructor.
  static Store replay(std::span<const EventRecord> events, triage::Policy policy);

  void set_sink(EventSink* sink) { sink_ = sink; }

  void register_subject(const Subject& subject, Timestamp ts);
  void create_campaign(std::string_view campaign_id, const Json& spec, Timestamp ts);
  void complete_day(std::string_view campaign_id, Date day, Timestamp ts);

  // Persists a resolved attempt; escalated sessions are enqueued for review.
  // Returns the escalation record id, if any.
  std::optional<std::string> record_call(const CallRecord& call, Timestamp ts);

  // Persists a terminal interactive session and its triage decision.
  std::optional<std::string> record_live_session(const dialog::CallSession& session,
                                                 const triage::Decision& decision, Timestamp ts);

  // Throws NotFound / AlreadyReviewed / ContractViolation without writing.
  std::vector<nlu::LabeledExample> review(std::string_view record_id,
                                          const triage::ReviewDecision& decision, Timestamp ts);

  // train_update on the live lexicon; returns the new version.
  std::int64_t apply_labels(std::span<const nlu::LabeledExample> examples, Timestamp ts);

  // Removes sessions, escalations and call attempts older than
  // now - retention_days.
  // Day aggregates are kept. Returns the number of removed records.
  std::size_t purge(Timestamp now, int retention_days);

  MetricsReport report(Date from, Date to) const;
  void record_report(const MetricsReport& report, Timestamp ts);

  const nlu::Lexicon& lexicon() const { return *lexicon_; }
  std::shared_ptr<const nlu::Lexicon> lexicon_snapshot() const { return lexicon_; }
  const triage::Policy& policy() const { return policy_; }
  const triage::ReviewQueue& queue() const { return queue_; }
  const std::map<std::string, Subject, std::less<>>& subjects() const { return subjects_; }
  const std::map<std::string, StoredSession, std::less<>>& sessions() const { return sessions_; }
  const std::map<std::string, CallAttempt, std::less<>>& attempts() const { return attempts_; }
  const std::map<Date, DayStats>& days() const { return days_; }
  const std::map<std::string, CampaignInfo, std::less<>>& campaigns() const { return campaigns_; }
  const std::vector<EventRecord>& events() const { return events_; }
  std::int64_t last_seq() const { return next_seq_ - 1; }

  // Canonical dump of the derived state, used to compare a store with its
  // replay.
  Json state_json() const;

 private:
  explicit Store(triage::Policy policy);

  const EventRecord& commit(EventKind kind, Json payload, Timestamp ts);
  void apply(const EventRecord& event);
  void apply_session_event(const EventRecord& event);
  std::string next_record_id() const;

  triage::Policy policy_;
  std::shared_ptr<const nlu::Lexicon> lexicon_;
  triage::ReviewQueue queue_;
  std::map<std::string, Subject, std::less<>> subjects_;
  std::map<std::string, StoredSession, std::less<>> sessions_;
  std::map<std::string, CallAttempt, std::less<>> attempts_;
  std::map<Date, DayStats> days_;
  std::map<std::string, CampaignInfo, std::less<>> campaigns_;
  std::vector<EventRecord> events_;
  std::int64_t next_seq_ = 1;
  std::uint64_t escalations_created_ = 0;
  EventSink* sink_ = nullptr;
};

}  // namespace symcheck::campaign

#endif  // SYMCHECK_CAMPAIGN_STORE_H_
