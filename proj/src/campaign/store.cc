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

#include "symcheck/campaign/store.h"

#include <algorithm>
#include <cstdio>

#include "symcheck/common/errors.h"

namespace symcheck::campaign {
namespace {

constexpr std::array<std::string_view, 6> kKindNames = {"SESSION_EVENT", "ESCALATION", "REVIEW",
                                                        "LABEL",         "PURGE",      "REPORT"};

std::int64_t callee_turns(const dialog::CallSession& s) {
  return std::count_if(s.transcript.begin(), s.transcript.end(),
                       [](const auto& u) { return u.speaker == dialog::Speaker::kCallee; });
}

}  // namespace

std::string_view event_kind_name(EventKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

EventKind parse_event_kind(std::string_view name) {
  const auto it = std::find(kKindNames.begin(), kKindNames.end(), name);
  if (it == kKindNames.end()) throw ParseError("unknown event kind: " + std::string(name));
  return static_cast<EventKind>(it - kKindNames.begin());
}

Json event_to_json(const EventRecord& event) {
  return Json{{"seq", event.seq},
              {"ts", format_timestamp(event.ts)},
              {"kind", event_kind_name(event.kind)},
              {"payload", event.payload}};
}

EventRecord event_from_json(const Json& j) {
  EventRecord e;
  e.seq = require(j, "seq").get<std::int64_t>();
  e.ts = parse_timestamp(require(j, "ts").get<std::string>());
  e.kind = parse_event_kind(require(j, "kind").get<std::string>());
  e.payload = require(j, "payload");
  return e;
}

JsonlEventLog::JsonlEventLog(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::app | std::ios::binary) {
  if (!out_) throw ParseError("cannot open event log " + path.string() + " for append");
}

void JsonlEventLog::append(const EventRecord& event) {
  out_ << event_to_json(event).dump() << '\n';
  out_.flush();
}

std::vector<EventRecord> JsonlEventLog::read(const std::filesystem::path& path) {
  std::vector<EventRecord> events;
  for (const auto& j : parse_json_lines(read_file(path))) {
    EventRecord e = event_from_json(j);
    if (!events.empty() && e.seq <= events.back().seq) {
      throw ParseError("event log " + path.string() + ": sequence number " +
                       std::to_string(e.seq) + " does not increase");
    }
    events.push_back(std::move(e));
  }
  return events;
}

Store::Store(triage::Policy policy) : policy_(policy) { policy_.validate(); }

Store::Store(nlu::Lexicon lexicon, triage::Policy policy, Timestamp opened_at, EventSink* sink)
    : Store(policy) {
  sink_ = sink;
  commit(EventKind::kLabel,
         Json{{"type", "LEXICON_LOADED"}, {"lexicon", nlu::lexicon_to_json(lexicon)}}, opened_at);
}

Store Store::replay(std::span<const EventRecord> events, triage::Policy policy) {
  if (events.empty() || events.front().kind != EventKind::kLabel ||
      events.front().payload.value("type", "") != "LEXICON_LOADED") {
    throw ParseError("event log must start with the lexicon load");
  }
  Store store(policy);
  for (const auto& e : events) {
    if (e.seq != store.next_seq_) {
      throw ParseError("event log gap: expected seq " + std::to_string(store.next_seq_) + ", got " +
                       std::to_string(e.seq));
    }
    store.events_.push_back(e);
    store.apply(e);
    store.next_seq_ = e.seq + 1;
  }
  return store;
}

const EventRecord& Store::commit(EventKind kind, Json payload, Timestamp ts) {
  EventRecord e{.seq = next_seq_, .ts = ts, .kind = kind, .payload = std::move(payload)};
  apply(e);
  ++next_seq_;
  if (sink_ != nullptr) sink_->append(e);
  events_.push_back(std::move(e));
  return events_.back();
}

std::string Store::next_record_id() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "esc-%06llu",
                static_cast<unsigned long long>(escalations_created_ + 1));
  return buf;
}

void Store::register_subject(const Subject& subject, Timestamp ts) {
  if (subject.subject_id.empty()) throw ContractViolation("subject_id must be non-empty");
  if (subject.window_days < 1) throw ContractViolation("window_days must be >= 1");
  if (subjects_.count(subject.subject_id) != 0) {
    throw ContractViolation("subject " + subject.subject_id + " already registered");
  }
  commit(EventKind::kSessionEvent, Json{{"type", "SUBJECT_REGISTERED"}, {"subject", subject}}, ts);
}

void Store::create_campaign(std::string_view campaign_id, const Json& spec, Timestamp ts) {
  if (campaigns_.count(campaign_id) != 0) {
    throw ContractViolation("campaign " + std::string(campaign_id) + " already exists");
  }
  commit(EventKind::kSessionEvent,
         Json{{"type", "CAMPAIGN_CREATED"}, {"campaign_id", campaign_id}, {"spec", spec}}, ts);
}

void Store::complete_day(std::string_view campaign_id, Date day, Timestamp ts) {
  if (campaigns_.count(campaign_id) == 0) throw NotFound("campaign " + std::string(campaign_id));
  commit(EventKind::kSessionEvent,
         Json{{"type", "DAY_COMPLETED"}, {"campaign_id", campaign_id}, {"day", format_date(day)}},
         ts);
}

std::optional<std::string> Store::record_call(const CallRecord& call, Timestamp ts) {
  if (call.session && !dialog::is_terminal(call.session->state)) {
    throw ContractViolation("record_call with non-terminal session " + call.session->session_id);
  }
  std::optional<std::string> record_id;
  if (call.session && call.decision.escalate()) record_id = next_record_id();

  Json payload{{"type", "CALL"},
               {"attempt", call.attempt},
               {"session", nullptr},
               {"decision", nullptr},
               {"record_id", nullptr},
               {"stats", call.stats},
               {"final_failure", call.final_failure}};
  if (call.session) payload["session"] = *call.session;
  if (call.decision.reason) payload["decision"] = triage::reason_name(*call.decision.reason);
  if (record_id) payload["record_id"] = *record_id;
  commit(EventKind::kSessionEvent, std::move(payload), ts);

  if (record_id) {
    auto record = triage::make_record(*call.session, *call.decision.reason, ts);
    record.record_id = *record_id;
    commit(EventKind::kEscalation, Json(record), ts);
  }
  return record_id;
}

std::optional<std::string> Store::record_live_session(const dialog::CallSession& session,
                                                      const triage::Decision& decision,
                                                      Timestamp ts) {
  if (!dialog::is_terminal(session.state)) {
    throw ContractViolation("record_live_session with non-terminal session " + session.session_id);
  }
  if (sessions_.count(session.session_id) != 0) {
    throw ContractViolation("session " + session.session_id + " already recorded");
  }
  std::optional<std::string> record_id;
  if (decision.escalate()) record_id = next_record_id();
  Json payload{{"type", "LIVE_SESSION"},
               {"session", session},
               {"decision", nullptr},
               {"record_id", nullptr}};
  if (decision.reason) payload["decision"] = triage::reason_name(*decision.reason);
  if (record_id) payload["record_id"] = *record_id;
  commit(EventKind::kSessionEvent, std::move(payload), ts);
  if (record_id) {
    auto record = triage::make_record(session, *decision.reason, ts);
    record.record_id = *record_id;
    commit(EventKind::kEscalation, Json(record), ts);
  }
  return record_id;
}

std::vector<nlu::LabeledExample> Store::review(std::string_view record_id,
                                               const triage::ReviewDecision& decision,
                                               Timestamp ts) {
  // Dry run on a copy so a rejected review leaves no event behind.
  triage::ReviewQueue probe;
  probe.enqueue(queue_.get(record_id));
  auto examples = probe.review(record_id, decision);
  commit(EventKind::kReview, Json{{"record_id", record_id}, {"decision", decision}}, ts);
  return examples;
}

std::int64_t Store::apply_labels(std::span<const nlu::LabeledExample> examples, Timestamp ts) {
  if (examples.empty()) throw ContractViolation("train_update requires at least one example");
  const std::vector<nlu::LabeledExample> batch(examples.begin(), examples.end());
  commit(EventKind::kLabel,
         Json{{"type", "TRAIN"}, {"examples", batch}, {"version", lexicon_->version() + 1}}, ts);
  return lexicon_->version();
}

std::size_t Store::purge(Timestamp now, int retention_days) {
  if (retention_days < 1) throw ContractViolation("retention_days must be >= 1");
  const Timestamp horizon = now - std::chrono::days{retention_days};
  std::size_t removed = 0;
  for (const auto& [id, s] : sessions_) removed += s.session.started_at < horizon ? 1 : 0;
  for (const auto& rec : queue_.list()) removed += rec.created_at < horizon ? 1 : 0;
  for (const auto& [id, a] : attempts_) removed += a.planned_at < horizon ? 1 : 0;
  commit(EventKind::kPurge,
         Json{{"now", format_timestamp(now)},
              {"horizon", format_timestamp(horizon)},
              {"removed", removed}},
         now);
  return removed;
}

MetricsReport Store::report(Date from, Date to) const {
  DayStats total;
  if (from <= to) {
    for (auto it = days_.lower_bound(from); it != days_.end() && it->first <= to; ++it) {
      total += it->second;
    }
  }
  return make_report(from, to, total);
}

void Store::record_report(const MetricsReport& report, Timestamp ts) {
  commit(EventKind::kReport, Json{{"report", report}}, ts);
}

void Store::apply(const EventRecord& e) {
  switch (e.kind) {
    case EventKind::kSessionEvent:
      apply_session_event(e);
      break;
    case EventKind::kEscalation: {
      auto record = e.payload.get<triage::EscalationRecord>();
      queue_.enqueue(std::move(record));
      ++escalations_created_;
      break;
    }
    case EventKind::kReview: {
      const auto id = e.payload.at("record_id").get<std::string>();
      const auto decision = e.payload.at("decision").get<triage::ReviewDecision>();
      const auto record = queue_.get(id);
      queue_.review(id, decision);
      // Live mode: the operator's verdict is the ground truth for FP accounting.
      const auto it = sessions_.find(record.session_id);
      if (it != sessions_.end() && it->second.live &&
          decision.verdict == triage::Verdict::kOverrideClear) {
        std::int64_t flagged = 0;
        for (const auto& u : it->second.session.transcript) {
          flagged += triage::turn_flagged(u, policy_) ? 1 : 0;
        }
        days_[date_of(it->second.session.started_at)].false_positives += flagged;
      }
      break;
    }
    case EventKind::kLabel: {
      const auto type = e.payload.at("type").get<std::string>();
      if (type == "LEXICON_LOADED") {
        lexicon_ = std::make_shared<const nlu::Lexicon>(nlu::lexicon_from_json(e.payload.at("lexicon")));
      } else if (type == "TRAIN") {
        const auto examples = e.payload.at("examples").get<std::vector<nlu::LabeledExample>>();
        auto next = nlu::train_update(*lexicon_, examples);
        if (next.version() != e.payload.at("version").get<std::int64_t>()) {
          throw ParseError("label event version mismatch at seq " + std::to_string(e.seq));
        }
        lexicon_ = std::make_shared<const nlu::Lexicon>(std::move(next));
      } else {
        throw ParseError("unknown label event type " + type);
      }
      break;
    }
    case EventKind::kPurge: {
      const Timestamp horizon = parse_timestamp(e.payload.at("horizon").get<std::string>());
      std::erase_if(sessions_, [&](const auto& kv) { return kv.second.session.started_at < horizon; });
      queue_.purge_before(horizon);
      std::erase_if(attempts_, [&](const auto& kv) { return kv.second.planned_at < horizon; });
      break;
    }
    case EventKind::kReport:
      break;
  }
}

void Store::apply_session_event(const EventRecord& e) {
  const auto type = e.payload.at("type").get<std::string>();
  if (type == "SUBJECT_REGISTERED") {
    auto subject = e.payload.at("subject").get<Subject>();
    subjects_.emplace(subject.subject_id, std::move(subject));
  } else if (type == "CAMPAIGN_CREATED") {
    const auto id = e.payload.at("campaign_id").get<std::string>();
    campaigns_.emplace(id, CampaignInfo{.campaign_id = id, .spec = e.payload.at("spec")});
  } else if (type == "DAY_COMPLETED") {
    const auto id = e.payload.at("campaign_id").get<std::string>();
    const auto it = campaigns_.find(id);
    if (it == campaigns_.end()) throw ParseError("DAY_COMPLETED for unknown campaign " + id);
    ++it->second.days_run;
  } else if (type == "CALL") {
    const auto attempt = e.payload.at("attempt").get<CallAttempt>();
    const auto stats = e.payload.at("stats").get<TurnStats>();
    DayStats& day = days_[date_of(attempt.planned_at)];
    ++day.attempts;
    day.turns += stats.turns;
    day.false_negatives += stats.false_negatives;
    day.false_positives += stats.false_positives;
    switch (attempt.result.value_or(AttemptResult::kConnectionFailure)) {
      case AttemptResult::kCompleted:
        ++day.answered;
        ++day.completed;
        break;
      case AttemptResult::kHangup:
        ++day.answered;
        ++day.hangups;
        break;
      case AttemptResult::kConnectionFailure:
        ++day.connection_failures;
        if (e.payload.value("final_failure", false)) ++day.failed;
        break;
    }
    if (!e.payload.at("session").is_null()) {
      StoredSession stored{.session = e.payload.at("session").get<dialog::CallSession>()};
      if (!e.payload.at("decision").is_null()) {
        stored.escalation = triage::parse_reason(e.payload.at("decision").get<std::string>());
        ++day.escalations;
      }
      if (!e.payload.at("record_id").is_null()) {
        stored.record_id = e.payload.at("record_id").get<std::string>();
      }
      sessions_.insert_or_assign(stored.session.session_id, std::move(stored));
    }
    attempts_.insert_or_assign(attempt.attempt_id, attempt);
  } else if (type == "LIVE_SESSION") {
    StoredSession stored{.session = e.payload.at("session").get<dialog::CallSession>(), .live = true};
    DayStats& day = days_[date_of(stored.session.started_at)];
    ++day.attempts;
    ++day.answered;
    if (stored.session.state == dialog::State::kHangup) {
      ++day.hangups;
    } else {
      ++day.completed;
    }
    day.turns += callee_turns(stored.session);
    if (!e.payload.at("decision").is_null()) {
      stored.escalation = triage::parse_reason(e.payload.at("decision").get<std::string>());
      ++day.escalations;
    }
    if (!e.payload.at("record_id").is_null()) {
      stored.record_id = e.payload.at("record_id").get<std::string>();
    }
    sessions_.insert_or_assign(stored.session.session_id, std::move(stored));
  } else {
    throw ParseError("unknown session event type " + type);
  }
}

Json Store::state_json() const {
  Json subjects = Json::array();
  for (const auto& [id, s] : subjects_) subjects.push_back(s);
  Json sessions = Json::array();
  for (const auto& [id, s] : sessions_) {
    Json j{{"session", s.session}, {"live", s.live}, {"escalation", nullptr}, {"record_id", nullptr}};
    if (s.escalation) j["escalation"] = triage::reason_name(*s.escalation);
    if (s.record_id) j["record_id"] = *s.record_id;
    sessions.push_back(std::move(j));
  }
  Json attempts = Json::array();
  for (const auto& [id, a] : attempts_) attempts.push_back(a);
  Json days = Json::object();
  for (const auto& [d, stats] : days_) days[format_date(d)] = stats;
  Json campaigns = Json::array();
  for (const auto& [id, c] : campaigns_) {
    campaigns.push_back(Json{{"campaign_id", id}, {"spec", c.spec}, {"days_run", c.days_run}});
  }
  return Json{{"lexicon", nlu::lexicon_to_json(*lexicon_)},
              {"subjects", subjects},
              {"sessions", sessions},
              {"attempts", attempts},
              {"escalations", queue_.list()},
              {"days", days},
              {"campaigns", campaigns},
              {"escalations_created", escalations_created_},
              {"last_seq", last_seq()}};
}

}  // namespace symcheck::campaign
