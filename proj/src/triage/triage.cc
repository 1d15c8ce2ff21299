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

#include "symcheck/triage/triage.h"

#include <algorithm>
#include <cstdio>

#include "symcheck/common/errors.h"

namespace symcheck::triage {

using dialog::Question;
using dialog::Speaker;
using dialog::State;
using dialog::TriState;

void Policy::validate() const {
  if (!(confidence_threshold > 0.0 && confidence_threshold < 1.0)) {
    throw ContractViolation("confidence threshold must lie in (0, 1)");
  }
  if (limits.max_reprompts < 0) throw ContractViolation("max reprompts must be >= 0");
  if (limits.max_turns < 5) throw ContractViolation("max turns must be >= 5");
}

std::string_view reason_name(Reason reason) {
  switch (reason) {
    case Reason::kSymptomatic:
      return "SYMPTOMATIC";
    case Reason::kUncertain:
      return "UNCERTAIN";
    case Reason::kIncomplete:
      return "INCOMPLETE";
  }
  return "UNCERTAIN";
}

Reason parse_reason(std::string_view name) {
  if (name == "SYMPTOMATIC") return Reason::kSymptomatic;
  if (name == "UNCERTAIN") return Reason::kUncertain;
  if (name == "INCOMPLETE") return Reason::kIncomplete;
  throw ParseError("unknown escalation reason: " + std::string(name));
}

std::string_view review_status_name(ReviewStatus status) {
  return status == ReviewStatus::kPending ? "PENDING" : "REVIEWED";
}

ReviewStatus parse_review_status(std::string_view name) {
  if (name == "PENDING") return ReviewStatus::kPending;
  if (name == "REVIEWED") return ReviewStatus::kReviewed;
  throw ParseError("unknown review status: " + std::string(name));
}

std::string_view verdict_name(Verdict verdict) {
  return verdict == Verdict::kConfirmSymptomatic ? "CONFIRM_SYMPTOMATIC" : "OVERRIDE_CLEAR";
}

Verdict parse_verdict(std::string_view name) {
  if (name == "CONFIRM_SYMPTOMATIC") return Verdict::kConfirmSymptomatic;
  if (name == "OVERRIDE_CLEAR") return Verdict::kOverrideClear;
  throw ParseError("unknown verdict: " + std::string(name));
}

namespace {

bool scored(const dialog::Utterance& u) {
  return u.speaker == Speaker::kCallee && u.nlu && u.answering && dialog::is_polar(*u.answering);
}

}  // namespace

Decision decide(const dialog::CallSession& session, const Policy& policy) {
  if (!dialog::is_terminal(session.state)) {
    throw ContractViolation("decide on non-terminal session " + session.session_id);
  }
  const auto& slots = session.slots;
  if (slots.fever == TriState::kYes || slots.respiratory == TriState::kYes) {
    return Decision::escalate(Reason::kSymptomatic);
  }

  const bool low_confidence =
      std::any_of(session.transcript.begin(), session.transcript.end(), [&](const auto& u) {
        return scored(u) && u.nlu->p_top1 < policy.confidence_threshold;
      });
  const bool hung_up = session.state == State::kHangup;
  const bool ran_to_end = !hung_up && !session.consent_refused;
  const bool unanswered =
      ran_to_end && (slots.fever == TriState::kUnknown || slots.respiratory == TriState::kUnknown);
  if (low_confidence || session.hit_reprompt_cap() ||
      session.turn_count >= policy.limits.max_turns || unanswered) {
    return Decision::escalate(Reason::kUncertain);
  }
  if (hung_up || session.consent_refused) return Decision::escalate(Reason::kIncomplete);
  return Decision::clear();
}

bool turn_flagged(const dialog::Utterance& u, const Policy& policy) {
  if (!scored(u)) return false;
  if (u.nlu->p_top1 < policy.confidence_threshold || u.exhausted_reprompts) return true;
  switch (*u.answering) {
    case Question::kFever:
    case Question::kResp:
      return u.nlu->top1 == nlu::Intent::kYes;
    case Question::kConsent:
      return u.nlu->top1 == nlu::Intent::kNo;
    default:
      return false;
  }
}

EscalationRecord make_record(const dialog::CallSession& session, Reason reason,
                             Timestamp created_at) {
  return EscalationRecord{
      .session_id = session.session_id,
      .subject_id = session.subject_id,
      .reason = reason,
      .transcript = session.transcript,
      .created_at = created_at,
  };
}

ReviewQueue::ReviewQueue(const ReviewQueue& other) {
  std::lock_guard lock(other.mu_);
  records_ = other.records_;
  next_id_ = other.next_id_;
}

ReviewQueue& ReviewQueue::operator=(const ReviewQueue& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  records_ = other.records_;
  next_id_ = other.next_id_;
  return *this;
}

std::string ReviewQueue::enqueue(EscalationRecord record) {
  std::lock_guard lock(mu_);
  if (record.record_id.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "esc-%06llu", static_cast<unsigned long long>(next_id_));
    record.record_id = buf;
  }
  // Keep the counter ahead of ids restored from a log.
  unsigned long long numeric = 0;
  if (std::sscanf(record.record_id.c_str(), "esc-%llu", &numeric) == 1 && numeric >= next_id_) {
    next_id_ = numeric + 1;
  }
  if (records_.count(record.record_id) != 0) {
    throw ContractViolation("duplicate escalation record id " + record.record_id);
  }
  std::string id = record.record_id;
  records_.emplace(id, std::move(record));
  return id;
}

std::vector<nlu::LabeledExample> ReviewQueue::review(std::string_view record_id,
                                                     ReviewDecision decision) {
  std::lock_guard lock(mu_);
  const auto it = records_.find(record_id);
  if (it == records_.end()) throw NotFound("escalation record " + std::string(record_id));
  EscalationRecord& rec = it->second;
  if (rec.review_status == ReviewStatus::kReviewed) {
    throw AlreadyReviewed("escalation record " + rec.record_id + " was already reviewed");
  }
  std::vector<nlu::LabeledExample> examples;
  examples.reserve(decision.labels.size());
  for (const auto& label : decision.labels) {
    if (label.seq >= rec.transcript.size() ||
        rec.transcript[label.seq].speaker != Speaker::kCallee) {
      throw ContractViolation("label seq " + std::to_string(label.seq) +
                              " is not a callee utterance of " + rec.record_id);
    }
    examples.push_back(nlu::LabeledExample{.text = rec.transcript[label.seq].text,
                                           .label = label.label,
                                           .source = nlu::ExampleSource::kOperator});
  }
  rec.review_status = ReviewStatus::kReviewed;
  rec.review = std::move(decision);
  return examples;
}

EscalationRecord ReviewQueue::get(std::string_view record_id) const {
  std::lock_guard lock(mu_);
  const auto it = records_.find(record_id);
  if (it == records_.end()) throw NotFound("escalation record " + std::string(record_id));
  return it->second;
}

std::vector<EscalationRecord> ReviewQueue::list(std::optional<ReviewStatus> status) const {
  std::lock_guard lock(mu_);
  std::vector<EscalationRecord> out;
  for (const auto& [id, rec] : records_) {
    if (!status || rec.review_status == *status) out.push_back(rec);
  }
  return out;
}

std::size_t ReviewQueue::purge_before(Timestamp horizon) {
  std::lock_guard lock(mu_);
  return std::erase_if(records_, [&](const auto& kv) { return kv.second.created_at < horizon; });
}

std::size_t ReviewQueue::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::vector<PoolItem> select_batch(std::span<const PoolItem> pool, std::size_t k,
                                   nlu::Scorer scorer) {
  std::vector<std::pair<double, const PoolItem*>> keyed;
  keyed.reserve(pool.size());
  for (const auto& item : pool) keyed.emplace_back(nlu::uncertainty(item.nlu, scorer), &item);
  const auto before = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second->ts != b.second->ts) return a.second->ts < b.second->ts;
    if (a.second->ref != b.second->ref) return a.second->ref < b.second->ref;
    return a.second->text < b.second->text;
  };
  const std::size_t take = std::min(k, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take), keyed.end(),
                    before);
  std::vector<PoolItem> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(*keyed[i].second);
  return out;
}

}  // namespace symcheck::triage
