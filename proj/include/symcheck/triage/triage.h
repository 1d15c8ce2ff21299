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

#ifndef SYMCHECK_TRIAGE_TRIAGE_H_
#define SYMCHECK_TRIAGE_TRIAGE_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symcheck/common/time.h"
#include "symcheck/dialog/dialog.h"
#include "symcheck/nlu/nlu.h"

namespace symcheck::triage {

struct Policy {
  double confidence_threshold = 0.7;  // tau
  dialog::Limits limits;

  // Throws ContractViolation unless 0 < tau < 1, R >= 0 and T_max >= 5.
  void validate() const;
};

enum class Reason { kSymptomatic, kUncertain, kIncomplete };

std::string_view reason_name(Reason reason);
Reason parse_reason(std::string_view name);

struct Decision {
  std::optional<Reason> reason;  // empty means CLEAR

  bool escalate() const { return reason.has_value(); }
  static Decision clear() { return {}; }
  static Decision escalate(Reason r) { return {r}; }
};

// Precedence SYMPTOMATIC > UNCERTAIN > INCOMPLETE.
//
// UNCERTAIN: a polar answer below tau, a question that exhausted its
// reprompts, the turn limit reached, or a slot left UNKNOWN by a dialog that
// ran to its end. INCOMPLETE: hang-up or consent refusal. Throws
// ContractViolation on a non-terminal session.
Decision decide(const dialog::CallSession& session, const Policy& policy);

// True when this callee turn on its own raises a symptom or uncertainty flag:
// low confidence, reprompt budget exhausted, YES to a symptom question, or a
// NO read as consent refusal. Used for turn-level error accounting.
bool turn_flagged(const dialog::Utterance& utterance, const Policy& policy);

enum class ReviewStatus { kPending, kReviewed };
enum class Verdict { kConfirmSymptomatic, kOverrideClear };

std::string_view review_status_name(ReviewStatus status);
ReviewStatus parse_review_status(std::string_view name);
std::string_view verdict_name(Verdict verdict);
Verdict parse_verdict(std::string_view name);

struct UtteranceLabel {
  std::size_t seq = 0;  // index into the record's transcript
  nlu::Intent label = nlu::Intent::kOther;
};

struct ReviewDecision {
  std::string operator_id;
  Verdict verdict = Verdict::kConfirmSymptomatic;
  std::vector<UtteranceLabel> labels;
  Timestamp reviewed_at{};
};

struct EscalationRecord {
  std::string record_id;
  std::string session_id;
  std::string subject_id;
  Reason reason = Reason::kUncertain;
  std::vector<dialog::Utterance> transcript;
  Timestamp created_at{};
  ReviewStatus review_status = ReviewStatus::kPending;
  std::optional<ReviewDecision> review;
};

EscalationRecord make_record(const dialog::CallSession& session, Reason reason, Timestamp created_at);

// Operator review queue. All operations are linearizable.
class ReviewQueue {
 public:
  ReviewQueue() = default;
  ReviewQueue(const ReviewQueue& other);
  ReviewQueue& operator=(const ReviewQueue& other);

  // Assigns a record id when the record has none. Returns the id.
  std::string enqueue(EscalationRecord record);

  // Marks the record REVIEWED and returns the operator's labels as training
  // examples. Throws NotFound, AlreadyReviewed, or ContractViolation when a
  // label does not point at a callee utterance.
  std::vector<nlu::LabeledExample> review(std::string_view record_id, ReviewDecision decision);

  EscalationRecord get(std::string_view record_id) const;
  std::vector<EscalationRecord> list(std::optional<ReviewStatus> status = std::nullopt) const;

  // Removes records created strictly before the horizon.
  std::size_t purge_before(Timestamp horizon);

  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, EscalationRecord, std::less<>> records_;
  std::uint64_t next_id_ = 1;
};

struct PoolItem {
  std::string ref;  // e.g. "<session_id>#<seq>"
  std::string text;
  nlu::NluResult nlu;
  Timestamp ts{};
};

// The k most uncertain items, most uncertain first; ties by earliest
// timestamp, then ref and text, so the result does not depend on pool order.
std::vector<PoolItem> select_batch(std::span<const PoolItem> pool, std::size_t k,
                                   nlu::Scorer scorer = nlu::Scorer::kTop1);

}  // namespace symcheck::triage

#endif  // SYMCHECK_TRIAGE_TRIAGE_H_
