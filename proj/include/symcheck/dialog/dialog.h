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

#ifndef SYMCHECK_DIALOG_DIALOG_H_
#define SYMCHECK_DIALOG_DIALOG_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symcheck/common/time.h"
#include "symcheck/dialog/script.h"
#include "symcheck/nlu/nlu.h"

namespace symcheck::dialog {

enum class TriState { kUnknown, kYes, kNo };

enum class State {
  kGreeting,
  kRegreeting,
  kConsentWait,
  kFeverQ,
  kRespQ,
  kReprompt,
  kSymptomDetailQ,
  kClosing,
  kCompleted,
  kHangup,
  kAbortedMaxTurns,
};

// What a callee turn was answering.
enum class Question { kGreeting, kConsent, kFever, kResp, kDetail };

enum class Speaker { kSystem, kCallee };

std::string_view tristate_name(TriState value);
std::string_view state_name(State state);
std::string_view question_name(Question question);
TriState parse_tristate(std::string_view name);
State parse_state(std::string_view name);
Question parse_question(std::string_view name);

bool is_terminal(State state);

// Polar questions are the ones whose answers are scored for uncertainty and
// that can be reprompted.
bool is_polar(Question question);

struct Slots {
  TriState fever = TriState::kUnknown;
  TriState respiratory = TriState::kUnknown;
  // Verbatim, never parsed. Only set when respiratory == kYes.
  std::optional<std::string> symptom_detail;
};

struct Utterance {
  Speaker speaker = Speaker::kSystem;
  std::string text;
  Timestamp ts{};
  // Callee turns only.
  std::optional<nlu::NluResult> nlu;
  std::optional<Question> answering;
  // This turn exhausted the reprompt budget of the question it answered.
  bool exhausted_reprompts = false;
};

struct Limits {
  int max_turns = 12;
  int max_reprompts = 2;
};

struct CallSession {
  std::string session_id;
  std::string subject_id;
  State state = State::kGreeting;
  Slots slots;
  std::vector<Utterance> transcript;
  int turn_count = 0;
  // Indexed by polar question: consent, fever, respiratory.
  std::array<int, 3> reprompt_count{};
  // Question a REPROMPT is waiting on.
  std::optional<Question> pending;
  bool consent_refused = false;
  Timestamp started_at{};
  std::optional<State> outcome;

  int reprompts(Question q) const;
  bool hit_reprompt_cap() const;
};

struct AdvanceResult {
  CallSession session;
  std::optional<std::string> reply;
};

// Deterministic finite state machine over the symptom-check script.
// Sessions are values: every operation returns a new session and never
// touches the argument, so one engine can drive any number of sessions.
class DialogEngine {
 public:
  DialogEngine(Script script, Limits limits = {});

  CallSession start_session(std::string session_id, std::string subject_id,
                            bool already_called_today, Timestamp now) const;

  // Consumes one callee utterance. Throws ContractViolation on a terminal
  // session.
  AdvanceResult advance(const CallSession& session, std::string_view callee_text,
                        const nlu::NluResult& nlu, Timestamp now) const;

  CallSession hang_up(const CallSession& session) const;

  const Script& script() const { return script_; }
  const Limits& limits() const { return limits_; }

 private:
  Script script_;
  Limits limits_;
};

}  // namespace symcheck::dialog

#endif  // SYMCHECK_DIALOG_DIALOG_H_
