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

#include "symcheck/dialog/dialog.h"

#include <algorithm>

#include "symcheck/common/errors.h"

namespace symcheck::dialog {
namespace {

constexpr std::array<std::string_view, 3> kTriStateNames = {"UNKNOWN", "YES", "NO"};
constexpr std::array<std::string_view, 11> kStateNames = {
    "GREETING", "REGREETING", "CONSENT_WAIT", "FEVER_Q",  "RESP_Q",           "REPROMPT",
    "SYMPTOM_DETAIL_Q", "CLOSING", "COMPLETED", "HANGUP", "ABORTED_MAX_TURNS",
};
constexpr std::array<std::string_view, 5> kQuestionNames = {"GREETING", "CONSENT", "FEVER", "RESP",
                                                            "DETAIL"};

template <typename Enum, std::size_t N>
Enum parse_name(const std::array<std::string_view, N>& names, std::string_view name,
                const char* what) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ParseError(std::string("unknown ") + what + ": " + std::string(name));
  return static_cast<Enum>(it - names.begin());
}

std::size_t polar_index(Question q) {
  switch (q) {
    case Question::kConsent:
      return 0;
    case Question::kFever:
      return 1;
    case Question::kResp:
      return 2;
    default:
      break;
  }
  throw ContractViolation("not a polar question: " + std::string(question_name(q)));
}

ScriptKey question_line(Question q) {
  switch (q) {
    case Question::kConsent:
      return ScriptKey::kConsentQ;
    case Question::kFever:
      return ScriptKey::kFeverQ;
    case Question::kResp:
      return ScriptKey::kRespQ;
    case Question::kDetail:
      return ScriptKey::kDetailQ;
    case Question::kGreeting:
      break;
  }
  return ScriptKey::kGreeting;
}

// Question the callee is answering in a non-terminal state.
Question answering(const CallSession& s) {
  switch (s.state) {
    case State::kGreeting:
      return Question::kGreeting;
    case State::kRegreeting:
    case State::kConsentWait:
      return Question::kConsent;
    case State::kFeverQ:
      return Question::kFever;
    case State::kRespQ:
      return Question::kResp;
    case State::kSymptomDetailQ:
      return Question::kDetail;
    case State::kReprompt:
      if (s.pending) return *s.pending;
      break;
    default:
      break;
  }
  throw ContractViolation("session " + s.session_id + " is not waiting for an answer in state " +
                          std::string(state_name(s.state)));
}

State state_for(Question q) {
  switch (q) {
    case Question::kConsent:
      return State::kConsentWait;
    case Question::kFever:
      return State::kFeverQ;
    case Question::kResp:
      return State::kRespQ;
    case Question::kDetail:
      return State::kSymptomDetailQ;
    case Question::kGreeting:
      break;
  }
  return State::kGreeting;
}

}  // namespace

std::string_view tristate_name(TriState value) { return kTriStateNames[static_cast<std::size_t>(value)]; }
std::string_view state_name(State state) { return kStateNames[static_cast<std::size_t>(state)]; }
std::string_view question_name(Question question) {
  return kQuestionNames[static_cast<std::size_t>(question)];
}
TriState parse_tristate(std::string_view name) {
  return parse_name<TriState>(kTriStateNames, name, "slot value");
}
State parse_state(std::string_view name) { return parse_name<State>(kStateNames, name, "dialog state"); }
Question parse_question(std::string_view name) {
  return parse_name<Question>(kQuestionNames, name, "question");
}

bool is_terminal(State state) {
  return state == State::kCompleted || state == State::kHangup || state == State::kAbortedMaxTurns;
}

bool is_polar(Question question) {
  return question == Question::kConsent || question == Question::kFever ||
         question == Question::kResp;
}

int CallSession::reprompts(Question q) const { return reprompt_count[polar_index(q)]; }

bool CallSession::hit_reprompt_cap() const {
  return std::any_of(transcript.begin(), transcript.end(),
                     [](const Utterance& u) { return u.exhausted_reprompts; });
}

DialogEngine::DialogEngine(Script script, Limits limits)
    : script_(std::move(script)), limits_(limits) {
  if (limits_.max_reprompts < 0) throw ContractViolation("max_reprompts must be >= 0");
  if (limits_.max_turns < 1) throw ContractViolation("max_turns must be >= 1");
}

CallSession DialogEngine::start_session(std::string session_id, std::string subject_id,
                                        bool already_called_today, Timestamp now) const {
  CallSession s;
  s.session_id = std::move(session_id);
  s.subject_id = std::move(subject_id);
  s.started_at = now;
  s.state = already_called_today ? State::kRegreeting : State::kGreeting;
  s.transcript.push_back(Utterance{
      .speaker = Speaker::kSystem,
      .text = script_.line(already_called_today ? ScriptKey::kRegreeting : ScriptKey::kGreeting),
      .ts = now,
  });
  return s;
}

AdvanceResult DialogEngine::advance(const CallSession& session, std::string_view callee_text,
                                    const nlu::NluResult& nlu, Timestamp now) const {
  if (is_terminal(session.state)) {
    throw ContractViolation("advance on terminal session " + session.session_id + " (" +
                            std::string(state_name(session.state)) + ")");
  }
  CallSession s = session;
  const Question q = answering(s);
  s.transcript.push_back(Utterance{
      .speaker = Speaker::kCallee,
      .text = std::string(callee_text),
      .ts = now,
      .nlu = nlu,
      .answering = q,
  });
  ++s.turn_count;

  std::optional<ScriptKey> next_line;
  std::string reprompt_prefix;

  auto close = [&] {
    s.state = State::kCompleted;
    s.outcome = State::kCompleted;
    next_line = ScriptKey::kClosing;
  };
  auto ask = [&](Question next) {
    s.state = state_for(next);
    next_line = question_line(next);
  };
  auto move_past = [&](Question answered) {
    s.pending.reset();
    switch (answered) {
      case Question::kConsent:
        ask(Question::kFever);
        break;
      case Question::kFever:
        ask(Question::kResp);
        break;
      default:
        close();
        break;
    }
  };

  if (q == Question::kGreeting) {
    ask(Question::kConsent);
  } else if (q == Question::kDetail) {
    if (!callee_text.empty()) s.slots.symptom_detail = std::string(callee_text);
    close();
  } else if (nlu.top1 == nlu::Intent::kOther) {
    int& used = s.reprompt_count[polar_index(q)];
    if (used < limits_.max_reprompts) {
      ++used;
      s.state = State::kReprompt;
      s.pending = q;
      reprompt_prefix = script_.line(ScriptKey::kReprompt) + " ";
      next_line = question_line(q);
    } else {
      // Slot stays UNKNOWN; triage treats it as uncertain.
      s.transcript.back().exhausted_reprompts = true;
      move_past(q);
    }
  } else {
    const bool yes = nlu.top1 == nlu::Intent::kYes;
    s.pending.reset();
    switch (q) {
      case Question::kConsent:
        if (yes) {
          ask(Question::kFever);
        } else {
          s.consent_refused = true;
          close();
        }
        break;
      case Question::kFever:
        s.slots.fever = yes ? TriState::kYes : TriState::kNo;
        ask(Question::kResp);
        break;
      case Question::kResp:
        s.slots.respiratory = yes ? TriState::kYes : TriState::kNo;
        if (yes) {
          ask(Question::kDetail);
        } else {
          close();
        }
        break;
      default:
        break;
    }
  }

  if (!is_terminal(s.state) && s.turn_count >= limits_.max_turns) {
    s.state = State::kAbortedMaxTurns;
    s.outcome = State::kAbortedMaxTurns;
    s.pending.reset();
    reprompt_prefix.clear();
    next_line = ScriptKey::kClosing;
  }

  AdvanceResult result{.session = std::move(s), .reply = std::nullopt};
  if (next_line) {
    std::string text = reprompt_prefix + script_.line(*next_line);
    result.session.transcript.push_back(Utterance{.speaker = Speaker::kSystem, .text = text, .ts = now});
    result.reply = std::move(text);
  }
  return result;
}

CallSession DialogEngine::hang_up(const CallSession& session) const {
  if (is_terminal(session.state)) {
    throw ContractViolation("hang_up on terminal session " + session.session_id);
  }
  CallSession s = session;
  s.state = State::kHangup;
  s.outcome = State::kHangup;
  s.pending.reset();
  return s;
}

}  // namespace symcheck::dialog
