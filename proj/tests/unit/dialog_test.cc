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


#include <doctest.h>

#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "symcheck/common/errors.h"
#include "symcheck/dialog/dialog.h"
#include "symcheck/io/json.h"
#include "symcheck/nlu/nlu.h"

namespace symcheck::dialog {
namespace {

using nlu::Intent;

const Timestamp kT0 = parse_timestamp("2020-03-09T10:00:00Z");

DialogEngine engine() { return DialogEngine(Script::load(SYMCHECK_DATA_DIR "/script_en.json")); }

nlu::NluResult sure(Intent intent, double p = 0.95) {
  nlu::NluResult r;
  r.scores.fill((1.0 - p) / 2.0);
  r.scores[static_cast<std::size_t>(intent)] = p;
  r.top1 = intent;
  r.p_top1 = p;
  r.margin = p - (1.0 - p) / 2.0;
  return r;
}

CallSession step(const DialogEngine& e, const CallSession& s, Intent intent,
                 std::string text = "x") {
  return e.advance(s, text, sure(intent), kT0).session;
}

std::vector<std::string> system_lines(const CallSession& s) {
  std::vector<std::string> out;
  for (const auto& u : s.transcript)
    if (u.speaker == Speaker::kSystem) out.push_back(u.text);
  return out;
}

TEST_CASE("cooperative path reproduces the golden system lines") {
  DialogEngine e = engine();
  nlu::Lexicon lex = nlu::load_lexicon(SYMCHECK_DATA_DIR "/seed_lexicon.json");
  CallSession s = e.start_session("s1", "subj1", false, kT0);
  for (const char* text : {"Hello?", "Yes.", "No.", "No. I don't"}) {
    s = e.advance(s, text, nlu::classify(lex, text), kT0).session;
  }
  CHECK(s.state == State::kCompleted);
  CHECK(s.slots.fever == TriState::kNo);
  CHECK(s.slots.respiratory == TriState::kNo);

  std::ifstream in(SYMCHECK_TEST_DIR "/golden/cooperative_path.txt");
  REQUIRE(in);
  std::vector<std::string> golden;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) golden.push_back(line);
  CHECK(system_lines(s) == golden);
}

TEST_CASE("start_session") {
  DialogEngine e = engine();
  CallSession fresh = e.start_session("s1", "subj1", false, kT0);
  CHECK(fresh.state == State::kGreeting);
  CHECK(fresh.turn_count == 0);
  CHECK(fresh.transcript.size() == 1);
  CHECK(fresh.transcript[0].text.find("I'm calling to check your symptoms") != std::string::npos);
  CHECK(!fresh.transcript[0].nlu);
  CHECK(fresh.slots.fever == TriState::kUnknown);
  CHECK(fresh.slots.respiratory == TriState::kUnknown);

  CallSession again = e.start_session("s2", "subj1", true, kT0);
  CHECK(again.state == State::kRegreeting);
  CHECK(again.transcript[0].text.rfind("Hello again", 0) == 0);
  CallSession next = step(e, again, Intent::kYes);
  CHECK(next.state == State::kFeverQ);
}

TEST_CASE("fever NO moves to the respiratory question") {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", true, kT0);
  s = step(e, s, Intent::kYes);
  AdvanceResult r = e.advance(s, "No.", sure(Intent::kNo), kT0);
  CHECK(r.session.slots.fever == TriState::kNo);
  CHECK(r.session.state == State::kRespQ);
  REQUIRE(r.reply);
  CHECK(r.reply->find("Do you have a cough or symptoms like shortness of breath now?") !=
        std::string::npos);

  AdvanceResult done = e.advance(r.session, "I am totally fine. Please do not worry.",
                                 sure(Intent::kNo), kT0);
  CHECK(done.session.slots.respiratory == TriState::kNo);
  CHECK(done.session.state == State::kCompleted);
  REQUIRE(done.reply);
  CHECK(done.reply->find("be sure to wear your mask") != std::string::npos);
}

TEST_CASE("respiratory YES asks for details and stores them verbatim") {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", true, kT0);
  s = step(e, s, Intent::kYes);
  s = step(e, s, Intent::kNo);
  s = step(e, s, Intent::kYes);
  CHECK(s.state == State::kSymptomDetailQ);
  s = e.advance(s, "My throat is sore.", sure(Intent::kOther), kT0).session;
  CHECK(s.state == State::kCompleted);
  CHECK(s.slots.symptom_detail == "My throat is sore.");
}

TEST_CASE("reprompt cap leaves the slot unknown and moves on") {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", true, kT0);
  s = step(e, s, Intent::kYes);
  AdvanceResult r1 = e.advance(s, "blorp", sure(Intent::kOther), kT0);
  CHECK(r1.session.state == State::kReprompt);
  CHECK(r1.reply->find("Please answer yes or no") != std::string::npos);
  CallSession s2 = step(e, r1.session, Intent::kOther);
  CHECK(s2.state == State::kReprompt);
  CHECK(s2.reprompts(Question::kFever) == 2);
  CallSession s3 = step(e, s2, Intent::kOther);
  CHECK(s3.state == State::kRespQ);
  CHECK(s3.slots.fever == TriState::kUnknown);
  CHECK(s3.hit_reprompt_cap());
  CHECK(s3.turn_count == 4);
}

TEST_CASE("consent refusal closes politely") {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", false, kT0);
  s = step(e, s, Intent::kOther);
  s = step(e, s, Intent::kNo);
  CHECK(s.state == State::kCompleted);
  CHECK(s.consent_refused);
  CHECK(s.slots.fever == TriState::kUnknown);
}

TEST_CASE("hang_up freezes slots") {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", false, kT0);
  CallSession h = e.hang_up(s);
  CHECK(h.state == State::kHangup);
  CHECK(h.outcome == State::kHangup);
  CHECK(h.slots.fever == TriState::kUnknown);

  s = step(e, s, Intent::kOther);
  s = step(e, s, Intent::kYes);
  s = step(e, s, Intent::kNo);
  CallSession h2 = e.hang_up(s);
  CHECK(h2.slots.fever == TriState::kNo);
  CHECK(h2.slots.respiratory == TriState::kUnknown);

  CHECK_THROWS_AS(e.advance(h2, "hello", sure(Intent::kYes), kT0), ContractViolation);
  CHECK_THROWS_AS(e.hang_up(h2), ContractViolation);
}

TEST_CASE("advance is pure") {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", false, kT0);
  Json before = s;
  AdvanceResult a = e.advance(s, "Hello?", sure(Intent::kOther), kT0);
  AdvanceResult b = e.advance(s, "Hello?", sure(Intent::kOther), kT0);
  CHECK(Json(s) == before);
  CHECK(Json(a.session) == Json(b.session));
  CHECK(a.reply == b.reply);
}

TEST_CASE("every intent sequence terminates with monotone slots and alternating turns") {
  DialogEngine e = engine();
  const int t_max = e.limits().max_turns;
  std::size_t terminals = 0;
  std::function<void(const CallSession&, int)> walk = [&](const CallSession& s, int depth) {
    if (is_terminal(s.state)) {
      ++terminals;
      CHECK(s.turn_count <= t_max);
      // System and callee turns alternate, opening with the system.
      for (std::size_t i = 0; i < s.transcript.size(); ++i) {
        Speaker want = i % 2 == 0 ? Speaker::kSystem : Speaker::kCallee;
        if (s.transcript[i].speaker != want) FAIL("transcript does not alternate");
      }
      return;
    }
    REQUIRE(depth < t_max);
    for (Intent c : nlu::kAllIntents) {
      CallSession next = step(e, s, c);
      auto frozen = [](TriState before, TriState after) {
        return before == TriState::kUnknown || before == after;
      };
      if (!frozen(s.slots.fever, next.slots.fever) ||
          !frozen(s.slots.respiratory, next.slots.respiratory)) {
        FAIL("slot changed after being set");
      }
      CHECK(next.turn_count == s.turn_count + 1);
      walk(next, depth + 1);
    }
  };
  walk(e.start_session("s", "subj", false, kT0), 0);
  walk(e.start_session("s", "subj", true, kT0), 0);
  CHECK(terminals > 0);
}

TEST_CASE("turn limit aborts the call") {
  DialogEngine e(Script::load(SYMCHECK_DATA_DIR "/script_en.json"), Limits{.max_turns = 5});
  CallSession s = e.start_session("s1", "subj1", false, kT0);
  for (int i = 0; i < 5; ++i) s = step(e, s, Intent::kOther);
  CHECK(s.state == State::kAbortedMaxTurns);
  CHECK(s.turn_count == 5);
}

TEST_CASE("session json round trip") {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", false, kT0);
  s = step(e, s, Intent::kOther, "Hello?");
  s = step(e, s, Intent::kYes, "Yes.");
  CallSession back = Json(s).get<CallSession>();
  CHECK(Json(back) == Json(s));
}

TEST_CASE("script requires every line") {
  CHECK_THROWS(Script::parse(R"({"version": 1, "lines": {"GREETING": "hi"}})"));
}

}  // namespace
}  // namespace symcheck::dialog
