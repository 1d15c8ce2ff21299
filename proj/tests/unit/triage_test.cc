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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "symcheck/common/errors.h"
#include "symcheck/dialog/dialog.h"
#include "symcheck/io/json.h"
#include "symcheck/triage/triage.h"

namespace symcheck::triage {
namespace {

using dialog::CallSession;
using dialog::DialogEngine;
using dialog::State;
using dialog::TriState;
using nlu::Intent;

const Timestamp kT0 = parse_timestamp("2020-03-09T10:00:00Z");

DialogEngine engine() {
  return DialogEngine(dialog::Script::load(SYMCHECK_DATA_DIR "/script_en.json"));
}

nlu::NluResult with_p(Intent intent, double p) {
  nlu::NluResult r;
  r.scores.fill((1.0 - p) / 2.0);
  r.scores[static_cast<std::size_t>(intent)] = p;
  r.top1 = intent;
  r.p_top1 = p;
  r.margin = p - (1.0 - p) / 2.0;
  return r;
}

// Greeting, consent YES, then the given fever and respiratory answers.
CallSession play(const std::vector<std::pair<Intent, double>>& answers, bool hang_up = false) {
  DialogEngine e = engine();
  CallSession s = e.start_session("s1", "subj1", false, kT0);
  s = e.advance(s, "Hello?", with_p(Intent::kOther, 0.9), kT0).session;
  for (auto [intent, p] : answers) s = e.advance(s, "answer", with_p(intent, p), kT0).session;
  if (hang_up && !dialog::is_terminal(s.state)) s = e.hang_up(s);
  return s;
}

TEST_CASE("decide examples") {
  Policy policy;
  CallSession clear = play({{Intent::kYes, 0.95}, {Intent::kNo, 0.95}, {Intent::kNo, 0.92}});
  CHECK(!decide(clear, policy).escalate());

  CallSession resp = play({{Intent::kYes, 0.95}, {Intent::kNo, 0.95}, {Intent::kYes, 0.95},
                           {Intent::kOther, 0.9}});
  CHECK(resp.slots.symptom_detail);
  CHECK(decide(resp, policy).reason == Reason::kSymptomatic);

  CallSession shaky = play({{Intent::kYes, 0.95}, {Intent::kNo, 0.55}, {Intent::kNo, 0.95}});
  CHECK(decide(shaky, policy).reason == Reason::kUncertain);
}

TEST_CASE("decide precedence") {
  Policy policy;
  // Symptomatic and uncertain: symptomatic wins.
  CallSession both = play({{Intent::kYes, 0.95}, {Intent::kYes, 0.5}, {Intent::kNo, 0.95}});
  CHECK(decide(both, policy).reason == Reason::kSymptomatic);

  // Hang-up with a low-confidence turn: uncertain wins over incomplete.
  CallSession hung = play({{Intent::kYes, 0.6}}, true);
  CHECK(decide(hung, policy).reason == Reason::kUncertain);

  CallSession hung_clean = play({{Intent::kYes, 0.95}}, true);
  CHECK(decide(hung_clean, policy).reason == Reason::kIncomplete);

  CallSession refused = play({{Intent::kNo, 0.95}});
  CHECK(refused.consent_refused);
  CHECK(decide(refused, policy).reason == Reason::kIncomplete);

  CallSession capped = play({{Intent::kYes, 0.95},
                             {Intent::kOther, 0.9},
                             {Intent::kOther, 0.9},
                             {Intent::kOther, 0.9},
                             {Intent::kNo, 0.95}});
  CHECK(capped.state == State::kCompleted);
  CHECK(decide(capped, policy).reason == Reason::kUncertain);
}

TEST_CASE("decide rejects live sessions and bad policies") {
  CallSession live = engine().start_session("s1", "subj1", false, kT0);
  CHECK_THROWS_AS(decide(live, Policy{}), ContractViolation);
  CHECK_THROWS_AS(Policy{.confidence_threshold = 1.0}.validate(), ContractViolation);
  CHECK_THROWS_AS((Policy{.limits = {.max_turns = 4}}.validate()), ContractViolation);
}

TEST_CASE("escalation set grows with the threshold") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> p(0.4, 1.0);
  std::vector<CallSession> sessions;
  for (int i = 0; i < 300; ++i) {
    Intent fever = rng() % 4 == 0 ? Intent::kYes : Intent::kNo;
    sessions.push_back(play({{Intent::kYes, p(rng)}, {fever, p(rng)}, {Intent::kNo, p(rng)}},
                            rng() % 5 == 0));
  }
  for (double lo = 0.3; lo < 0.95; lo += 0.05) {
    double hi = lo + 0.05;
    for (const auto& s : sessions) {
      if (decide(s, Policy{.confidence_threshold = lo}).escalate()) {
        CHECK(decide(s, Policy{.confidence_threshold = hi}).escalate());
      }
    }
  }
}

TEST_CASE("review queue") {
  ReviewQueue q;
  CallSession s = play({{Intent::kYes, 0.95}, {Intent::kNo, 0.55}, {Intent::kNo, 0.95}});
  s.transcript[5].text = "Yeah. Nothing like that.";
  std::string id = q.enqueue(make_record(s, Reason::kUncertain, kT0));
  auto pending = q.list(ReviewStatus::kPending);
  REQUIRE(pending.size() == 1);
  CHECK(pending[0].record_id == id);

  ReviewDecision d{.operator_id = "op1",
                   .verdict = Verdict::kOverrideClear,
                   .labels = {{.seq = 5, .label = Intent::kNo}},
                   .reviewed_at = kT0};
  auto examples = q.review(id, d);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].text == "Yeah. Nothing like that.");
  CHECK(examples[0].label == Intent::kNo);
  CHECK(examples[0].source == nlu::ExampleSource::kOperator);
  CHECK(q.get(id).review_status == ReviewStatus::kReviewed);
  CHECK(q.list(ReviewStatus::kPending).empty());

  CHECK_THROWS_AS(q.review(id, d), AlreadyReviewed);
  CHECK_THROWS_AS(q.review("nope", d), NotFound);
  CHECK_THROWS_AS(q.get("nope"), NotFound);

  std::string id2 = q.enqueue(make_record(s, Reason::kUncertain, kT0));
  ReviewDecision bad = d;
  bad.labels = {{.seq = 0, .label = Intent::kNo}};  // system line
  CHECK_THROWS_AS(q.review(id2, bad), ContractViolation);
  CHECK(q.get(id2).review_status == ReviewStatus::kPending);
}

TEST_CASE("record json round trip") {
  CallSession s = play({{Intent::kYes, 0.95}, {Intent::kNo, 0.55}, {Intent::kNo, 0.95}});
  EscalationRecord r = make_record(s, Reason::kUncertain, kT0);
  r.record_id = "esc-1";
  CHECK(Json(Json(r).get<EscalationRecord>()) == Json(r));
}

PoolItem item(std::string ref, double p, int sec) {
  return PoolItem{.ref = std::move(ref),
                  .text = "t",
                  .nlu = with_p(Intent::kNo, p),
                  .ts = kT0 + std::chrono::seconds{sec}};
}

TEST_CASE("select_batch examples") {
  std::vector<PoolItem> pool{item("a", 0.9, 0), item("b", 0.5, 1), item("c", 0.7, 2)};
  auto one = select_batch(pool, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].ref == "b");
  CHECK(select_batch(pool, 0).empty());
  auto all = select_batch(pool, 10);
  REQUIRE(all.size() == 3);
  CHECK(all[0].ref == "b");
  CHECK(all[1].ref == "c");
  CHECK(all[2].ref == "a");

  std::vector<PoolItem> tied{item("late", 0.6, 9), item("early", 0.6, 1)};
  CHECK(select_batch(tied, 1)[0].ref == "early");
}

TEST_CASE("select_batch agrees with a full sort and ignores pool order") {
  std::mt19937_64 rng(17);
  std::vector<PoolItem> pool;
  for (int i = 0; i < 500; ++i) {
    // Coarse probabilities so ties actually occur.
    double p = 0.34 + 0.01 * static_cast<double>(rng() % 66);
    pool.push_back(item("r" + std::to_string(i), p, static_cast<int>(rng() % 50)));
  }
  std::vector<PoolItem> sorted = pool;
  std::stable_sort(sorted.begin(), sorted.end(), [](const PoolItem& a, const PoolItem& b) {
    double ua = 1.0 - a.nlu.p_top1, ub = 1.0 - b.nlu.p_top1;
    if (ua != ub) return ua > ub;
    if (a.ts != b.ts) return a.ts < b.ts;
    return a.ref < b.ref;
  });
  auto batch = select_batch(pool, 50);
  REQUIRE(batch.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) CHECK(batch[i].ref == sorted[i].ref);

  for (int round = 0; round < 5; ++round) {
    std::shuffle(pool.begin(), pool.end(), rng);
    auto again = select_batch(pool, 50);
    for (std::size_t i = 0; i < 50; ++i) CHECK(again[i].ref == batch[i].ref);
  }
}

}  // namespace
}  // namespace symcheck::triage
