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

#include "symcheck/campaign/simulator.h"

#include "symcheck/common/errors.h"

namespace symcheck::campaign {

using dialog::Question;
using dialog::ScriptKey;
using dialog::State;
using dialog::TriState;

namespace {

constexpr std::chrono::seconds kTurnSpacing{15};

ScriptKey key_for(Question q) {
  switch (q) {
    case Question::kGreeting:
      return ScriptKey::kGreeting;
    case Question::kConsent:
      return ScriptKey::kConsentQ;
    case Question::kFever:
      return ScriptKey::kFeverQ;
    case Question::kResp:
      return ScriptKey::kRespQ;
    case Question::kDetail:
      return ScriptKey::kDetailQ;
  }
  return ScriptKey::kGreeting;
}

// Script line the callee is about to answer.
ScriptKey pending_key(const dialog::CallSession& s) {
  switch (s.state) {
    case State::kGreeting:
      return ScriptKey::kGreeting;
    case State::kRegreeting:
      return ScriptKey::kRegreeting;
    case State::kConsentWait:
      return ScriptKey::kConsentQ;
    case State::kFeverQ:
      return ScriptKey::kFeverQ;
    case State::kRespQ:
      return ScriptKey::kRespQ;
    case State::kSymptomDetailQ:
      return ScriptKey::kDetailQ;
    case State::kReprompt:
      return key_for(s.pending.value_or(Question::kConsent));
    default:
      break;
  }
  throw ContractViolation("session " + s.session_id + " is not waiting for the callee");
}

TriState slot_for(const dialog::Slots& slots, Question q) {
  if (q == Question::kFever) return slots.fever;
  if (q == Question::kResp) return slots.respiratory;
  return TriState::kUnknown;
}

std::uint64_t day_number(Date day) {
  return static_cast<std::uint64_t>(day.time_since_epoch().count());
}

}  // namespace

std::string turn_ref(std::string_view session_id, std::size_t seq) {
  return std::string(session_id) + "#" + std::to_string(seq);
}

TurnStats score_call(const dialog::CallSession& session, const triage::Decision& decision,
                     const triage::Policy& policy, const std::map<std::size_t, TurnTruth>& truths) {
  TurnStats stats;
  for (std::size_t seq = 0; seq < session.transcript.size(); ++seq) {
    const auto& u = session.transcript[seq];
    if (u.speaker != dialog::Speaker::kCallee) continue;
    ++stats.turns;
    const auto it = truths.find(seq);
    if (it == truths.end() || !it->second.truth) continue;
    const TurnTruth& t = it->second;
    const bool symptom_question = t.question == Question::kFever || t.question == Question::kResp;
    if (symptom_question && *t.truth == nlu::Intent::kYes && !t.noise) {
      if (slot_for(session.slots, t.question) != TriState::kYes && !decision.escalate()) {
        ++stats.false_negatives;
      }
      continue;
    }
    if (t.noise) continue;
    const bool clear_answer = (symptom_question && *t.truth == nlu::Intent::kNo) ||
                              (t.question == Question::kConsent && *t.truth == nlu::Intent::kYes);
    if (clear_answer && triage::turn_flagged(u, policy)) ++stats.false_positives;
  }
  return stats;
}

Json CampaignState::spec() const {
  return Json{{"config", config},
              {"population", population_config},
              {"start", format_date(start)}};
}

Simulator::Simulator(dialog::Script script, popsim::TemplatePool templates, triage::Policy policy)
    : engine_(std::move(script), policy.limits), templates_(std::move(templates)), policy_(policy) {
  policy_.validate();
}

CampaignState Simulator::create_campaign(Store& store, std::string campaign_id,
                                         CampaignConfig config,
                                         popsim::PopulationConfig population, Timestamp ts) const {
  config.validate();
  population.window_days = config.window_days;
  CampaignState state{
      .campaign_id = std::move(campaign_id),
      .config = config,
      .population_config = population,
      .population = popsim::sample_population(population),
      .start = population.enrolled_at,
  };
  store.create_campaign(state.campaign_id, state.spec(), ts);
  for (const auto& s : state.population) {
    if (store.subjects().count(s.subject.subject_id) == 0) store.register_subject(s.subject, ts);
  }
  return state;
}

SimulatedCall Simulator::run_call(const popsim::Persona& persona, const CallAttempt& attempt,
                                  bool already_called_today, const nlu::Lexicon& lexicon,
                                  int nominal_turns, Rng& rng) const {
  SimulatedCall call;
  call.ended_at = attempt.planned_at;
  const auto conn = popsim::connection_outcome(persona, rng, nominal_turns);
  if (!conn.answered) {
    call.result = AttemptResult::kConnectionFailure;
    return call;
  }

  Timestamp now = attempt.planned_at;
  dialog::CallSession session = engine_.start_session("ses-" + attempt.attempt_id.substr(4),
                                                      attempt.subject_id, already_called_today, now);
  int turn = 1;
  while (!dialog::is_terminal(session.state)) {
    now += kTurnSpacing;
    const auto response = popsim::respond(persona, pending_key(session), templates_, rng);
    if (conn.hang_up_turn && turn >= *conn.hang_up_turn) {
      session = engine_.hang_up(session);
      break;
    }
    const auto nlu = nlu::classify(lexicon, response.text);
    auto next = engine_.advance(session, response.text, nlu, now);
    if (conn.hang_up_turn && dialog::is_terminal(next.session.state)) {
      // Designated hang-up on a dialog that ends before the trigger turn.
      session = engine_.hang_up(session);
      break;
    }
    call.truths[next.session.transcript.size() - (next.reply ? 2 : 1)] = TurnTruth{
        .question = response.question, .truth = response.truth, .noise = response.noise};
    session = std::move(next.session);
    ++turn;
  }

  call.result = session.state == State::kHangup ? AttemptResult::kHangup : AttemptResult::kCompleted;
  call.decision = triage::decide(session, policy_);
  call.stats = score_call(session, call.decision, policy_, call.truths);
  call.ended_at = now;
  call.session = std::move(session);
  return call;
}

std::vector<EventRecord> Simulator::run_day(Store& store, CampaignState& state,
                                            std::uint64_t seed) const {
  if (store.campaigns().count(state.campaign_id) == 0) {
    throw NotFound("campaign " + state.campaign_id);
  }
  const std::size_t first_event = store.events().size();
  const Date day = state.next_day();
  const auto lexicon = store.lexicon_snapshot();

  std::vector<campaign::Subject> subjects;
  subjects.reserve(state.population.size());
  for (const auto& s : state.population) subjects.push_back(s.subject);
  std::map<std::string, std::size_t, std::less<>> index_of;
  for (std::size_t i = 0; i < subjects.size(); ++i) index_of[subjects[i].subject_id] = i;

  std::vector<bool> am_completed(subjects.size(), false);
  const auto planned = schedule(subjects, day, state.config);
  for (Slot slot : {Slot::kAm, Slot::kPm}) {
    std::vector<CallAttempt> pending;
    for (const auto& a : planned) {
      if (a.slot == slot) pending.push_back(a);
    }
    while (!pending.empty()) {
      std::vector<CallAttempt> retries;
      for (auto& attempt : pending) {
        const std::size_t idx = index_of.at(attempt.subject_id);
        Rng rng(derive_seed(seed, {day_number(day), idx, static_cast<std::uint64_t>(slot),
                                   static_cast<std::uint64_t>(attempt.retry_depth)}));
        const bool already_called = slot == Slot::kPm && am_completed[idx];
        auto call = run_call(state.population[idx].persona, attempt, already_called, *lexicon,
                             state.config.nominal_turns, rng);
        attempt.result = call.result;
        CallRecord record{.attempt = attempt,
                          .session = call.session,
                          .decision = call.decision,
                          .stats = call.stats};
        if (call.session) record.attempt.session_ref = call.session->session_id;
        if (call.result == AttemptResult::kConnectionFailure) {
          auto retry = retry_for(attempt, state.config);
          record.final_failure = !retry.has_value();
          if (retry) retries.push_back(std::move(*retry));
        }
        if (slot == Slot::kAm && call.result == AttemptResult::kCompleted) am_completed[idx] = true;
        if (call.session) {
          for (const auto& [seq, t] : call.truths) {
            state.truth.insert_or_assign(turn_ref(call.session->session_id, seq), t);
          }
        }
        store.record_call(record, call.ended_at);
      }
      pending = std::move(retries);
    }
  }
  store.complete_day(state.campaign_id, day, at_hour(day, 23));
  ++state.days_run;
  return {store.events().begin() + static_cast<std::ptrdiff_t>(first_event), store.events().end()};
}

std::string normalized_text(std::string_view text) {
  std::string out;
  for (const auto& token : nlu::tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

std::vector<triage::PoolItem> harvest_pool(const Store& store, const nlu::Lexicon& lexicon,
                                           Date from, Date to,
                                           const std::set<std::string, std::less<>>& exclude) {
  std::map<std::string, triage::PoolItem, std::less<>> by_text;
  for (const auto& [id, stored] : store.sessions()) {
    const auto& s = stored.session;
    const Date day = date_of(s.started_at);
    if (day < from || day > to) continue;
    for (std::size_t seq = 0; seq < s.transcript.size(); ++seq) {
      const auto& u = s.transcript[seq];
      if (u.speaker != dialog::Speaker::kCallee || !u.answering || !dialog::is_polar(*u.answering)) {
        continue;
      }
      std::string key = normalized_text(u.text);
      if (exclude.count(key) != 0) continue;
      triage::PoolItem item{.ref = turn_ref(s.session_id, seq),
                            .text = u.text,
                            .nlu = nlu::classify(lexicon, u.text),
                            .ts = u.ts};
      auto it = by_text.find(key);
      if (it == by_text.end()) {
        by_text.emplace(std::move(key), std::move(item));
      } else if (item.ts < it->second.ts || (item.ts == it->second.ts && item.ref < it->second.ref)) {
        it->second = std::move(item);
      }
    }
  }
  std::vector<triage::PoolItem> pool;
  pool.reserve(by_text.size());
  for (auto& [key, item] : by_text) pool.push_back(std::move(item));
  return pool;
}

std::vector<nlu::LabeledExample> truth_labels(std::span<const triage::PoolItem> batch,
                                              const TruthTable& truth) {
  std::vector<nlu::LabeledExample> out;
  out.reserve(batch.size());
  for (const auto& item : batch) {
    const auto it = truth.find(item.ref);
    if (it == truth.end()) throw NotFound("no ground truth for turn " + item.ref);
    out.push_back(nlu::LabeledExample{
        .text = item.text, .label = it->second.label(), .source = nlu::ExampleSource::kOperator});
  }
  return out;
}

HitlRound run_hitl_round(Store& store, const TruthTable& truth, Date from, Date to, std::size_t k,
                         std::set<std::string, std::less<>>& labeled_texts, Timestamp ts) {
  const auto pool = harvest_pool(store, store.lexicon(), from, to, labeled_texts);
  const auto batch = triage::select_batch(pool, k);
  HitlRound round{.labeled = batch.size(), .lexicon_version = store.lexicon().version()};
  if (batch.empty()) return round;
  const auto examples = truth_labels(batch, truth);
  round.lexicon_version = store.apply_labels(examples, ts);
  for (const auto& item : batch) labeled_texts.insert(normalized_text(item.text));
  return round;
}

}  // namespace symcheck::campaign
