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

#ifndef SYMCHECK_CAMPAIGN_SIMULATOR_H_
#define SYMCHECK_CAMPAIGN_SIMULATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "symcheck/campaign/campaign.h"
#include "symcheck/campaign/store.h"
#include "symcheck/common/rng.h"
#include "symcheck/dialog/dialog.h"
#include "symcheck/popsim/popsim.h"
#include "symcheck/triage/triage.h"

namespace symcheck::campaign {

// Simulator-side ground truth for one callee turn.
struct TurnTruth {
  dialog::Question question = dialog::Question::kGreeting;
  std::optional<nlu::Intent> truth;
  bool noise = false;

  // Label an operator would give the utterance text.
  nlu::Intent label() const { return noise || !truth ? nlu::Intent::kOther : *truth; }
};

// Keyed by turn_ref(session_id, seq).
using TruthTable = std::map<std::string, TurnTruth, std::less<>>;

std::string turn_ref(std::string_view session_id, std::size_t seq);

// Turn-level FN/FP for a finished call.
//   FN: the callee affirmed a symptom, yet the matching slot is not YES and
//       the call was not escalated.
//   FP: an on-script asymptomatic answer (NO to a symptom question, YES to
//       consent) raised a flag per triage::turn_flagged.
// `truths` is indexed by transcript position; turns without truth are
// skipped.
TurnStats score_call(const dialog::CallSession& session, const triage::Decision& decision,
                     const triage::Policy& policy, const std::map<std::size_t, TurnTruth>& truths);

struct SimulatedCall {
  AttemptResult result = AttemptResult::kConnectionFailure;
  std::optional<dialog::CallSession> session;
  triage::Decision decision;
  TurnStats stats;
  std::map<std::size_t, TurnTruth> truths;
  Timestamp ended_at{};
};

struct CampaignState {
  std::string campaign_id;
  CampaignConfig config;
  popsim::PopulationConfig population_config;
  std::vector<popsim::SimSubject> population;
  Date start{};
  int days_run = 0;
  // Never written to the store.
  TruthTable truth;

  Date next_day() const { return start + std::chrono::days{days_run}; }
  Json spec() const;
};

// Plays simulated calls end to end: popsim persona -> nlu -> dialog -> triage
// -> store.
class Simulator {
 public:
  Simulator(dialog::Script script, popsim::TemplatePool templates, triage::Policy policy);

  // Samples the population, registers its subjects and records the campaign.
  CampaignState create_campaign(Store& store, std::string campaign_id, CampaignConfig config,
                                popsim::PopulationConfig population, Timestamp ts) const;

  // Resolves every attempt of the campaign's next day: AM calls, their
  // retries, then PM calls (REGREETING when the AM call completed) and their
  // retries. Deterministic given (state, store contents, seed). Returns the
  // events appended to the store.
  std::vector<EventRecord> run_day(Store& store, CampaignState& state, std::uint64_t seed) const;

  SimulatedCall run_call(const popsim::Persona& persona, const CallAttempt& attempt,
                         bool already_called_today, const nlu::Lexicon& lexicon, int nominal_turns,
                         Rng& rng) const;

  const dialog::DialogEngine& engine() const { return engine_; }
  const triage::Policy& policy() const { return policy_; }
  const popsim::TemplatePool& templates() const { return templates_; }

 private:
  dialog::DialogEngine engine_;
  popsim::TemplatePool templates_;
  triage::Policy policy_;
};

// Tokenized text joined by single spaces; two texts with the same
// normalization classify identically.
std::string normalized_text(std::string_view text);

// Scored callee turns of stored sessions started within [from, to],
// re-classified with `lexicon`, one item per normalized text (earliest
// kept), skipping texts in `exclude`.
std::vector<triage::PoolItem> harvest_pool(const Store& store, const nlu::Lexicon& lexicon,
                                           Date from, Date to,
                                           const std::set<std::string, std::less<>>& exclude = {});

// Labels taken from simulator ground truth.
std::vector<nlu::LabeledExample> truth_labels(std::span<const triage::PoolItem> batch,
                                              const TruthTable& truth);

struct HitlRound {
  std::size_t labeled = 0;
  std::int64_t lexicon_version = 0;
};

// One active-learning round: harvest, select the k most uncertain, label
// from ground truth, train. Labeled texts are added to `labeled_texts`.
HitlRound run_hitl_round(Store& store, const TruthTable& truth, Date from, Date to, std::size_t k,
                         std::set<std::string, std::less<>>& labeled_texts, Timestamp ts);

}  // namespace symcheck::campaign

#endif  // SYMCHECK_CAMPAIGN_SIMULATOR_H_
