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

#ifndef SYMCHECK_POPSIM_POPSIM_H_
#define SYMCHECK_POPSIM_POPSIM_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "symcheck/campaign/subject.h"
#include "symcheck/common/rng.h"
#include "symcheck/dialog/dialog.h"
#include "symcheck/dialog/script.h"
#include "symcheck/nlu/nlu.h"

namespace symcheck::popsim {

enum class Style { kCooperative, kVerbose };

std::string_view style_name(Style style);
Style parse_style(std::string_view name);

struct Persona {
  Style style = Style::kCooperative;
  bool symptomatic_fever = false;
  bool symptomatic_resp = false;
  double hang_up_prob = 0.146;
  double conn_fail_prob = 0.073;
  double noise_prob = 0.05;

  bool symptomatic() const { return symptomatic_fever || symptomatic_resp; }
  void validate() const;
};

// Template cell answer: polar questions are keyed YES/NO, the greeting
// acknowledgement and the symptom description are keyed ANY.
enum class Answer { kYes, kNo, kAny };

// Callee replies keyed by (style, question, answer), plus off-script fillers.
class TemplatePool {
 public:
  using Key = std::tuple<Style, dialog::Question, Answer>;

  static TemplatePool load(const std::filesystem::path& path);
  static TemplatePool parse(std::string_view json_text);

  // Throws ContractViolation when a cell is empty or missing.
  const std::vector<std::string>& cell(Style style, dialog::Question question, Answer answer) const;
  const std::vector<std::string>& fillers() const { return fillers_; }
  const std::map<Key, std::vector<std::string>>& cells() const { return cells_; }

 private:
  std::map<Key, std::vector<std::string>> cells_;
  std::vector<std::string> fillers_;
};

// A rendered callee turn with its ground truth.
struct Response {
  std::string text;
  dialog::Question question = dialog::Question::kGreeting;
  // Intended answer for polar questions; empty for greeting and description.
  std::optional<nlu::Intent> truth;
  // Off-script filler was substituted for the intended answer.
  bool noise = false;
};

// Ground-truth answer to a question. Personas always consent.
std::optional<nlu::Intent> intended_answer(const Persona& persona, dialog::Question question);

// Renders a reply to the system line identified by `question_key`.
// REPROMPT and CLOSING are not questions and raise ContractViolation; callers
// answering a reprompt pass the pending question's key.
Response respond(const Persona& persona, dialog::ScriptKey question_key, const TemplatePool& pool,
                 Rng& rng);

struct ConnectionOutcome {
  bool answered = false;
  // 1-based callee turn the persona hangs up instead of speaking.
  std::optional<int> hang_up_turn;
};

// CONNECTION_FAILURE with probability conn_fail_prob. An answered call gets a
// hang-up trigger from a per-turn geometric hazard h = 1 - (1 - p)^(1/n) over
// the nominal n-turn script, so P(trigger) = hang_up_prob exactly. A caller
// whose dialog would end before the trigger turn hangs up at its last turn.
ConnectionOutcome connection_outcome(const Persona& persona, Rng& rng, int nominal_turns = 5);

struct PopulationConfig {
  std::size_t n_subjects = 0;
  double verbose_fraction = 0.3;
  double symptom_prevalence = 0.02;
  std::uint64_t seed = 0;
  Date enrolled_at{};
  int window_days = 14;
  double hang_up_prob = 0.146;
  double conn_fail_prob = 0.073;
  double noise_prob = 0.05;
  // Separate noise rate for VERBOSE personas; defaults to noise_prob.
  std::optional<double> verbose_noise_prob;

  void validate() const;
};

struct SimSubject {
  campaign::Subject subject;
  Persona persona;
};

// Deterministic given the seed. A symptomatic person has fever only,
// respiratory symptoms only, or both, with equal probability.
std::vector<SimSubject> sample_population(const PopulationConfig& config);

}  // namespace symcheck::popsim

#endif  // SYMCHECK_POPSIM_POPSIM_H_
