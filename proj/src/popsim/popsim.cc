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

#include "symcheck/popsim/popsim.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symcheck/common/errors.h"

namespace symcheck::popsim {

using dialog::Question;

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation(std::string(name) + " must lie in [0, 1]");
}

Answer parse_answer(std::string_view name) {
  if (name == "YES") return Answer::kYes;
  if (name == "NO") return Answer::kNo;
  if (name == "ANY") return Answer::kAny;
  throw ParseError("unknown template answer key: " + std::string(name));
}

const char* answer_name(Answer a) {
  switch (a) {
    case Answer::kYes:
      return "YES";
    case Answer::kNo:
      return "NO";
    case Answer::kAny:
      return "ANY";
  }
  return "ANY";
}

std::vector<TemplatePool::Key> required_cells() {
  std::vector<TemplatePool::Key> keys;
  for (Style style : {Style::kCooperative, Style::kVerbose}) {
    keys.emplace_back(style, Question::kGreeting, Answer::kAny);
    keys.emplace_back(style, Question::kDetail, Answer::kAny);
    for (Question q : {Question::kConsent, Question::kFever, Question::kResp}) {
      keys.emplace_back(style, q, Answer::kYes);
      keys.emplace_back(style, q, Answer::kNo);
    }
  }
  return keys;
}

}  // namespace

std::string_view style_name(Style style) {
  return style == Style::kCooperative ? "COOPERATIVE" : "VERBOSE";
}

Style parse_style(std::string_view name) {
  if (name == "COOPERATIVE") return Style::kCooperative;
  if (name == "VERBOSE") return Style::kVerbose;
  throw ParseError("unknown persona style: " + std::string(name));
}

void Persona::validate() const {
  check_probability(hang_up_prob, "hang_up_prob");
  check_probability(conn_fail_prob, "conn_fail_prob");
  check_probability(noise_prob, "noise_prob");
}

TemplatePool TemplatePool::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("template pool: ") + e.what());
  }
  TemplatePool pool;
  if (!doc.is_object() || !doc.contains("styles") || !doc.contains("fillers")) {
    throw ParseError("template pool: expected \"styles\" and \"fillers\"");
  }
  for (const auto& [style_key, questions] : doc["styles"].items()) {
    const Style style = parse_style(style_key);
    for (const auto& [question_key, answers] : questions.items()) {
      const Question q = dialog::parse_question(question_key);
      for (const auto& [answer_key, texts] : answers.items()) {
        auto& cell = pool.cells_[{style, q, parse_answer(answer_key)}];
        for (const auto& t : texts) cell.push_back(t.get<std::string>());
      }
    }
  }
  for (const auto& t : doc["fillers"]) pool.fillers_.push_back(t.get<std::string>());
  for (const auto& [style, q, a] : required_cells()) pool.cell(style, q, a);
  if (pool.fillers_.empty()) throw ContractViolation("template pool has no fillers");
  return pool;
}

TemplatePool TemplatePool::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open template pool " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::vector<std::string>& TemplatePool::cell(Style style, Question question,
                                                   Answer answer) const {
  const auto it = cells_.find({style, question, answer});
  if (it == cells_.end() || it->second.empty()) {
    throw ContractViolation("template pool cell " + std::string(style_name(style)) + "/" +
                            std::string(dialog::question_name(question)) + "/" +
                            answer_name(answer) + " is empty");
  }
  return it->second;
}

std::optional<nlu::Intent> intended_answer(const Persona& persona, Question question) {
  switch (question) {
    case Question::kConsent:
      return nlu::Intent::kYes;
    case Question::kFever:
      return persona.symptomatic_fever ? nlu::Intent::kYes : nlu::Intent::kNo;
    case Question::kResp:
      return persona.symptomatic_resp ? nlu::Intent::kYes : nlu::Intent::kNo;
    default:
      return std::nullopt;
  }
}

Response respond(const Persona& persona, dialog::ScriptKey question_key, const TemplatePool& pool,
                 Rng& rng) {
  using dialog::ScriptKey;
  Question q;
  switch (question_key) {
    case ScriptKey::kGreeting:
      q = Question::kGreeting;
      break;
    case ScriptKey::kRegreeting:
    case ScriptKey::kConsentQ:
      q = Question::kConsent;
      break;
    case ScriptKey::kFeverQ:
      q = Question::kFever;
      break;
    case ScriptKey::kRespQ:
      q = Question::kResp;
      break;
    case ScriptKey::kDetailQ:
      q = Question::kDetail;
      break;
    default:
      throw ContractViolation("script key " + std::string(dialog::script_key_name(question_key)) +
                              " is not a question");
  }
  Response r;
  r.question = q;
  r.truth = intended_answer(persona, q);
  const bool noise = rng.bernoulli(persona.noise_prob);
  if (noise) {
    const auto& fillers = pool.fillers();
    r.text = fillers[rng.index(fillers.size())];
    r.noise = true;
    return r;
  }
  const Answer answer =
      !r.truth ? Answer::kAny : (*r.truth == nlu::Intent::kYes ? Answer::kYes : Answer::kNo);
  const auto& cell = pool.cell(persona.style, q, answer);
  r.text = cell[rng.index(cell.size())];
  return r;
}

ConnectionOutcome connection_outcome(const Persona& persona, Rng& rng, int nominal_turns) {
  if (nominal_turns < 1) throw ContractViolation("nominal_turns must be >= 1");
  ConnectionOutcome out;
  if (rng.bernoulli(persona.conn_fail_prob)) return out;
  out.answered = true;
  const double hazard =
      1.0 - std::pow(1.0 - persona.hang_up_prob, 1.0 / static_cast<double>(nominal_turns));
  for (int turn = 1; turn <= nominal_turns; ++turn) {
    if (rng.bernoulli(hazard)) {
      out.hang_up_turn = turn;
      break;
    }
  }
  return out;
}

void PopulationConfig::validate() const {
  check_probability(verbose_fraction, "verbose_fraction");
  check_probability(symptom_prevalence, "symptom_prevalence");
  check_probability(hang_up_prob, "hang_up_prob");
  check_probability(conn_fail_prob, "conn_fail_prob");
  check_probability(noise_prob, "noise_prob");
  if (verbose_noise_prob) check_probability(*verbose_noise_prob, "verbose_noise_prob");
  if (window_days < 1) throw ContractViolation("window_days must be >= 1");
}

std::vector<SimSubject> sample_population(const PopulationConfig& config) {
  config.validate();
  std::vector<SimSubject> out;
  out.reserve(config.n_subjects);
  for (std::size_t i = 0; i < config.n_subjects; ++i) {
    Rng rng(derive_seed(config.seed, {0x706f70ULL, i}));
    SimSubject s;
    char id[32];
    std::snprintf(id, sizeof(id), "subj-%05zu", i + 1);
    s.subject.subject_id = id;
    s.subject.enrolled_at = config.enrolled_at;
    s.subject.window_days = config.window_days;
    s.subject.phone_label = "sim-" + std::to_string(i + 1);

    Persona& p = s.persona;
    if (rng.bernoulli(config.symptom_prevalence)) {
      switch (rng.index(3)) {
        case 0:
          p.symptomatic_fever = true;
          break;
        case 1:
          p.symptomatic_resp = true;
          break;
        default:
          p.symptomatic_fever = p.symptomatic_resp = true;
          break;
      }
    }
    p.style = rng.bernoulli(config.verbose_fraction) ? Style::kVerbose : Style::kCooperative;
    p.hang_up_prob = config.hang_up_prob;
    p.conn_fail_prob = config.conn_fail_prob;
    p.noise_prob = p.style == Style::kVerbose ? config.verbose_noise_prob.value_or(config.noise_prob)
                                              : config.noise_prob;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace symcheck::popsim
