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

#include "symcheck/io/json.h"

#include <fstream>
#include <sstream>

#include "symcheck/common/errors.h"

namespace symcheck {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Json> parse_json_lines(std::string_view text) {
  std::vector<Json> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(Json::parse(line));
      } catch (const Json::exception& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

const Json& require(const Json& obj, const char* field) {
  if (!obj.is_object()) throw ParseError(std::string("expected an object holding '") + field + "'");
  const auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + field + "'");
  return *it;
}

namespace {

template <typename T>
T get(const Json& obj, const char* field) {
  try {
    return require(obj, field).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("field '") + field + "': " + e.what());
  }
}

Timestamp get_ts(const Json& obj, const char* field) {
  return parse_timestamp(get<std::string>(obj, field));
}

}  // namespace

}  // namespace symcheck

namespace symcheck::nlu {

void to_json(Json& j, const NluResult& r) {
  j = Json{{"scores",
            {{"YES", r.score(Intent::kYes)},
             {"NO", r.score(Intent::kNo)},
             {"OTHER", r.score(Intent::kOther)}}},
           {"top1", intent_name(r.top1)},
           {"p_top1", r.p_top1},
           {"margin", r.margin}};
}

void from_json(const Json& j, NluResult& r) {
  const Json& scores = require(j, "scores");
  for (Intent c : kAllIntents) {
    r.scores[static_cast<std::size_t>(c)] = get<double>(scores, std::string(intent_name(c)).c_str());
  }
  r.top1 = parse_intent(get<std::string>(j, "top1"));
  r.p_top1 = get<double>(j, "p_top1");
  r.margin = get<double>(j, "margin");
}

void to_json(Json& j, const LabeledExample& e) {
  j = Json{{"text", e.text},
           {"label", intent_name(e.label)},
           {"source", e.source == ExampleSource::kSeed ? "SEED" : "OPERATOR"}};
}

void from_json(const Json& j, LabeledExample& e) {
  e.text = get<std::string>(j, "text");
  e.label = parse_intent(get<std::string>(j, "label"));
  const std::string source = j.value("source", std::string("OPERATOR"));
  if (source != "SEED" && source != "OPERATOR") throw ParseError("unknown example source " + source);
  e.source = source == "SEED" ? ExampleSource::kSeed : ExampleSource::kOperator;
}

Json lexicon_to_json(const Lexicon& lexicon) {
  Json counts = Json::object();
  for (Intent c : kAllIntents) {
    Json per_class = Json::object();
    for (const auto& [token, n] : lexicon.counts(c)) per_class[token] = n;
    counts[std::string(intent_name(c))] = std::move(per_class);
  }
  Json j{{"version", lexicon.version()}, {"smoothing", lexicon.smoothing()}, {"counts", counts}};
  // Lexicons built from explicit weights carry them verbatim.
  bool has_counts = false;
  for (Intent c : kAllIntents) has_counts = has_counts || !lexicon.counts(c).empty();
  if (!has_counts) {
    Json weights = Json::object();
    for (Intent c : kAllIntents) {
      Json per_class = Json::object();
      for (const auto& [token, w] : lexicon.weights(c)) per_class[token] = w;
      weights[std::string(intent_name(c))] = std::move(per_class);
    }
    j["weights"] = std::move(weights);
  }
  return j;
}

Lexicon lexicon_from_json(const Json& j) {
  const auto version = j.value("version", std::int64_t{1});
  if (j.contains("weights")) {
    std::array<Lexicon::TokenWeights, 3> weights;
    for (const auto& [name, per_class] : j["weights"].items()) {
      auto& w = weights[static_cast<std::size_t>(parse_intent(name))];
      for (const auto& [token, value] : per_class.items()) w[token] = value.get<double>();
    }
    return Lexicon::from_weights(std::move(weights), version);
  }
  std::array<Lexicon::TokenCounts, 3> counts;
  for (const auto& [name, per_class] : require(j, "counts").items()) {
    auto& c = counts[static_cast<std::size_t>(parse_intent(name))];
    for (const auto& [token, value] : per_class.items()) {
      // Tokens are stored normalized so files stay portable.
      const auto normalized = tokenize(token);
      if (normalized.size() != 1) throw ParseError("lexicon token '" + token + "' is not a single token");
      c[normalized.front()] += value.get<std::int64_t>();
    }
  }
  return Lexicon::from_counts(std::move(counts), j.value("smoothing", 1.0), version);
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  try {
    return lexicon_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw ParseError("lexicon " + path.string() + ": " + e.what());
  }
}

}  // namespace symcheck::nlu

namespace symcheck::dialog {

void to_json(Json& j, const Utterance& u) {
  j = Json{{"speaker", u.speaker == Speaker::kSystem ? "SYSTEM" : "CALLEE"},
           {"text", u.text},
           {"ts", format_timestamp(u.ts)}};
  if (u.nlu) j["nlu"] = *u.nlu;
  if (u.answering) j["answering"] = question_name(*u.answering);
  if (u.exhausted_reprompts) j["exhausted_reprompts"] = true;
}

void from_json(const Json& j, Utterance& u) {
  const auto speaker = get<std::string>(j, "speaker");
  if (speaker != "SYSTEM" && speaker != "CALLEE") throw ParseError("unknown speaker " + speaker);
  u.speaker = speaker == "SYSTEM" ? Speaker::kSystem : Speaker::kCallee;
  u.text = get<std::string>(j, "text");
  u.ts = get_ts(j, "ts");
  u.nlu.reset();
  u.answering.reset();
  if (j.contains("nlu")) u.nlu = j["nlu"].get<nlu::NluResult>();
  if (j.contains("answering")) u.answering = parse_question(j["answering"].get<std::string>());
  u.exhausted_reprompts = j.value("exhausted_reprompts", false);
  if (u.speaker == Speaker::kSystem && u.nlu) {
    throw ParseError("system utterances carry no NLU result");
  }
}

void to_json(Json& j, const Slots& s) {
  j = Json{{"fever", tristate_name(s.fever)}, {"respiratory", tristate_name(s.respiratory)}};
  if (s.symptom_detail) j["symptom_detail"] = *s.symptom_detail;
}

void from_json(const Json& j, Slots& s) {
  s.fever = parse_tristate(get<std::string>(j, "fever"));
  s.respiratory = parse_tristate(get<std::string>(j, "respiratory"));
  s.symptom_detail.reset();
  if (j.contains("symptom_detail")) s.symptom_detail = j["symptom_detail"].get<std::string>();
}

void to_json(Json& j, const CallSession& s) {
  j = Json{{"session_id", s.session_id},
           {"subject_id", s.subject_id},
           {"state", state_name(s.state)},
           {"slots", s.slots},
           {"transcript", s.transcript},
           {"turn_count", s.turn_count},
           {"reprompt_count", s.reprompt_count},
           {"consent_refused", s.consent_refused},
           {"started_at", format_timestamp(s.started_at)}};
  if (s.pending) j["pending"] = question_name(*s.pending);
  if (s.outcome) j["outcome"] = state_name(*s.outcome);
}

void from_json(const Json& j, CallSession& s) {
  s.session_id = get<std::string>(j, "session_id");
  s.subject_id = get<std::string>(j, "subject_id");
  s.state = parse_state(get<std::string>(j, "state"));
  s.slots = require(j, "slots").get<Slots>();
  s.transcript = require(j, "transcript").get<std::vector<Utterance>>();
  s.turn_count = get<int>(j, "turn_count");
  s.reprompt_count = get<std::array<int, 3>>(j, "reprompt_count");
  s.consent_refused = j.value("consent_refused", false);
  s.started_at = get_ts(j, "started_at");
  s.pending.reset();
  s.outcome.reset();
  if (j.contains("pending")) s.pending = parse_question(j["pending"].get<std::string>());
  if (j.contains("outcome")) s.outcome = parse_state(j["outcome"].get<std::string>());
}

std::string transcript_json_lines(const CallSession& session) {
  std::string out;
  for (std::size_t seq = 0; seq < session.transcript.size(); ++seq) {
    const auto& u = session.transcript[seq];
    Json line{{"session_id", session.session_id},
              {"seq", seq},
              {"speaker", u.speaker == Speaker::kSystem ? "SYSTEM" : "CALLEE"},
              {"text", u.text},
              {"ts", format_timestamp(u.ts)},
              {"class", nullptr},
              {"p_top1", nullptr}};
    if (u.nlu) {
      line["class"] = nlu::intent_name(u.nlu->top1);
      line["p_top1"] = u.nlu->p_top1;
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace symcheck::dialog

namespace symcheck::triage {

void to_json(Json& j, const Policy& p) {
  j = Json{{"tau", p.confidence_threshold},
           {"max_reprompts", p.limits.max_reprompts},
           {"max_turns", p.limits.max_turns}};
}

void from_json(const Json& j, Policy& p) {
  p.confidence_threshold = j.value("tau", p.confidence_threshold);
  p.limits.max_reprompts = j.value("max_reprompts", p.limits.max_reprompts);
  p.limits.max_turns = j.value("max_turns", p.limits.max_turns);
}

void to_json(Json& j, const UtteranceLabel& l) {
  j = Json{{"seq", l.seq}, {"label", nlu::intent_name(l.label)}};
}

void from_json(const Json& j, UtteranceLabel& l) {
  l.seq = get<std::size_t>(j, "seq");
  l.label = nlu::parse_intent(get<std::string>(j, "label"));
}

void to_json(Json& j, const ReviewDecision& d) {
  j = Json{{"operator_id", d.operator_id},
           {"verdict", verdict_name(d.verdict)},
           {"labels", d.labels},
           {"reviewed_at", format_timestamp(d.reviewed_at)}};
}

void from_json(const Json& j, ReviewDecision& d) {
  d.operator_id = j.value("operator_id", std::string("operator"));
  d.verdict = parse_verdict(get<std::string>(j, "verdict"));
  d.labels = j.value("labels", std::vector<UtteranceLabel>{});
  d.reviewed_at = get_ts(j, "reviewed_at");
}

void to_json(Json& j, const EscalationRecord& r) {
  j = Json{{"record_id", r.record_id},
           {"session_id", r.session_id},
           {"subject_id", r.subject_id},
           {"reason", reason_name(r.reason)},
           {"transcript", r.transcript},
           {"created_at", format_timestamp(r.created_at)},
           {"review_status", review_status_name(r.review_status)},
           {"review", nullptr}};
  if (r.review) j["review"] = *r.review;
}

void from_json(const Json& j, EscalationRecord& r) {
  r.record_id = get<std::string>(j, "record_id");
  r.session_id = get<std::string>(j, "session_id");
  r.subject_id = j.value("subject_id", std::string());
  r.reason = parse_reason(get<std::string>(j, "reason"));
  r.transcript = require(j, "transcript").get<std::vector<dialog::Utterance>>();
  r.created_at = get_ts(j, "created_at");
  r.review_status = parse_review_status(get<std::string>(j, "review_status"));
  r.review.reset();
  if (j.contains("review") && !j["review"].is_null()) r.review = j["review"].get<ReviewDecision>();
  if ((r.review_status == ReviewStatus::kReviewed) != r.review.has_value()) {
    throw ParseError("escalation " + r.record_id + ": review present iff REVIEWED");
  }
}

void to_json(Json& j, const PoolItem& item) {
  j = Json{{"ref", item.ref},
           {"text", item.text},
           {"nlu", item.nlu},
           {"ts", format_timestamp(item.ts)},
           {"uncertainty", nlu::uncertainty(item.nlu)}};
}

void from_json(const Json& j, PoolItem& item) {
  item.ref = get<std::string>(j, "ref");
  item.text = get<std::string>(j, "text");
  item.nlu = require(j, "nlu").get<nlu::NluResult>();
  item.ts = get_ts(j, "ts");
}

}  // namespace symcheck::triage

namespace symcheck::campaign {

void to_json(Json& j, const Subject& s) {
  j = Json{{"subject_id", s.subject_id},
           {"enrolled_at", format_date(s.enrolled_at)},
           {"window_days", s.window_days},
           {"phone_label", s.phone_label}};
}

void from_json(const Json& j, Subject& s) {
  s.subject_id = get<std::string>(j, "subject_id");
  s.enrolled_at = parse_date(get<std::string>(j, "enrolled_at"));
  s.window_days = j.value("window_days", 14);
  s.phone_label = j.value("phone_label", std::string());
  if (s.window_days < 1) throw ContractViolation("window_days must be >= 1");
}

void to_json(Json& j, const CampaignConfig& c) {
  j = Json{{"window_days", c.window_days},
           {"am_hour", c.am_hour},
           {"pm_hour", c.pm_hour},
           {"retry_delay_hours", c.retry_delay_hours},
           {"max_retries", c.max_retries},
           {"retention_days", c.retention_days},
           {"nominal_turns", c.nominal_turns}};
}

void from_json(const Json& j, CampaignConfig& c) {
  c.window_days = j.value("window_days", c.window_days);
  c.am_hour = j.value("am_hour", c.am_hour);
  c.pm_hour = j.value("pm_hour", c.pm_hour);
  c.retry_delay_hours = j.value("retry_delay_hours", c.retry_delay_hours);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.retention_days = j.value("retention_days", c.retention_days);
  c.nominal_turns = j.value("nominal_turns", c.nominal_turns);
}

void to_json(Json& j, const CallAttempt& a) {
  j = Json{{"attempt_id", a.attempt_id},
           {"subject_id", a.subject_id},
           {"planned_at", format_timestamp(a.planned_at)},
           {"slot", slot_name(a.slot)},
           {"result", nullptr},
           {"session_ref", nullptr},
           {"retry_of", nullptr},
           {"retry_depth", a.retry_depth}};
  if (a.result) j["result"] = attempt_result_name(*a.result);
  if (a.session_ref) j["session_ref"] = *a.session_ref;
  if (a.retry_of) j["retry_of"] = *a.retry_of;
}

void from_json(const Json& j, CallAttempt& a) {
  a.attempt_id = get<std::string>(j, "attempt_id");
  a.subject_id = get<std::string>(j, "subject_id");
  a.planned_at = get_ts(j, "planned_at");
  a.slot = parse_slot(get<std::string>(j, "slot"));
  a.result.reset();
  a.session_ref.reset();
  a.retry_of.reset();
  if (j.contains("result") && !j["result"].is_null()) {
    a.result = parse_attempt_result(j["result"].get<std::string>());
  }
  if (j.contains("session_ref") && !j["session_ref"].is_null()) {
    a.session_ref = j["session_ref"].get<std::string>();
  }
  if (j.contains("retry_of") && !j["retry_of"].is_null()) a.retry_of = j["retry_of"].get<std::string>();
  a.retry_depth = j.value("retry_depth", 0);
}

void to_json(Json& j, const TurnStats& t) {
  j = Json{{"turns", t.turns}, {"fn", t.false_negatives}, {"fp", t.false_positives}};
}

void from_json(const Json& j, TurnStats& t) {
  t.turns = get<std::int64_t>(j, "turns");
  t.false_negatives = get<std::int64_t>(j, "fn");
  t.false_positives = get<std::int64_t>(j, "fp");
}

void to_json(Json& j, const DayStats& d) {
  j = Json{{"turns", d.turns},
           {"fn", d.false_negatives},
           {"fp", d.false_positives},
           {"attempts", d.attempts},
           {"answered", d.answered},
           {"connection_failures", d.connection_failures},
           {"completed", d.completed},
           {"hangups", d.hangups},
           {"failed", d.failed},
           {"escalations", d.escalations}};
}

void from_json(const Json& j, DayStats& d) {
  d.turns = get<std::int64_t>(j, "turns");
  d.false_negatives = get<std::int64_t>(j, "fn");
  d.false_positives = get<std::int64_t>(j, "fp");
  d.attempts = get<std::int64_t>(j, "attempts");
  d.answered = get<std::int64_t>(j, "answered");
  d.connection_failures = get<std::int64_t>(j, "connection_failures");
  d.completed = get<std::int64_t>(j, "completed");
  d.hangups = get<std::int64_t>(j, "hangups");
  d.failed = get<std::int64_t>(j, "failed");
  d.escalations = get<std::int64_t>(j, "escalations");
}

void to_json(Json& j, const MetricsReport& r) {
  j = Json{{"period", {{"from", format_date(r.from)}, {"to", format_date(r.to)}}},
           {"total_turns", r.total_turns},
           {"fn_count", r.fn_count},
           {"fp_count", r.fp_count},
           {"fn_ratio", r.fn_ratio},
           {"fp_ratio", r.fp_ratio},
           {"calls_total", r.calls_total},
           {"completed", r.completed},
           {"hangups", r.hangups},
           {"failed", r.failed},
           {"attempts", r.attempts},
           {"connection_failures", r.connection_failures},
           {"escalations", r.escalations},
           {"hangup_rate", r.hangup_rate},
           {"failure_rate", r.failure_rate}};
}

}  // namespace symcheck::campaign

namespace symcheck::popsim {

void to_json(Json& j, const Persona& p) {
  j = Json{{"style", style_name(p.style)},
           {"symptomatic_fever", p.symptomatic_fever},
           {"symptomatic_resp", p.symptomatic_resp},
           {"hang_up_prob", p.hang_up_prob},
           {"conn_fail_prob", p.conn_fail_prob},
           {"noise_prob", p.noise_prob}};
}

void from_json(const Json& j, Persona& p) {
  p.style = parse_style(get<std::string>(j, "style"));
  p.symptomatic_fever = get<bool>(j, "symptomatic_fever");
  p.symptomatic_resp = get<bool>(j, "symptomatic_resp");
  p.hang_up_prob = j.value("hang_up_prob", p.hang_up_prob);
  p.conn_fail_prob = j.value("conn_fail_prob", p.conn_fail_prob);
  p.noise_prob = j.value("noise_prob", p.noise_prob);
  p.validate();
}

void to_json(Json& j, const PopulationConfig& c) {
  j = Json{{"n_subjects", c.n_subjects},
           {"verbose_fraction", c.verbose_fraction},
           {"symptom_prevalence", c.symptom_prevalence},
           {"seed", c.seed},
           {"enrolled_at", format_date(c.enrolled_at)},
           {"window_days", c.window_days},
           {"hang_up_prob", c.hang_up_prob},
           {"conn_fail_prob", c.conn_fail_prob},
           {"noise_prob", c.noise_prob}};
  if (c.verbose_noise_prob) j["verbose_noise_prob"] = *c.verbose_noise_prob;
}

void from_json(const Json& j, PopulationConfig& c) {
  c.n_subjects = j.value("n_subjects", c.n_subjects);
  c.verbose_fraction = j.value("verbose_fraction", c.verbose_fraction);
  c.symptom_prevalence = j.value("symptom_prevalence", c.symptom_prevalence);
  c.seed = j.value("seed", c.seed);
  if (j.contains("enrolled_at")) c.enrolled_at = parse_date(j["enrolled_at"].get<std::string>());
  c.window_days = j.value("window_days", c.window_days);
  c.hang_up_prob = j.value("hang_up_prob", c.hang_up_prob);
  c.conn_fail_prob = j.value("conn_fail_prob", c.conn_fail_prob);
  c.noise_prob = j.value("noise_prob", c.noise_prob);
  if (j.contains("verbose_noise_prob")) c.verbose_noise_prob = j["verbose_noise_prob"].get<double>();
}

}  // namespace symcheck::popsim
