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

#include "symcheck/service/service.h"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "symcheck/common/errors.h"
#include "symcheck/spread/spread_json.h"

namespace symcheck::service {

namespace fs = std::filesystem;
using campaign::CampaignState;

namespace {

template <typename T>
T parse_body(const Json& body, const char* what) {
  try {
    return body.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad ") + what + ": " + e.what());
  }
}

const Json& object_body(const Json& body) {
  if (!body.is_object()) throw ParseError("request body must be a JSON object");
  return body;
}

Json session_view(const dialog::CallSession& s) {
  Json j{{"session_id", s.session_id},
         {"subject_id", s.subject_id},
         {"state", dialog::state_name(s.state)},
         {"slots", s.slots},
         {"turn_count", s.turn_count},
         {"terminal", dialog::is_terminal(s.state)}};
  return j;
}

}  // namespace

Timestamp system_now() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

Service::Service(Config config, std::optional<fs::path> store_dir, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  config_.validate();
  simulator_ = std::make_unique<campaign::Simulator>(
      dialog::Script::load(config_.data.script), popsim::TemplatePool::load(config_.data.templates),
      config_.policy);

  std::optional<fs::path> log_path;
  if (store_dir) {
    fs::create_directories(*store_dir);
    log_path = *store_dir / kEventLogName;
  }
  if (log_path && fs::exists(*log_path) && fs::file_size(*log_path) > 0) {
    const auto events = campaign::JsonlEventLog::read(*log_path);
    store_.emplace(campaign::Store::replay(events, config_.policy));
    log_ = std::make_unique<campaign::JsonlEventLog>(*log_path);
    store_->set_sink(log_.get());
  } else {
    if (log_path) log_ = std::make_unique<campaign::JsonlEventLog>(*log_path);
    store_.emplace(nlu::load_lexicon(config_.data.lexicon), config_.policy, clock_(), log_.get());
  }
  for (const auto& e : store_->events()) {
    if (e.kind == campaign::EventKind::kSessionEvent &&
        e.payload.value("type", "") == "LIVE_SESSION") {
      ++live_counter_;
    }
  }
  for (const auto& [id, info] : store_->campaigns()) campaigns_.emplace(id, rebuild_state(info));
}

Service::~Service() = default;

CampaignState Service::rebuild_state(const campaign::CampaignInfo& info) const {
  CampaignState state{
      .campaign_id = info.campaign_id,
      .config = info.spec.at("config").get<campaign::CampaignConfig>(),
      .population_config = info.spec.at("population").get<popsim::PopulationConfig>(),
      .start = parse_date(info.spec.at("start").get<std::string>()),
      .days_run = info.days_run,
  };
  state.population = popsim::sample_population(state.population_config);
  return state;
}

CampaignState& Service::state_for(std::string_view campaign_id) {
  const auto it = campaigns_.find(campaign_id);
  if (it == campaigns_.end()) throw NotFound("campaign " + std::string(campaign_id));
  return it->second;
}

const CampaignState& Service::campaign_state(std::string_view campaign_id) const {
  std::lock_guard lock(mu_);
  const auto it = campaigns_.find(campaign_id);
  if (it == campaigns_.end()) throw NotFound("campaign " + std::string(campaign_id));
  return it->second;
}

Json Service::health() const {
  std::lock_guard lock(mu_);
  return Json{{"status", "ok"}, {"lexicon_version", store_->lexicon().version()}};
}

Json Service::register_subject(const Json& body) {
  auto subject = parse_body<campaign::Subject>(object_body(body), "subject");
  std::lock_guard lock(mu_);
  store_->register_subject(subject, now());
  return subject;
}

Json Service::get_subject(std::string_view subject_id) const {
  std::lock_guard lock(mu_);
  const auto it = store_->subjects().find(subject_id);
  if (it == store_->subjects().end()) throw NotFound("subject " + std::string(subject_id));
  return it->second;
}

Json Service::create_campaign(const Json& body) {
  object_body(body);
  campaign::CampaignConfig cc = config_.campaign;
  popsim::PopulationConfig pc = config_.population;
  try {
    if (body.contains("campaign")) body.at("campaign").get_to(cc);
    if (body.contains("population")) body.at("population").get_to(pc);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad campaign config: ") + e.what());
  }
  cc.validate();
  pc.validate();
  std::lock_guard lock(mu_);
  std::string id = body.value("campaign_id", std::string());
  if (id.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "camp-%03zu", store_->campaigns().size() + 1);
    id = buf;
  }
  return create_campaign_locked(std::move(id), cc, pc, Timestamp{pc.enrolled_at});
}

Json Service::create_campaign_locked(std::string campaign_id, campaign::CampaignConfig cc,
                                     popsim::PopulationConfig pc, Timestamp ts) {
  auto state = simulator_->create_campaign(*store_, campaign_id, cc, pc, ts);
  Json out{{"campaign_id", campaign_id},
           {"subjects", state.population.size()},
           {"start", format_date(state.start)},
           {"spec", state.spec()}};
  campaigns_.insert_or_assign(std::move(campaign_id), std::move(state));
  return out;
}

Json Service::run_day(std::string_view campaign_id, const Json& body) {
  object_body(body);
  std::lock_guard lock(mu_);
  CampaignState& state = state_for(campaign_id);
  const Date day = state.next_day();
  const std::uint64_t seed =
      body.contains("seed")
          ? body.at("seed").get<std::uint64_t>()
          : derive_seed(config_.seed, {0x646179ULL, static_cast<std::uint64_t>(state.days_run)});
  const auto events = simulator_->run_day(*store_, state, seed);
  const auto report = store_->report(day, day);
  return Json{{"campaign_id", campaign_id},
              {"day", format_date(day)},
              {"days_run", state.days_run},
              {"events", events.size()},
              {"metrics", report}};
}

Json Service::start_session(const Json& body) {
  object_body(body);
  const auto subject_id = body.value("subject_id", std::string());
  const bool again = body.value("already_called_today", false);
  std::lock_guard lock(mu_);
  if (store_->subjects().count(subject_id) == 0) throw NotFound("subject " + subject_id);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "live-%06llu",
                static_cast<unsigned long long>(live_counter_ + active_.size() + 1));
  auto session = simulator_->engine().start_session(buf, subject_id, again, now());
  Json out = session_view(session);
  out["reply"] = session.transcript.back().text;
  active_.emplace(session.session_id, std::move(session));
  return out;
}

Json Service::utterance(std::string_view session_id, const Json& body) {
  object_body(body);
  if (!body.contains("text") || !body.at("text").is_string()) {
    throw ParseError("utterance body needs a \"text\" string");
  }
  const auto text = body.at("text").get<std::string>();
  std::lock_guard lock(mu_);
  const auto it = active_.find(session_id);
  if (it == active_.end()) {
    if (store_->sessions().count(session_id) != 0) {
      throw ContractViolation("session " + std::string(session_id) + " has already ended");
    }
    throw NotFound("session " + std::string(session_id));
  }
  const auto nlu = nlu::classify(store_->lexicon(), text);
  auto result = simulator_->engine().advance(it->second, text, nlu, now());
  Json out = session_view(result.session);
  out["reply"] = result.reply ? Json(*result.reply) : Json(nullptr);
  out["nlu"] = nlu;
  if (dialog::is_terminal(result.session.state)) {
    const auto decision = triage::decide(result.session, config_.policy);
    const auto record_id = store_->record_live_session(result.session, decision, now());
    out["decision"] = decision.reason ? Json(triage::reason_name(*decision.reason)) : Json("CLEAR");
    out["record_id"] = record_id ? Json(*record_id) : Json(nullptr);
    active_.erase(it);
    ++live_counter_;
  } else {
    it->second = std::move(result.session);
  }
  return out;
}

Json Service::get_session(std::string_view session_id) const {
  std::lock_guard lock(mu_);
  if (const auto it = active_.find(session_id); it != active_.end()) {
    Json j = it->second;
    j["active"] = true;
    return j;
  }
  const auto it = store_->sessions().find(session_id);
  if (it == store_->sessions().end()) throw NotFound("session " + std::string(session_id));
  Json j = it->second.session;
  j["active"] = false;
  j["escalation"] =
      it->second.escalation ? Json(triage::reason_name(*it->second.escalation)) : Json(nullptr);
  j["record_id"] = it->second.record_id ? Json(*it->second.record_id) : Json(nullptr);
  return j;
}

Json Service::escalations(std::optional<std::string_view> status) const {
  std::optional<triage::ReviewStatus> s;
  if (status) s = triage::parse_review_status(*status);
  std::lock_guard lock(mu_);
  return store_->queue().list(s);
}

Json Service::get_escalation(std::string_view record_id) const {
  std::lock_guard lock(mu_);
  return store_->queue().get(record_id);
}

Json Service::review(std::string_view record_id, const Json& body) {
  Json b = object_body(body);
  std::lock_guard lock(mu_);
  const Timestamp ts = now();
  if (!b.contains("reviewed_at")) b["reviewed_at"] = format_timestamp(ts);
  const auto decision = parse_body<triage::ReviewDecision>(b, "review");
  const auto examples = store_->review(record_id, decision, ts);
  return Json{{"record", store_->queue().get(record_id)}, {"examples", examples}};
}

Json Service::hitl_batch(std::size_t k, std::optional<Date> from, std::optional<Date> to) const {
  std::lock_guard lock(mu_);
  const Date lo = from.value_or(Date::min());
  const Date hi = to.value_or(Date::max());
  const auto pool = campaign::harvest_pool(*store_, store_->lexicon(), lo, hi);
  return Json{{"lexicon_version", store_->lexicon().version()},
              {"pool_size", pool.size()},
              {"items", triage::select_batch(pool, k)}};
}

Json Service::apply_labels(const Json& body) {
  const Json& list = body.is_object() && body.contains("examples") ? body.at("examples") : body;
  if (!list.is_array()) throw ParseError("labels body must be an array of examples");
  std::vector<nlu::LabeledExample> examples;
  for (const auto& item : list) {
    nlu::LabeledExample e{.text = item.value("text", std::string()),
                          .label = nlu::parse_intent(item.value("label", std::string())),
                          .source = nlu::ExampleSource::kOperator};
    examples.push_back(std::move(e));
  }
  std::lock_guard lock(mu_);
  const auto version = store_->apply_labels(examples, now());
  return Json{{"lexicon_version", version}, {"examples", examples.size()}};
}

std::optional<Date> Service::first_day() const {
  if (store_->days().empty()) return std::nullopt;
  return store_->days().begin()->first;
}

std::optional<Date> Service::last_day() const {
  if (store_->days().empty()) return std::nullopt;
  return store_->days().rbegin()->first;
}

campaign::MetricsReport Service::report(Date from, Date to) const {
  std::lock_guard lock(mu_);
  return store_->report(from, to);
}

void Service::record_report(const campaign::MetricsReport& report, Timestamp ts) {
  std::lock_guard lock(mu_);
  store_->record_report(report, ts);
}

Json Service::metrics(std::optional<Date> from, std::optional<Date> to) const {
  std::lock_guard lock(mu_);
  const Date today = date_of(now());
  const Date lo = from.value_or(first_day().value_or(today));
  const Date hi = to.value_or(last_day().value_or(today));
  if (hi < lo) throw ContractViolation("metrics range: to is before from");
  return store_->report(lo, hi);
}

Json Service::spread_estimate(const Json& body) const {
  object_body(body);
  spread::SpreadConfig sc = config_.spread;
  try {
    if (body.contains("prior")) body.at("prior").get_to(sc.prior);
    if (body.contains("features")) body.at("features").get_to(sc.model);
    if (body.contains("feature_model")) body.at("feature_model").get_to(sc.model);
    if (body.contains("G")) sc.grid = body.at("G").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad spread request: ") + e.what());
  }
  std::vector<spread::Observation> obs;
  if (body.contains("observations")) {
    if (!body.at("observations").is_array()) throw ParseError("observations must be an array");
    for (const auto& o : body.at("observations")) {
      obs.push_back(spread::observation_from_json(o, sc.model));
    }
  }
  const auto result = spread::posterior(sc.prior, sc.model, obs, sc.grid);
  Json out = spread::result_to_json(result, obs);
  out["prior"] = sc.prior;
  out["features"] = sc.model;
  out["G"] = sc.grid;
  return out;
}

Json Service::purge(Timestamp ts) {
  std::lock_guard lock(mu_);
  const auto removed = store_->purge(ts, config_.retention_days);
  return Json{{"purge_count", removed},
              {"now", format_timestamp(ts)},
              {"horizon", format_timestamp(ts - std::chrono::days{config_.retention_days})}};
}

campaign::HitlRound Service::hitl_round_from_truth(std::string_view campaign_id, std::size_t k,
                                                   Date from, Date to, Timestamp ts) {
  std::lock_guard lock(mu_);
  CampaignState& state = state_for(campaign_id);
  auto& labeled = labeled_texts_[std::string(campaign_id)];
  return campaign::run_hitl_round(*store_, state.truth, from, to, k, labeled, ts);
}

}  // namespace symcheck::service
