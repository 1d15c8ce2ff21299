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
#include <httplib.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "symcheck/common/errors.h"
#include "symcheck/service/config.h"
#include "symcheck/service/http.h"
#include "symcheck/service/service.h"

namespace symcheck::service {
namespace {

namespace fs = std::filesystem;

const Timestamp kNow = parse_timestamp("2020-03-09T12:00:00Z");

Clock fixed_clock() {
  return [] { return kNow; };
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("symcheck_service_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Config small_config() {
  Config c = default_config();
  c.population.n_subjects = 20;
  return c;
}

TEST_CASE("config defaults and parsing") {
  Config d = default_config();
  CHECK(d.retention_days == 30);
  CHECK(d.policy.confidence_threshold == doctest::Approx(0.7));
  CHECK(d.policy.limits.max_reprompts == 2);
  CHECK(d.policy.limits.max_turns == 12);
  CHECK(d.spread.grid == 1024);
  CHECK_NOTHROW(d.validate());

  Config f = load_config(SYMCHECK_DATA_DIR "/default_config.json");
  CHECK(config_to_json(f) == config_to_json(d));

  Config c = parse_config(Json{{"seed", 3}, {"policy", {{"tau", 0.8}}}}, SYMCHECK_DATA_DIR);
  CHECK(c.seed == 3);
  CHECK(c.population.seed == 3);
  CHECK(c.policy.confidence_threshold == doctest::Approx(0.8));

  CHECK_THROWS_AS(parse_config(Json{{"polcy", Json::object()}}, "."), ParseError);
  CHECK_THROWS_AS(parse_config(Json{{"policy", {{"tau", 1.5}}}}, SYMCHECK_DATA_DIR), ContractViolation);
  CHECK_THROWS_AS(parse_config(Json{{"retention_days", 0}}, SYMCHECK_DATA_DIR), ContractViolation);
  CHECK_THROWS(parse_config(Json{{"data", {{"script", "missing.json"}}}}, SYMCHECK_DATA_DIR));
}

TEST_CASE("interactive call through the service") {
  Service svc(small_config(), std::nullopt, fixed_clock());
  svc.register_subject({{"subject_id", "p1"}, {"enrolled_at", "2020-03-02"}});
  CHECK(svc.get_subject("p1")["subject_id"] == "p1");
  CHECK_THROWS_AS(svc.get_subject("p2"), NotFound);
  CHECK_THROWS_AS(svc.start_session({{"subject_id", "p2"}}), NotFound);

  Json s = svc.start_session({{"subject_id", "p1"}});
  std::string id = s["session_id"];
  CHECK(s["state"] == "GREETING");
  svc.utterance(id, {{"text", "Hello?"}});
  Json r = svc.utterance(id, {{"text", "Yes."}});
  CHECK(r["state"] == "FEVER_Q");
  r = svc.utterance(id, {{"text", "No."}});
  CHECK(r["state"] == "RESP_Q");
  CHECK(r["reply"].get<std::string>().find("shortness of breath") != std::string::npos);
  CHECK(r["nlu"]["top1"] == "NO");
  r = svc.utterance(id, {{"text", "No. I don't"}});
  CHECK(r["terminal"] == true);
  CHECK(r["decision"] == "CLEAR");
  CHECK(r["record_id"].is_null());
  CHECK(svc.get_session(id)["active"] == false);
  CHECK_THROWS_AS(svc.utterance(id, {{"text", "No."}}), ContractViolation);
  CHECK_THROWS_AS(svc.utterance("nope", {{"text", "No."}}), NotFound);
}

TEST_CASE("concurrent calls are serialized") {
  Service svc(small_config(), std::nullopt, fixed_clock());
  svc.register_subject({{"subject_id", "p1"}, {"enrolled_at", "2020-03-02"}});
  std::vector<std::thread> threads;
  std::vector<std::string> ids(8);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    threads.emplace_back([&, t] {
      Json s = svc.start_session({{"subject_id", "p1"}});
      ids[t] = s["session_id"];
      for (const char* text : {"Hello?", "Yes.", "No.", "No."}) svc.utterance(ids[t], {{"text", text}});
    });
  }
  for (auto& th : threads) th.join();
  std::set<std::string> unique(ids.begin(), ids.end());
  CHECK(unique.size() == ids.size());
  CHECK(svc.store().sessions().size() == ids.size());
  CHECK(svc.health()["status"] == "ok");
}

TEST_CASE("spread estimate through the service") {
  Service svc(small_config(), std::nullopt, fixed_clock());
  Json empty = svc.spread_estimate({{"observations", Json::array()}});
  CHECK(empty["p_t1"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  Json one = svc.spread_estimate(
      {{"observations", {{{"id", "a"}, {"features", Json::object()}, {"confirmed", true}}}}});
  CHECK(one["p_t1"].get<double>() == 1.0);
  CHECK_THROWS_AS(svc.spread_estimate({{"observations", Json::array()}, {"G", 3}}),
                  ContractViolation);
  CHECK_THROWS_AS(
      svc.spread_estimate({{"observations", {{{"id", "a"}, {"features", {{"fever", 1}}}}}}}),
      ContractViolation);
}

TEST_CASE("store directory survives a restart") {
  fs::path dir = scratch("restart");
  Json before;
  {
    Service svc(small_config(), dir, fixed_clock());
    svc.create_campaign({{"campaign_id", "c1"}});
    svc.run_day("c1", Json::object());
    svc.run_day("c1", Json::object());
    before = svc.store().state_json();
  }
  Service again(small_config(), dir, fixed_clock());
  CHECK(again.store().state_json() == before);
  CHECK(again.campaign_state("c1").days_run == 2);
  Json day3 = again.run_day("c1", Json::object());
  CHECK(day3["day"] == "2020-03-04");

  Service fresh(small_config(), std::nullopt, fixed_clock());
  fresh.create_campaign({{"campaign_id", "c1"}});
  for (int i = 0; i < 3; ++i) fresh.run_day("c1", Json::object());
  CHECK(fresh.store().state_json() == again.store().state_json());
}

struct Server {
  Service svc{small_config(), std::nullopt, fixed_clock()};
  httplib::Server http;
  std::thread thread;
  int port = 0;

  Server() {
    register_routes(http, svc);
    port = http.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { http.listen_after_bind(); });
    http.wait_until_ready();
  }
  ~Server() {
    http.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

Json post(httplib::Client& c, const std::string& path, const Json& body, int expect = 200) {
  auto res = c.Post(path, body.dump(), "application/json");
  REQUIRE(res);
  CHECK_MESSAGE(res->status == expect, path << " -> " << res->body);
  return Json::parse(res->body);
}

Json get(httplib::Client& c, const std::string& path, int expect = 200) {
  auto res = c.Get(path);
  REQUIRE(res);
  CHECK_MESSAGE(res->status == expect, path << " -> " << res->body);
  return Json::parse(res->body);
}

TEST_CASE("HTTP API") {
  Server s;
  auto c = s.client();
  CHECK(get(c, "/health")["status"] == "ok");

  post(c, "/subjects", {{"subject_id", "p1"}, {"enrolled_at", "2020-03-02"}});
  get(c, "/subjects/p1");
  get(c, "/subjects/zz", 404);

  Json sess = post(c, "/sessions", {{"subject_id", "p1"}, {"already_called_today", true}});
  std::string id = sess["session_id"];
  CHECK(sess["state"] == "REGREETING");
  post(c, "/sessions/" + id + "/utterance", {{"text", "Yes."}});
  Json r = post(c, "/sessions/" + id + "/utterance", {{"text", "No."}});
  CHECK(r["reply"].get<std::string>().find(
            "Do you have a cough or symptoms like shortness of breath now?") != std::string::npos);
  post(c, "/sessions/" + id + "/utterance", {{"text", ""}}, 200);
  post(c, "/sessions/nope/utterance", {{"text", "No."}}, 404);
  post(c, "/sessions/" + id + "/utterance", {{"nottext", 1}}, 400);
  get(c, "/sessions/" + id);

  Json spread = post(c, "/spread/estimate", {{"observations", Json::array()}});
  CHECK(spread["p_t1"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spread["q_grid"].size() == spread["q_density"].size());
  post(c, "/spread/estimate",
       {{"observations", Json::array()}, {"prior", {{"pi_t", 0.0}, {"alpha", 1}, {"beta", 9}}},
        {"feature_model", Json::array()}});
  Json impossible = post(c, "/spread/estimate",
                         {{"observations", {{{"id", "a"}, {"features", Json::object()}, {"confirmed", true}}}},
                          {"prior", {{"pi_t", 0.0}, {"alpha", 1}, {"beta", 9}}}},
                         422);
  CHECK(impossible["error"] == "inconsistent_evidence");
  post(c, "/spread/estimate", Json::array(), 400);
  auto bad = c.Post("/spread/estimate", "{not json", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  get(c, "/hitl/batch?k=-1", 400);
  get(c, "/escalations/none", 404);
  post(c, "/escalations/none/review", {{"verdict", "OVERRIDE_CLEAR"}}, 404);
}

TEST_CASE("operator review workflow over HTTP") {
  Server s;
  auto c = s.client();
  post(c, "/campaigns", {{"campaign_id", "demo"}, {"population", {{"n_subjects", 30}, {"enrolled_at", "2020-03-02"}}}});
  Json day = post(c, "/campaigns/demo/run-day", {{"seed", 1}});
  CHECK(day["day"] == "2020-03-02");
  post(c, "/campaigns/nope/run-day", Json::object(), 404);

  Json pending = get(c, "/escalations?status=PENDING");
  REQUIRE(pending.size() > 0);
  std::string rid = pending[0]["record_id"];
  Json rec = get(c, "/escalations/" + rid);
  std::size_t callee = 0;
  for (std::size_t i = 0; i < rec["transcript"].size(); ++i)
    if (rec["transcript"][i]["speaker"] == "CALLEE") callee = i;
  Json review = {{"verdict", "OVERRIDE_CLEAR"},
                 {"operator_id", "op1"},
                 {"labels", {{{"seq", callee}, {"label", "NO"}}}}};
  Json first = post(c, "/escalations/" + rid + "/review", review);
  CHECK(first["record"]["review_status"] == "REVIEWED");
  CHECK(first["examples"].size() == 1);
  Json again = post(c, "/escalations/" + rid + "/review", review, 409);
  CHECK(again["error"] == "already_reviewed");
  for (const auto& r : get(c, "/escalations?status=PENDING")) CHECK(r["record_id"] != rid);
  post(c, "/escalations/" + rid + "/review", {{"verdict", "MAYBE"}}, 400);

  Json batch = get(c, "/hitl/batch?k=5");
  CHECK(batch["items"].size() <= 5);
  CHECK(batch["lexicon_version"] == 1);
  REQUIRE(batch["items"].size() > 0);
  Json labels = Json::array();
  for (const auto& item : batch["items"]) labels.push_back({{"text", item["text"]}, {"label", "NO"}});
  Json trained = post(c, "/labels", {{"examples", labels}});
  CHECK(trained["lexicon_version"] == 2);
  post(c, "/labels", {{"examples", Json::array()}}, 400);
  CHECK(get(c, "/health")["lexicon_version"] == 2);

  Json m = get(c, "/metrics?from=2020-03-02&to=2020-03-02");
  CHECK(m["total_turns"].get<int>() > 0);
  get(c, "/metrics?from=2020-03-05&to=2020-03-02", 400);
  get(c, "/metrics?from=garbage", 400);
}

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(SYMCHECK_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST_CASE("CLI") {
  fs::path dir = scratch("cli");
  Run sim = run("simulate --subjects 15 --days 3 --seed 7 --out " + (dir / "a").string());
  CHECK(sim.status == 0);
  CHECK(fs::exists(dir / "a" / "events.jsonl"));
  CHECK(sim.out.find("False positive") != std::string::npos);
  Run refuse = run("simulate --subjects 15 --days 3 --seed 7 --out " + (dir / "a").string());
  CHECK(refuse.status != 0);
  run("simulate --subjects 15 --days 3 --seed 7 --out " + (dir / "b").string());
  CHECK(slurp(dir / "a" / "events.jsonl") == slurp(dir / "b" / "events.jsonl"));
  CHECK(slurp(dir / "a" / "report.txt") == slurp(dir / "b" / "report.txt"));

  Run rep = run("report --store " + (dir / "a").string() + " --from 2020-03-02 --to 2020-03-04");
  CHECK(rep.status == 0);
  CHECK(rep.out.find("Total turns") != std::string::npos);

  Run batch = run("hitl batch --store " + (dir / "a").string() + " --k 3");
  CHECK(batch.status == 0);
  {
    std::ofstream labels(dir / "labels.jsonl");
    labels << R"({"text": "Nothing like that, no.", "label": "NO"})" << "\n";
  }
  Run label = run("hitl label --store " + (dir / "a").string() + " --file " + (dir / "labels.jsonl").string());
  CHECK(label.status == 0);
  CHECK(label.out.find("lexicon_version 2") != std::string::npos);

  fs::create_directories(dir / "fresh");
  Run purge = run("purge --store " + (dir / "fresh").string() + " --now 2020-05-01T00:00:00Z");
  CHECK(purge.status == 0);
  CHECK(purge.out.find("purge_count 0") != std::string::npos);
  Run purge_old = run("purge --store " + (dir / "a").string() + " --now 2020-05-01T00:00:00Z");
  CHECK(purge_old.out.find("purge_count 0") == std::string::npos);
  Run purge_again = run("purge --store " + (dir / "a").string() + " --now 2020-05-01T00:00:00Z");
  CHECK(purge_again.out.find("purge_count 0") != std::string::npos);

  {
    std::ofstream obs(dir / "confirmed_one.jsonl");
    obs << R"({"id": "p1", "features": {}, "confirmed": true})" << "\n";
    std::ofstream bad(dir / "bad.jsonl");
    bad << R"({"id": "p1", "features": {"fever": 1}})" << "\n";
  }
  Run est = run("spread estimate --obs " + (dir / "confirmed_one.jsonl").string());
  CHECK(est.status == 0);
  CHECK(est.out.find("p_T1 = 1.0") != std::string::npos);
  Run bad = run("spread estimate --obs " + (dir / "bad.jsonl").string());
  CHECK(bad.status != 0);
  CHECK(bad.out.find("error:") != std::string::npos);
  CHECK(run("spread estimate --obs /nonexistent.jsonl").status != 0);
  CHECK(run("bogus").status != 0);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace symcheck::service
