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

// Command-line front end over the same Service operations the HTTP API uses.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "symcheck/common/errors.h"
#include "symcheck/service/config.h"
#include "symcheck/service/http.h"
#include "symcheck/service/service.h"
#include "symcheck/spread/spread_json.h"

namespace fs = std::filesystem;
using namespace symcheck;

namespace {

struct Options {
  std::string config;
  std::string store = "symcheck-store";

  // simulate
  int subjects = 100;
  int days = 14;
  std::optional<std::uint64_t> seed;
  std::string out = "sim-out";
  bool force = false;
  int hitl_after = 0;
  int hitl_rounds = 3;
  std::size_t hitl_k = 50;

  // report
  std::string from, to;
  // hitl
  std::size_t k = 50;
  std::string label_file;
  // spread
  std::string obs_file;
  bool json = false;
  std::size_t grid = 0;
  // purge
  std::string now;
  // serve
  std::string addr = "127.0.0.1:8080";
  std::string static_dir;
};

service::Config load(const Options& o) {
  return o.config.empty() ? service::default_config() : service::load_config(o.config);
}

// Shortest round-trip form, always with a decimal point or exponent.
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractViolation("cannot write " + path.string());
  out << text;
}

int cmd_simulate(const Options& o) {
  service::Config cfg = load(o);
  if (o.subjects < 1) throw ContractViolation("--subjects must be >= 1");
  if (o.days < 1) throw ContractViolation("--days must be >= 1");
  if (o.hitl_after != 0 && (o.hitl_after < 1 || o.hitl_after >= o.days)) {
    throw ContractViolation("--hitl-after must lie in [1, days)");
  }
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.population.seed = *o.seed;
  }
  cfg.population.n_subjects = static_cast<std::size_t>(o.subjects);
  // The call window must cover the simulated days.
  cfg.campaign.window_days = std::max(cfg.campaign.window_days, o.days);
  cfg.population.window_days = cfg.campaign.window_days;

  const fs::path dir = o.out;
  const fs::path log = dir / service::kEventLogName;
  if (fs::exists(log)) {
    if (!o.force) {
      throw ContractViolation(log.string() + " already exists; pass --force to replace it");
    }
    fs::remove(log);
  }
  const Date start = cfg.population.enrolled_at;
  service::Service svc(cfg, dir, [start] { return Timestamp{start}; });
  const std::string id = svc.create_campaign(Json{{"campaign_id", "camp-1"}})["campaign_id"];

  std::vector<campaign::MetricsReport> periods;
  Date period_start = start;
  for (int d = 0; d < o.days; ++d) {
    svc.run_day(id, Json::object());
    const Date day = start + std::chrono::days{d};
    if (o.hitl_after > 0 && d + 1 == o.hitl_after) {
      periods.push_back(svc.report(period_start, day));
      const Timestamp ts = at_hour(day, 23) + std::chrono::minutes{30};
      for (int r = 0; r < o.hitl_rounds; ++r) {
        const auto round = svc.hitl_round_from_truth(id, o.hitl_k, period_start, day, ts);
        std::cerr << "hitl round " << r + 1 << ": labeled " << round.labeled
                  << ", lexicon version " << round.lexicon_version << "\n";
      }
      period_start = day + std::chrono::days{1};
    }
  }
  const Date last = start + std::chrono::days{o.days - 1};
  periods.push_back(svc.report(period_start, last));
  for (const auto& p : periods) svc.record_report(p, at_hour(last, 23) + std::chrono::minutes{59});

  const std::string table = campaign::format_report_table(periods);
  write_file(dir / "report.txt", table);
  std::string population;
  for (const auto& s : svc.campaign_state(id).population) {
    population += Json{{"subject_id", s.subject.subject_id}, {"persona", s.persona}}.dump() + "\n";
  }
  write_file(dir / "population.jsonl", population);
  std::cout << table;
  return 0;
}

int cmd_report(const Options& o) {
  service::Service svc(load(o), fs::path(o.store));
  const auto first = svc.first_day();
  const auto last = svc.last_day();
  const Date from = o.from.empty() ? first.value_or(Date{}) : parse_date(o.from);
  const Date to = o.to.empty() ? last.value_or(Date{}) : parse_date(o.to);
  if (to < from) throw ContractViolation("--to is before --from");
  const std::vector<campaign::MetricsReport> periods = {svc.report(from, to)};
  std::cout << campaign::format_report_table(periods);
  return 0;
}

int cmd_hitl_batch(const Options& o) {
  service::Service svc(load(o), fs::path(o.store));
  const Json batch = svc.hitl_batch(o.k);
  for (const auto& item : batch["items"]) std::cout << item.dump() << "\n";
  return 0;
}

int cmd_hitl_label(const Options& o) {
  service::Service svc(load(o), fs::path(o.store));
  const auto lines = parse_json_lines(read_file(o.label_file));
  const Json out = svc.apply_labels(Json(lines));
  std::cout << "lexicon_version " << out["lexicon_version"].get<std::int64_t>() << "\n";
  return 0;
}

int cmd_spread(const Options& o) {
  service::Config cfg = load(o);
  Json body{{"observations", Json::array()}};
  for (const auto& j : parse_json_lines(read_file(o.obs_file))) body["observations"].push_back(j);
  if (o.grid != 0) body["G"] = o.grid;
  service::Service svc(cfg);
  const Json r = svc.spread_estimate(body);
  if (o.json) {
    std::cout << r.dump(2) << "\n";
    return 0;
  }
  std::cout << "p_T1 = " << num(r["p_t1"].get<double>()) << "\n"
            << "q_mean = " << num(r["q_mean"].get<double>()) << "\n"
            << "q_ci95 = [" << num(r["q_ci"][0].get<double>()) << ", "
            << num(r["q_ci"][1].get<double>()) << "]\n";
  for (const auto& z : r["z_post"]) {
    std::cout << "p_infected " << z["id"].get<std::string>() << " = "
              << num(z["p_infected"].get<double>()) << "\n";
  }
  return 0;
}

int cmd_purge(const Options& o) {
  service::Service svc(load(o), fs::path(o.store));
  const Timestamp now = o.now.empty() ? service::system_now() : parse_timestamp(o.now);
  const Json r = svc.purge(now);
  std::cout << "purge_count " << r["purge_count"].get<std::size_t>() << "\n";
  return 0;
}

int cmd_serve(const Options& o) {
  const auto colon = o.addr.rfind(':');
  if (colon == std::string::npos) throw ContractViolation("--addr must be host:port");
  const std::string host = o.addr.substr(0, colon);
  const int port = std::stoi(o.addr.substr(colon + 1));
  std::optional<fs::path> store;
  if (!o.store.empty()) store = o.store;
  service::Service svc(load(o), store);
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!service::serve(svc, host, port, o.static_dir)) throw ContractViolation("cannot listen on " + o.addr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automated symptom-check calls: simulation, triage review, spread estimation"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON config file (defaults built in)")->check(CLI::ExistingFile);

  auto* sim = app.add_subcommand("simulate", "Run a simulated campaign into an event log");
  sim->add_option("--subjects", o.subjects, "Number of simulated subjects");
  sim->add_option("--days", o.days, "Number of days to simulate");
  sim->add_option("--seed", o.seed, "Master seed");
  sim->add_option("--out", o.out, "Output directory");
  sim->add_flag("--force", o.force, "Replace an existing event log in --out");
  sim->add_option("--hitl-after", o.hitl_after, "Run labeling rounds after this many days");
  sim->add_option("--hitl-rounds", o.hitl_rounds, "Labeling rounds");
  sim->add_option("--hitl-k", o.hitl_k, "Utterances labeled per round");

  auto* rep = app.add_subcommand("report", "Print metrics for a date range");
  rep->add_option("--store", o.store, "Store directory")->required();
  rep->add_option("--from", o.from, "First day, YYYY-MM-DD");
  rep->add_option("--to", o.to, "Last day, YYYY-MM-DD");

  auto* hitl = app.add_subcommand("hitl", "Active-learning batches and labels");
  hitl->require_subcommand(1);
  auto* batch = hitl->add_subcommand("batch", "Print the most uncertain utterances as JSON lines");
  batch->add_option("--store", o.store, "Store directory")->required();
  batch->add_option("--k", o.k, "Batch size");
  auto* label = hitl->add_subcommand("label", "Train on labeled utterances ({text, label} lines)");
  label->add_option("--store", o.store, "Store directory")->required();
  label->add_option("--file", o.label_file, "JSON-lines label file")->required()->check(CLI::ExistingFile);

  auto* spread = app.add_subcommand("spread", "Community spread posterior");
  spread->require_subcommand(1);
  auto* est = spread->add_subcommand("estimate", "Posterior from symptom observations");
  est->add_option("--obs", o.obs_file, "JSON-lines observations")->required()->check(CLI::ExistingFile);
  est->add_option("--grid", o.grid, "Quadrature size (>= 64)");
  est->add_flag("--json", o.json, "Print the full result as JSON");

  auto* purge = app.add_subcommand("purge", "Drop records past the retention window");
  purge->add_option("--store", o.store, "Store directory")->required();
  purge->add_option("--now", o.now, "Reference time, YYYY-MM-DDTHH:MM:SSZ");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--addr", o.addr, "host:port");
  serve->add_option("--static", o.static_dir, "Directory of console assets served under /");
  serve->add_option("--store", o.store, "Store directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return cmd_simulate(o);
    if (*rep) return cmd_report(o);
    if (*batch) return cmd_hitl_batch(o);
    if (*label) return cmd_hitl_label(o);
    if (*est) return cmd_spread(o);
    if (*purge) return cmd_purge(o);
    if (*serve) return cmd_serve(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
