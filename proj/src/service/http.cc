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

#include "symcheck/service/http.h"

#include <httplib.h>

#include "symcheck/common/errors.h"

namespace symcheck::service {
namespace {

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const char* kind, const std::string& message) {
  send(res, status, Json{{"error", kind}, {"message", message}});
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      send(res, 200, fn(req));
    } catch (const NotFound& e) {
      send_error(res, 404, "not_found", e.what());
    } catch (const AlreadyReviewed& e) {
      send_error(res, 409, "already_reviewed", e.what());
    } catch (const InconsistentEvidence& e) {
      send_error(res, 422, "inconsistent_evidence", e.what());
    } catch (const ContractViolation& e) {
      send_error(res, 400, "contract_violation", e.what());
    } catch (const SizeError& e) {
      send_error(res, 400, "size", e.what());
    } catch (const ParseError& e) {
      send_error(res, 400, "parse", e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, "parse", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

Json body_of(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("request body is not JSON: ") + e.what());
  }
}

std::optional<Date> date_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return parse_date(req.get_param_value(name));
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v[0] == '-') {
    throw ContractViolation(std::string(name) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

void register_routes(httplib::Server& server, Service& svc) {
  server.Get("/health", guarded([&](const httplib::Request&) {
    return svc.health();
  }));

  server.Post("/subjects",
              guarded([&](const httplib::Request& req) { return svc.register_subject(body_of(req)); }));
  server.Get(R"(/subjects/([^/]+))", guarded([&](const httplib::Request& req) {
    return svc.get_subject(req.matches[1].str());
  }));

  server.Post("/campaigns",
              guarded([&](const httplib::Request& req) { return svc.create_campaign(body_of(req)); }));
  server.Post(R"(/campaigns/([^/]+)/run-day)", guarded([&](const httplib::Request& req) {
    return svc.run_day(req.matches[1].str(), body_of(req));
  }));

  server.Post("/sessions",
              guarded([&](const httplib::Request& req) { return svc.start_session(body_of(req)); }));
  server.Post(R"(/sessions/([^/]+)/utterance)", guarded([&](const httplib::Request& req) {
    return svc.utterance(req.matches[1].str(), body_of(req));
  }));
  server.Get(R"(/sessions/([^/]+))", guarded([&](const httplib::Request& req) {
    return svc.get_session(req.matches[1].str());
  }));

  server.Get("/escalations", guarded([&](const httplib::Request& req) {
    std::optional<std::string> status;
    if (req.has_param("status")) status = req.get_param_value("status");
    return svc.escalations(status ? std::optional<std::string_view>(*status) : std::nullopt);
  }));
  server.Get(R"(/escalations/([^/]+))", guarded([&](const httplib::Request& req) {
    return svc.get_escalation(req.matches[1].str());
  }));
  server.Post(R"(/escalations/([^/]+)/review)", guarded([&](const httplib::Request& req) {
    return svc.review(req.matches[1].str(), body_of(req));
  }));

  server.Get("/hitl/batch", guarded([&](const httplib::Request& req) {
    return svc.hitl_batch(size_param(req, "k", 50), date_param(req, "from"), date_param(req, "to"));
  }));
  server.Post("/labels",
              guarded([&](const httplib::Request& req) { return svc.apply_labels(body_of(req)); }));

  server.Get("/metrics", guarded([&](const httplib::Request& req) {
    return svc.metrics(date_param(req, "from"), date_param(req, "to"));
  }));

  server.Post("/spread/estimate",
              guarded([&](const httplib::Request& req) { return svc.spread_estimate(body_of(req)); }));
}

bool serve(Service& service, const std::string& host, int port, const std::string& static_dir) {
  httplib::Server server;
  register_routes(server, service);
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) return false;
  return server.listen(host, port);
}

}  // namespace symcheck::service
