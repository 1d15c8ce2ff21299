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

#ifndef SYMCHECK_SERVICE_HTTP_H_
#define SYMCHECK_SERVICE_HTTP_H_

#include <string>

#include "symcheck/service/service.h"

namespace httplib {
class Server;
}

namespace symcheck::service {

// Maps the JSON API onto `server`. Errors become {"error": kind, "message"}
// with 400 (contract or parse), 404 (unknown id), 409 (double review) or
// 422 (inconsistent spread evidence).
void register_routes(httplib::Server& server, Service& service);

// Blocks until the server stops. A non-empty static_dir is served as static
// files under "/" (the operator console build). Returns false when the
// address cannot be bound or static_dir is not a directory.
bool serve(Service& service, const std::string& host, int port, const std::string& static_dir = "");

}  // namespace symcheck::service

#endif  // SYMCHECK_SERVICE_HTTP_H_
