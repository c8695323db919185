// Copyright 2026 The reqplan Authors
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

#pragma once

#include <string>

// The engine (and Eigen) must come first: httplib pulls in <resolv.h>, whose
// _res macro collides with Eigen parameter names.
#include "reqplan/api_service.hpp"

#include <httplib.h>

namespace reqplan {

// Routes every request of `server` through `service`, with permissive CORS
// for the local UI and a 30 s read/write timeout.
inline void AttachRoutes(httplib::Server& server, ApiService& service) {
  server.set_read_timeout(30, 0);
  server.set_write_timeout(30, 0);
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type, If-Match"},
                              {"Access-Control-Allow-Methods",
                               "GET, PUT, PATCH, POST, OPTIONS"}});
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request{req.method, req.path, req.body, std::nullopt};
    if (req.has_header("If-Match")) request.if_match = req.get_header_value("If-Match");
    const ApiResponse response = service.Handle(request);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  };
  const std::string any = R"(/.*)";
  server.Get(any, handler);
  server.Put(any, handler);
  server.Patch(any, handler);
  server.Post(any, handler);
  server.Options(any, [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
}

}  // namespace reqplan
