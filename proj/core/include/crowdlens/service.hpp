// Copyright 2026 The CrowdLens Authors
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

// HTTP front end. Routing and request handling are plain functions over
// Request/Response values so they can be exercised without a socket;
// serve() binds them to cpp-httplib.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crowdlens/embedding.hpp"
#include "crowdlens/error.hpp"
#include "crowdlens/store.hpp"

namespace crowdlens {

struct Request {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // keys lowercase
  std::string body;
  std::map<std::string, std::string> parts;  // multipart form fields by name
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// HTTP status for an engine error: 404 unknown ids, 409 duplicate ingest,
/// 422 other validation failures, 500 I/O.
int http_status(ErrorCode code);

/// Per-analyst steering state, keyed by the X-Analyst-Id header
/// ("anonymous" when absent). Updated by the parameters of each request;
/// never consulted to fill in missing parameters, so read endpoints stay
/// pure functions of the store snapshot and the query string.
struct SessionState {
  std::string session_id;
  std::optional<std::string> active_dataset;
  double threshold = 50.0;
  bool exclude = true;
  EmbeddingMethod embedding_method = EmbeddingMethod::kMds;
  std::string weight_selection;  // as given in the `weights` parameter
};

class Service {
 public:
  explicit Service(Store& store) : store_(store) {}

  Response handle(const Request& request);

  SessionState session(const std::string& id) const;

 private:
  Response route(const Request& request, const std::string& analyst);
  nlohmann::json session_json(const SessionState& s) const;
  SessionState& touch(const std::string& analyst);

  Store& store_;
  mutable std::mutex session_mu_;
  std::map<std::string, SessionState> sessions_;
};

struct ServeConfig {
  std::string store_path;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t threads = 8;
};

class HttpServer {
 public:
  /// Opens the store; throws Error(kIoError) when it cannot be read.
  explicit HttpServer(const ServeConfig& config);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket and returns the bound port. Throws Error(kIoError).
  int bind();
  /// Blocks until stop() is called.
  void listen();
  void stop();

  Service& service() { return service_; }

 private:
  struct Impl;
  ServeConfig config_;
  Store store_;
  Service service_;
  std::unique_ptr<Impl> impl_;
};

/// Runs the service until the process is interrupted. `on_ready` receives
/// the bound port.
void serve(const ServeConfig& config, const std::function<void(int)>& on_ready = {});

}  // namespace crowdlens
