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

#include <algorithm>
#include <atomic>
#include <cctype>
#include <csignal>

#include <fmt/format.h>

#include "crowdlens/error.hpp"
#include "crowdlens/service.hpp"

// After the Eigen headers: <resolv.h> defines a `_res` macro.
#include <httplib.h>

namespace crowdlens {

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

Request to_request(const httplib::Request& req) {
  Request r;
  r.method = req.method;
  r.path = req.path;
  for (const auto& [k, v] : req.params) r.query.try_emplace(k, v);
  for (const auto& [k, v] : req.headers) {
    std::string key = k;
    for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    r.headers.try_emplace(key, v);
  }
  r.body = req.body;
  for (const auto& [name, file] : req.files) r.parts.try_emplace(name, file.content);
  return r;
}

}  // namespace

HttpServer::HttpServer(const ServeConfig& config)
    : config_(config), store_(config.store_path), service_(store_), impl_(std::make_unique<Impl>()) {
  const std::size_t threads = std::max<std::size_t>(1, config_.threads);
  impl_->server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const Response out = service_.handle(to_request(req));
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  int port = config_.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(config_.host);
  } else if (!impl_->server.bind_to_port(config_.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot bind {}:{}", config_.host, config_.port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

namespace {
std::atomic<HttpServer*> g_server{nullptr};
extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}
}  // namespace

void serve(const ServeConfig& config, const std::function<void(int)>& on_ready) {
  HttpServer server(config);
  const int port = server.bind();
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  if (on_ready) on_ready(port);
  server.listen();
  g_server = nullptr;
}

}  // namespace crowdlens
