// Copyright 2026 The evil-toolkit Authors.
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

#include "httplib.h"

#include "evil/service.hpp"

namespace evil::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

}  // namespace

struct HttpServer::Impl {
  CollectionStore& store;
  std::map<std::string, std::string> tokens;
  httplib::Server server;

  // The annotator the bearer token belongs to, or nullopt.
  std::optional<std::string> caller(const httplib::Request& req) const {
    const auto header = req.get_header_value("Authorization");
    constexpr std::string_view kPrefix = "Bearer ";
    if (!header.starts_with(kPrefix)) return std::nullopt;
    auto it = tokens.find(header.substr(kPrefix.size()));
    if (it == tokens.end()) return std::nullopt;
    return it->second;
  }

  void routes() {
    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}, {"tasks", store.task_count()}});
    });

    server.Get("/api/tasks/next", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("annotator")) {
        send_error(res, 400, "missing annotator parameter");
        return;
      }
      const auto annotator = req.get_param_value("annotator");
      if (caller(req) != annotator) {
        send_error(res, 403, "token does not belong to annotator '" + annotator + "'");
        return;
      }
      try {
        auto task = store.assign(annotator);
        if (!task) {
          res.status = 204;
          return;
        }
        send_json(res, 200, humaneval::to_public_json(*task));
      } catch (const AuthorizationError& e) {
        send_error(res, 403, e.what());
      }
    });

    server.Post("/api/ratings", [this](const httplib::Request& req, httplib::Response& res) {
      humaneval::RatingRecord record;
      try {
        record = humaneval::record_from_json(json::parse(req.body));
      } catch (const json::exception& e) {
        send_error(res, 400, std::string("body is not JSON: ") + e.what());
        return;
      } catch (const ParseError& e) {
        send_error(res, 400, e.what());
        return;
      }
      if (caller(req) != record.annotator_id) {
        send_error(res, 403, "token does not belong to annotator '" + record.annotator_id + "'");
        return;
      }
      try {
        store.submit(record);
        send_json(res, 201, {{"status", "stored"}});
      } catch (const AuthorizationError& e) {
        send_error(res, 403, e.what());
      } catch (const ConflictError& e) {
        send_error(res, 409, e.what());
      } catch (const ValidationError& e) {
        send_error(res, 422, e.what());
      }
    });

    server.Get("/api/report", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, humaneval::to_json(store.report()));
    });

    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            send_error(res, 500, e.what());
          } catch (...) {
            send_error(res, 500, "internal error");
          }
        });
  }
};

HttpServer::HttpServer(CollectionStore& store, std::map<std::string, std::string> tokens)
    : impl_(new Impl{store, std::move(tokens), {}}) {
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const ServerOptions& options) {
  const auto workers = std::max<std::size_t>(options.workers, 1);
  impl_->server.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  int port = options.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(options.host);
  } else if (!impl_->server.bind_to_port(options.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw LoadError("cannot listen on " + options.host + ":" + std::to_string(options.port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace evil::service
