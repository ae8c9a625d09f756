// Copyright 2026 The Authors.
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

#pragma once

// Session-oriented JSON API. Handlers are plain functions returning
// (status, body) so they can be exercised without a socket; mount() wires
// them into a cpp-httplib server.

#include <chrono>
#include <memory>
#include <string>

#include <httplib.h>

#include "idss/config.hpp"
#include "idss/dialogue.hpp"

namespace idss {

struct ApiResponse {
  int status = 200;
  json body;
};

class Service {
 public:
  Service(std::shared_ptr<const Engine> engine, EngineConfig defaults, std::string event_log_dir = {},
          std::uint64_t id_seed = std::random_device{}())
      : engine_(std::move(engine)), defaults_(defaults), store_(std::move(event_log_dir), id_seed) {
    defaults_.validate();
  }

  // POST /sessions {strategy?, k?}
  ApiResponse create_session(const std::string& body) {
    return guarded([&] {
      const json j = parse_body(body);
      Strategy strategy = defaults_.strategy;
      int k = defaults_.max_questions;
      if (j.contains("strategy")) {
        if (!j.at("strategy").is_string()) throw ContractError("strategy must be a string");
        strategy = strategy_from_string(j.at("strategy").get<std::string>());
      }
      if (j.contains("k")) {
        if (!j.at("k").is_number_integer()) throw ContractError("k must be an integer");
        k = j.at("k").get<int>();
      }
      EngineConfig cfg = defaults_;
      cfg.strategy = strategy;
      cfg.max_questions = k;
      cfg.validate();
      const std::string id = store_.create(*engine_, strategy, k, cfg);
      return ApiResponse{201, json{{"session_id", id}, {"strategy", to_string(strategy)}, {"k", k}}};
    });
  }

  // POST /sessions/{id}/messages {text}
  ApiResponse post_message(const std::string& id, const std::string& body, bool debug) {
    return guarded([&] {
      const json j = parse_body(body);
      if (!j.contains("text") || !j.at("text").is_string()) throw ContractError("'text' is required");
      const std::string text = j.at("text").get<std::string>();
      if (text::trim(text).empty()) throw ContractError("'text' is empty");
      const TurnResult r = store_.run_turn(*engine_, id, text);
      return ApiResponse{200, to_json(r, debug)};
    });
  }

  // GET /sessions/{id}
  ApiResponse get_session(const std::string& id) const {
    return guarded([&] {
      json j = to_json(store_.snapshot(id));
      j["created_at"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            store_.created_at(id).time_since_epoch())
                            .count();
      return ApiResponse{200, std::move(j)};
    });
  }

  // GET /catalog/schema
  ApiResponse schema() const {
    json j = schema_to_json(engine_->catalog().schema());
    j["summary"] = to_json(engine_->schema_summary());
    j["items"] = engine_->catalog().size();
    return ApiResponse{200, std::move(j)};
  }

  ApiResponse health() const { return ApiResponse{200, json{{"status", "ok"}}}; }

  const SessionStore& store() const { return store_; }

  void mount(httplib::Server& server, const std::string& static_dir = {}) {
    auto reply = [](httplib::Response& res, const ApiResponse& r) {
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    server.Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, create_session(req.body));
    });
    server.Post(R"(/sessions/([^/]+)/messages)", [this, reply](const httplib::Request& req, httplib::Response& res) {
      const bool debug = req.has_param("debug") && req.get_param_value("debug") == "1";
      reply(res, post_message(req.matches[1], req.body, debug));
    });
    server.Get(R"(/sessions/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, get_session(req.matches[1]));
    });
    server.Get("/catalog/schema", [this, reply](const httplib::Request&, httplib::Response& res) {
      reply(res, schema());
    });
    server.Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
    if (!static_dir.empty()) server.set_mount_point("/", static_dir);
  }

 private:
  static json parse_body(const std::string& body) {
    if (text::trim(body).empty()) return json::object();
    json j;
    try {
      j = json::parse(body);
    } catch (const json::parse_error&) {
      throw ContractError("request body is not valid JSON");
    }
    if (!j.is_object()) throw ContractError("request body must be a JSON object");
    return j;
  }

  template <class F>
  static ApiResponse guarded(F&& f) {
    auto error = [](int status, const std::string& what) { return ApiResponse{status, json{{"error", what}}}; };
    try {
      return f();
    } catch (const NotFoundError& e) {
      return error(404, e.what());
    } catch (const ConflictError& e) {
      return error(409, e.what());
    } catch (const ContractError& e) {
      return error(400, e.what());
    } catch (const SchemaError& e) {
      return error(400, e.what());
    } catch (const std::exception& e) {
      return error(500, e.what());
    }
  }

  std::shared_ptr<const Engine> engine_;
  EngineConfig defaults_;
  mutable SessionStore store_;
};

}  // namespace idss
