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

// Parser adapter that delegates to an external endpoint (for instance an LLM
// behind a schema-constrained JSON interface).
//
// Request:  POST {"text": ..., "schema": <SchemaSummary>, "history": [TurnRecord...]}
// Response: {"filters": ..., "liked": [...], "disliked": [...], "patience": "patient"|"impatient"}

#include <memory>
#include <semaphore>
#include <stdexcept>
#include <string>

#include <httplib.h>

#include "idss/parsing.hpp"

namespace idss {

class HttpParserAdapter final : public ParserAdapter {
 public:
  // `url` is scheme://host[:port]/path.
  HttpParserAdapter(const std::string& url, int max_in_flight, int timeout_seconds = 30)
      : slots_(std::max(1, max_in_flight)), timeout_(timeout_seconds) {
    const auto scheme = url.find("://");
    const auto path_at = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    base_ = url.substr(0, path_at);
    path_ = path_at == std::string::npos ? "/" : url.substr(path_at);
  }

  ParsedTurn parse(std::string_view text, const SchemaSummary& schema,
                   std::span<const TurnRecord> history) const override {
    json history_json = json::array();
    for (const auto& t : history) history_json.push_back(to_json(t));
    const json request{{"text", std::string(text)}, {"schema", to_json(schema)}, {"history", history_json}};

    slots_.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{slots_};

    httplib::Client client(base_);
    client.set_read_timeout(timeout_, 0);
    auto res = client.Post(path_, request.dump(), "application/json");
    if (!res) throw std::runtime_error("parser endpoint unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw std::runtime_error("parser endpoint returned " + std::to_string(res->status));
    ParsedTurn out;
    try {
      out = parsed_turn_from_json(json::parse(res->body));
    } catch (const json::exception& e) {
      throw ContractError(std::string("parser endpoint response: ") + e.what());
    }
    for (const auto& [dim, _] : out.filter_delta.entries) {
      if (!schema.find(dim)) throw SchemaError("parser endpoint emitted unknown dimension '" + dim + "'");
    }
    return out;
  }

 private:
  mutable std::counting_semaphore<> slots_;
  int timeout_;
  std::string base_;
  std::string path_;
};

}  // namespace idss
