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

// Engine and service configuration: one JSON file, every key overridable by
// an IDSS_<KEY> environment variable (e.g. IDSS_TAU_H=0.4).

#include <cstdlib>
#include <fstream>
#include <string>
#include <string_view>

#include "idss/catalog.hpp"
#include "idss/entropy.hpp"
#include "idss/ranking.hpp"

namespace idss {

enum class QuestionOrder { kEntropy, kFixed };

inline std::string to_string(QuestionOrder q) { return q == QuestionOrder::kFixed ? "fixed" : "entropy"; }
inline std::string to_string(EntropyMode m) { return m == EntropyMode::kRaw ? "raw" : "normalized"; }

struct EngineConfig {
  double tau_h = 0.3;
  EntropyMode entropy_mode = EntropyMode::kNormalized;
  int max_questions = 2;
  double mmr_lambda = 0.85;
  double cr_lambda = 0.5;
  double match_tau = 0.6;
  std::size_t top_k = 9;
  std::size_t rows = 3;
  std::size_t cols = 3;
  QuestionOrder question_order = QuestionOrder::kEntropy;
  Strategy strategy = Strategy::kES;

  RankingParams ranking() const { return RankingParams{top_k, mmr_lambda, cr_lambda, match_tau}; }

  void validate() const {
    auto unit = [](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0)) throw ContractError(std::string(name) + " must lie in [0, 1]");
    };
    if (!(tau_h >= 0.0)) throw ContractError("tau_h must be non-negative");
    if (max_questions < 0 || max_questions > 5) throw ContractError("max_questions must lie in [0, 5]");
    unit(mmr_lambda, "mmr_lambda");
    unit(cr_lambda, "cr_lambda");
    unit(match_tau, "match_tau");
    if (top_k == 0 || rows == 0 || cols == 0) throw ContractError("top_k, rows and cols must be positive");
  }
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string catalog_path = "data/cars.csv";
  std::string schema_path = "data/cars.schema.json";
  std::string static_dir;     // empty: no static mount
  std::string event_log_dir;  // empty: no event log
  std::string parser = "rule";  // "rule" or "http"
  std::string parser_url;
  int parser_max_in_flight = 4;
  EngineConfig engine;
};

namespace config_detail {

inline std::string env_name(std::string_view key) {
  std::string out = "IDSS_";
  for (char c : key) out.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
  return out;
}

// The file value, replaced by the environment when the variable is set.
inline std::optional<json> lookup(const json& file, std::string_view key) {
  if (const char* env = std::getenv(env_name(key).c_str())) {
    const std::string s = env;
    try {
      return json::parse(s);
    } catch (const json::parse_error&) {
      return json(s);
    }
  }
  if (file.is_object() && file.contains(std::string(key))) return file.at(std::string(key));
  return std::nullopt;
}

template <class T>
void read(const json& file, std::string_view key, T& out) {
  if (auto v = lookup(file, key)) {
    try {
      out = v->get<T>();
    } catch (const json::exception& e) {
      throw ContractError("config key '" + std::string(key) + "': " + e.what());
    }
  }
}

}  // namespace config_detail

inline EngineConfig engine_config_from_json(const json& j) {
  using config_detail::read;
  EngineConfig c;
  read(j, "tau_h", c.tau_h);
  read(j, "max_questions", c.max_questions);
  read(j, "mmr_lambda", c.mmr_lambda);
  read(j, "cr_lambda", c.cr_lambda);
  read(j, "match_tau", c.match_tau);
  read(j, "top_k", c.top_k);
  read(j, "rows", c.rows);
  read(j, "cols", c.cols);
  std::string mode = to_string(c.entropy_mode), order = to_string(c.question_order), strategy = to_string(c.strategy);
  read(j, "entropy_mode", mode);
  read(j, "question_order", order);
  read(j, "strategy", strategy);
  if (mode != "normalized" && mode != "raw") throw ContractError("entropy_mode must be 'normalized' or 'raw'");
  if (order != "entropy" && order != "fixed") throw ContractError("question_order must be 'entropy' or 'fixed'");
  c.entropy_mode = mode == "raw" ? EntropyMode::kRaw : EntropyMode::kNormalized;
  c.question_order = order == "fixed" ? QuestionOrder::kFixed : QuestionOrder::kEntropy;
  c.strategy = strategy_from_string(strategy);
  c.validate();
  return c;
}

inline json to_json(const EngineConfig& c) {
  return json{{"tau_h", c.tau_h},
              {"entropy_mode", to_string(c.entropy_mode)},
              {"max_questions", c.max_questions},
              {"mmr_lambda", c.mmr_lambda},
              {"cr_lambda", c.cr_lambda},
              {"match_tau", c.match_tau},
              {"top_k", c.top_k},
              {"rows", c.rows},
              {"cols", c.cols},
              {"question_order", to_string(c.question_order)},
              {"strategy", to_string(c.strategy)}};
}

inline ServiceConfig service_config_from_json(const json& j) {
  using config_detail::read;
  ServiceConfig c;
  read(j, "host", c.host);
  read(j, "port", c.port);
  read(j, "catalog_path", c.catalog_path);
  read(j, "schema_path", c.schema_path);
  read(j, "static_dir", c.static_dir);
  read(j, "event_log_dir", c.event_log_dir);
  read(j, "parser", c.parser);
  read(j, "parser_url", c.parser_url);
  read(j, "parser_max_in_flight", c.parser_max_in_flight);
  if (c.parser != "rule" && c.parser != "http") throw ContractError("parser must be 'rule' or 'http'");
  if (c.parser == "http" && c.parser_url.empty()) throw ContractError("parser 'http' needs parser_url");
  if (c.parser_max_in_flight < 1) throw ContractError("parser_max_in_flight must be positive");
  c.engine = engine_config_from_json(j.contains("engine") ? j.at("engine") : json::object());
  return c;
}

// A missing path yields defaults (plus environment overrides).
inline ServiceConfig load_service_config(const std::string& path) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("config file '" + path + "' not found");
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ContractError("config file '" + path + "': " + e.what());
    }
  }
  return service_config_from_json(j);
}

}  // namespace idss
