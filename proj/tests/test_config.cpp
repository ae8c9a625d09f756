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

#include <cstdlib>

#include <gtest/gtest.h>

#include "support.hpp"

namespace idss {
namespace {

TEST(EngineConfigTest, Defaults) {
  const EngineConfig c;
  EXPECT_DOUBLE_EQ(c.tau_h, 0.3);
  EXPECT_EQ(c.max_questions, 2);
  EXPECT_DOUBLE_EQ(c.mmr_lambda, 0.85);
  EXPECT_DOUBLE_EQ(c.cr_lambda, 0.5);
  EXPECT_DOUBLE_EQ(c.match_tau, 0.6);
  EXPECT_EQ(c.top_k, 9u);
  EXPECT_EQ(c.rows * c.cols, 9u);
  EXPECT_EQ(c.entropy_mode, EntropyMode::kNormalized);
  EXPECT_NO_THROW(c.validate());
}

TEST(EngineConfigTest, JsonRoundTripAndValidation) {
  EngineConfig c;
  c.tau_h = 0.5;
  c.entropy_mode = EntropyMode::kRaw;
  c.question_order = QuestionOrder::kFixed;
  c.strategy = Strategy::kCR;
  const EngineConfig back = engine_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(engine_config_from_json(json{{"max_questions", 7}}), ContractError);
  EXPECT_THROW(engine_config_from_json(json{{"mmr_lambda", -0.1}}), ContractError);
  EXPECT_THROW(engine_config_from_json(json{{"entropy_mode", "bits"}}), ContractError);
  EXPECT_THROW(engine_config_from_json(json{{"top_k", "nine"}}), ContractError);
}

TEST(ServiceConfigTest, EnvironmentOverridesFile) {
  const json file{{"port", 9000}, {"engine", {{"max_questions", 3}}}};
  EXPECT_EQ(service_config_from_json(file).port, 9000);
  ::setenv("IDSS_PORT", "9100", 1);
  ::setenv("IDSS_HOST", "0.0.0.0", 1);
  ::setenv("IDSS_TAU_H", "0.4", 1);
  const ServiceConfig c = service_config_from_json(file);
  ::unsetenv("IDSS_PORT");
  ::unsetenv("IDSS_HOST");
  ::unsetenv("IDSS_TAU_H");
  EXPECT_EQ(c.port, 9100);
  EXPECT_EQ(c.host, "0.0.0.0");
  EXPECT_DOUBLE_EQ(c.engine.tau_h, 0.4);
  EXPECT_EQ(c.engine.max_questions, 3);
}

TEST(ServiceConfigTest, ParserSelection) {
  EXPECT_THROW(service_config_from_json(json{{"parser", "llm"}}), ContractError);
  EXPECT_THROW(service_config_from_json(json{{"parser", "http"}}), ContractError);
  EXPECT_NO_THROW(service_config_from_json(json{{"parser", "http"}, {"parser_url", "http://x/parse"}}));
  EXPECT_THROW(load_service_config("/nonexistent/idss.json"), NotFoundError);
  EXPECT_EQ(load_service_config("").parser, "rule");
}

TEST(ServiceConfigTest, ShippedConfigMatchesDefaults) {
  const ServiceConfig c = load_service_config(testing::data_path("../config/idss.json"));
  EXPECT_EQ(to_json(c.engine), to_json(EngineConfig{}));
  EXPECT_EQ(c.port, 8080);
}

}  // namespace
}  // namespace idss
